#include <doctest.h>

#include "qnm/error.hpp"
#include "qnm/model.hpp"
#include "qnm/model_io.hpp"

using namespace qnm;

namespace {

ErrorKind kind_of(const ModelCandidate& raw) {
  try {
    validate_model(raw);
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("model was accepted");
  return ErrorKind::InvalidConfig;
}

}  // namespace

TEST_CASE("validate_model rejects broken tilings") {
  CHECK(kind_of({Family::Wave, 1.0, {{0.0, 0.5, 1.0}}, {}}) == ErrorKind::GapOrOverlap);
  CHECK(kind_of({Family::Wave, 1.0, {{0.0, 0.5, 1.0}, {0.6, 1.0, 1.0}}, {}}) == ErrorKind::GapOrOverlap);
  CHECK(kind_of({Family::Wave, 1.0, {{0.0, 0.6, 1.0}, {0.5, 1.0, 1.0}}, {}}) == ErrorKind::GapOrOverlap);
  CHECK(kind_of({Family::Wave, 1.0, {{0.1, 1.0, 1.0}}, {}}) == ErrorKind::GapOrOverlap);
  CHECK(kind_of({Family::Wave, 0.0, {{0.0, 0.0, 1.0}}, {}}) == ErrorKind::GapOrOverlap);
  CHECK(kind_of({Family::Wave, 1.0, {}, {}}) == ErrorKind::GapOrOverlap);
}

TEST_CASE("validate_model rejects bad densities and masses") {
  CHECK(kind_of({Family::Wave, 1.0, {{0.0, 1.0, 0.0}}, {}}) == ErrorKind::NonPositiveDensity);
  CHECK(kind_of({Family::Wave, 1.0, {{0.0, 1.0, -2.0}}, {}}) == ErrorKind::NonPositiveDensity);
  CHECK(kind_of({Family::Wave, 1.0, {{0.0, 1.0, 4.0}}, {{0.0, 1.0}}}) == ErrorKind::BadPointMass);
  CHECK(kind_of({Family::Wave, 1.0, {{0.0, 1.0, 4.0}}, {{1.5, 1.0}}}) == ErrorKind::BadPointMass);
  CHECK(kind_of({Family::Wave, 1.0, {{0.0, 1.0, 4.0}}, {{0.5, -1.0}}}) == ErrorKind::BadPointMass);
  CHECK(kind_of({Family::Wave, 1.0, {{0.0, 1.0, 4.0}}, {{0.5, 1.0}, {0.5, 2.0}}}) == ErrorKind::BadPointMass);
  // a zero potential is fine in the KleinGordon family
  CHECK_NOTHROW(validate_model({Family::KleinGordon, 1.0, {{0.0, 1.0, 0.0}}, {}}));
}

TEST_CASE("completeness eligibility") {
  CHECK(dielectric_rod(2.0).completeness_eligible());
  CHECK(mirror_cavity(10.0).completeness_eligible());
  const auto uniform = validate_model({Family::Wave, 1.0, {{0.0, 1.0, 1.0}}, {}});
  CHECK_FALSE(uniform.completeness_eligible());
  REQUIRE(uniform.warnings().size() == 1);
  CHECK(uniform.warnings()[0].rfind("NotCompletenessEligible", 0) == 0);
  // jump inside but not at a
  CHECK_FALSE(validate_model({Family::Wave, 1.0, {{0.0, 0.5, 4.0}, {0.5, 1.0, 1.0}}, {}}).completeness_eligible());
}

TEST_CASE("evaluate_density one-sided limits") {
  const auto m = validate_model({Family::Wave, 2.0, {{0.0, 1.0, 4.0}, {1.0, 2.0, 9.0}}, {}});
  CHECK(evaluate_density(m, 0.5) == 4.0);
  CHECK(evaluate_density(m, 1.0, Side::Left) == 4.0);
  CHECK(evaluate_density(m, 1.0, Side::Right) == 9.0);
  CHECK(evaluate_density(m, 2.0, Side::Left) == 9.0);
  CHECK(evaluate_density(m, 2.0, Side::Right) == 1.0);
  CHECK(evaluate_density(m, 3.0) == 1.0);
  const auto kg = validate_model({Family::KleinGordon, 1.0, {{0.0, 1.0, 5.0}}, {}});
  CHECK(evaluate_density(kg, 1.5) == 0.0);
  CHECK(inertia_density(kg, 0.5) == 1.0);
}

TEST_CASE("pieces split at interior point masses") {
  const auto m = validate_model({Family::Wave, 1.0, {{0.0, 0.5, 2.0}, {0.5, 1.0, 3.0}},
                                 {{0.25, 0.1}, {0.5, 0.2}, {1.0, 0.3}}});
  REQUIRE(m.pieces().size() == 3);
  CHECK(m.pieces()[0].x_right == 0.25);
  CHECK(m.pieces()[1].x_left == 0.25);
  CHECK(m.pieces()[2].value == 3.0);
  CHECK(m.boundary_mass() == 0.3);
}

TEST_CASE("model JSON round trip and strict parsing") {
  const auto m = validate_model({Family::Wave, 1.0, {{0.0, 0.3, 2.25}, {0.3, 1.0, 6.25}}, {{0.3, 0.5}}});
  CHECK(parse_model(serialize_model(m)) == m);
  CHECK(validate_model(m.to_candidate()) == m);
  auto expect_parse_error = [](const std::string& text) {
    try {
      parse_model(text);
      FAIL("accepted: " << text);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::ParseError);
    }
  };
  expect_parse_error("{\"family\":\"Wave\",\"a\":1,\"segments\":[],\"extra\":1}");
  expect_parse_error("{\"family\":\"Wave\",\"a\":1,\"segments\":[{\"x_left\":0,\"x_right\":1,\"rho\":1,\"n\":2}]}");
  expect_parse_error("{\"family\":\"Dirac\",\"a\":1,\"segments\":[]}");
  expect_parse_error("{\"family\":\"Wave\",\"segments\":[]}");
  expect_parse_error("not json");
  // validation errors pass through unchanged
  try {
    parse_model("{\"family\":\"Wave\",\"a\":1,\"segments\":[{\"x_left\":0,\"x_right\":1,\"rho\":-1}]}");
    FAIL("accepted negative density");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonPositiveDensity);
  }
}

TEST_CASE("error kinds map to exit codes") {
  CHECK(exit_code(ErrorKind::GapOrOverlap) == 2);
  CHECK(exit_code(ErrorKind::InvalidConfig) == 2);
  CHECK(exit_code(ErrorKind::NewtonDiverged) == 3);
  CHECK(exit_code(ErrorKind::NonIntegerWindingNumber) == 3);
  CHECK(to_string(ErrorKind::DegeneratePair) == "DegeneratePair");
}
