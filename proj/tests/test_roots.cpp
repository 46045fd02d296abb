#include <doctest.h>

#include <algorithm>

#include "qnm/error.hpp"
#include "qnm/roots.hpp"

using namespace qnm;

namespace {

AnalyticFn cubic(cplx z1, cplx z2, cplx z3) {
  return [=](cplx z) {
    const cplx v = (z - z1) * (z - z2) * (z - z3);
    const cplx d = (z - z2) * (z - z3) + (z - z1) * (z - z3) + (z - z1) * (z - z2);
    return std::make_pair(v, d);
  };
}

}  // namespace

TEST_CASE("argument principle counts zeros") {
  const auto fn = cubic({0.3, -0.2}, {1.7, -0.9}, {5.0, 1.0});
  CHECK(count_zeros(fn, {0.0, 2.0, -1.0, 0.0}).count == 2);
  CHECK(count_zeros(fn, {0.0, 1.0, -1.0, 0.0}).count == 1);
  CHECK(count_zeros(fn, {2.0, 4.0, -1.0, 0.0}).count == 0);
  CHECK(count_zeros(fn, {-1.0, 6.0, -2.0, 2.0}).count == 3);
}

TEST_CASE("contour through a zero is nudged") {
  const auto fn = cubic({1.0, -0.5}, {3.0, -0.5}, {10.0, 0.0});
  // the right edge passes exactly through z = 1 - 0.5i
  const auto c = count_zeros(fn, {0.0, 1.0, -1.0, 0.0});
  CHECK(c.nudges > 0);
  CHECK(c.count == 1);
}

TEST_CASE("find_zeros locates and polishes every zero") {
  const std::vector<cplx> want{{0.3, -0.2}, {0.31, -0.2}, {1.7, -0.9}};
  const auto fn = cubic(want[0], want[1], want[2]);
  RootOptions opts;
  for (int threads : {1, 4}) {
    opts.threads = threads;
    const auto got = find_zeros(fn, {0.0, 2.0, -1.0, 0.0, 1e-13}, opts);
    REQUIRE(got.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(got[i] - want[i]) < 1e-12);
  }
}

TEST_CASE("a double zero is reported as degenerate") {
  const auto fn = cubic({1.0, -0.3}, {1.0, -0.3}, {8.0, 0.0});
  try {
    find_zeros(fn, {0.0, 2.0, -1.0, 0.0});
    FAIL("double zero accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DegenerateRoot);
  }
}

TEST_CASE("newton_polish converges and reports divergence") {
  const auto fn = cubic({2.0, 0.0}, {-1.0, 0.5}, {0.0, 4.0});
  CHECK(std::abs(newton_polish(fn, {1.8, 0.1}, 1e-14) - cplx(2.0, 0.0)) < 1e-14);
  const AnalyticFn no_zero = [](cplx z) { return std::make_pair(std::exp(z), std::exp(z)); };
  CHECK_THROWS_AS(newton_polish(no_zero, {0.0, 0.0}, 1e-12, 20), Error);
}
