#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "qnm/biorthogonal.hpp"
#include "qnm/error.hpp"

using namespace qnm;
using testing::rel;

namespace {

DensityProfile layered() {
  return validate_model({Family::Wave, 1.0, {{0.0, 0.5, 2.25}, {0.5, 1.0, 6.25}}, {{0.25, 0.1}, {1.0, 0.05}}});
}

std::vector<QnmMode> normalized_pairs(const DensityProfile& model, int pairs) {
  std::vector<QnmMode> out;
  for (const auto& m : paired_spectrum(model, pairs)) out.push_back(normalize_mode(m, model));
  return out;
}

}  // namespace

TEST_CASE("closed-form bilinear map agrees with quadrature") {
  const auto model = layered();
  const auto modes = paired_spectrum(model, 4);
  for (std::size_t n = 0; n < modes.size(); n += 3)
    for (std::size_t m = 0; m < modes.size(); m += 2) {
      const auto exact = bilinear_map(modes[n], modes[m], model);
      const auto quad = bilinear_map_quadrature(modes[n], modes[m], model);
      const double scale = std::abs(exact.interior_part) + std::abs(exact.surface_part);
      CHECK(std::abs(exact.value - quad.value) < 1e-11 * scale);
      CHECK(std::abs(exact.surface_part - quad.surface_part) < 1e-13 * scale);
    }
}

TEST_CASE("sampled states reproduce the closed-form norm") {
  const auto model = layered();
  const auto modes = paired_spectrum(model, 2);
  const auto grid = make_grid(model, 1.0 / 400);
  for (const auto& m : modes) {
    const auto state = sample_mode(m, model, grid);
    const cplx brute = bilinear_map(state, state, model).value;
    CHECK(rel(brute, bilinear_map(m, m, model).value) < 1e-9);
    CHECK(rel(bilinear_map(m, state, model).value, brute) < 1e-9);
  }
}

TEST_CASE("QNMs are orthogonal and normalized under the bilinear map") {
  for (const auto& model : {layered(), mirror_cavity(10.0), dielectric_rod(1.5)}) {
    const auto modes = normalized_pairs(model, 6);
    const auto g = gram_matrix(modes, model);
    CHECK(g.offdiag_max < 1e-10);
    CHECK(g.diag_max_deviation < 1e-10);
    // the plain inner product is not diagonal
    const auto grid = make_grid(model, 1.0 / 200);
    const auto s0 = sample_mode(modes[0], model, grid), s2 = sample_mode(modes[2], model, grid);
    CHECK(std::abs(plain_inner_product(s0, s2, model)) > 1e-3);
  }
}

TEST_CASE("normalization convention") {
  const auto rod = dielectric_rod(2.0);
  for (const auto& raw : find_modes(rod, {0.0, 6.0, -1.0, 0.5})) {
    const auto m = normalize_mode(raw, rod);
    CHECK(m.normalized);
    CHECK(rel(bilinear_map(m, m, rod).value, 2.0 * m.omega) < 1e-13);
    CHECK(m.df(0.0, Side::Right).real() > 0.0);
  }
}

TEST_CASE("duality is an involution and generates the bilinear map") {
  const auto model = layered();
  const auto grid = make_grid(model, 0.002);
  const auto modes = paired_spectrum(model, 2);
  const auto s = sample_mode(modes[0], model, grid);
  const auto dd = dual(dual(s));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(std::abs(dd.phi[i] - s.phi[i]) < 1e-15 * (1.0 + std::abs(s.phi[i])));
    CHECK(std::abs(dd.phi_hat[i] - s.phi_hat[i]) < 1e-15 * (1.0 + std::abs(s.phi_hat[i])));
  }
  // conjugate linear
  TwoComponentState scaled = s;
  for (auto& v : scaled.phi) v *= cplx(2.0, 1.0);
  for (auto& v : scaled.phi_hat) v *= cplx(2.0, 1.0);
  const auto ds = dual(s), dscaled = dual(scaled);
  for (std::size_t i = 0; i < grid.size(); i += 50)
    CHECK(std::abs(dscaled.phi[i] - cplx(2.0, -1.0) * ds.phi[i]) < 1e-13 * (1.0 + std::abs(ds.phi[i])));
  // interior part of (Psi, Phi) is the plain product <D Psi | Phi>; point masses are not sampled
  const auto rod = dielectric_rod(2.0);
  const auto rg = make_grid(rod, 0.002);
  const auto rm = paired_spectrum(rod, 2);
  const auto psi = sample_mode(rm[0], rod, rg), phi = sample_mode(rm[3], rod, rg);
  const auto b = bilinear_map(psi, phi, rod);
  CHECK(std::abs(plain_inner_product(dual(psi), phi, rod) - b.interior_part) < 1e-9 * std::abs(b.interior_part));
}

TEST_CASE("expansion of a single mode, point masses included") {
  const auto model = layered();
  const auto modes = normalized_pairs(model, 5);
  const auto grid = make_grid(model, 1.0 / 500);
  for (std::size_t n : {0u, 3u, 8u}) {
    const auto coeffs = expansion_coefficients(sample_mode(modes[n], model, grid), modes, model);
    for (std::size_t m = 0; m < modes.size(); ++m) CHECK(std::abs(coeffs[m] - (m == n ? 1.0 : 0.0)) < 1e-9);
  }
  const auto raw = paired_spectrum(model, 1);
  CHECK_THROWS_AS(expansion_coefficients(sample_mode(raw[0], model, grid), raw, model), Error);
}

TEST_CASE("H symmetry matches the Gram-matrix expansion") {
  const auto model = layered();
  const auto modes = normalized_pairs(model, 3);
  const auto g = gram_matrix(modes, model);
  std::mt19937 rng(7);
  std::normal_distribution<double> gauss;
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<cplx> c, d;
    for (std::size_t n = 0; n < modes.size(); ++n) {
      c.emplace_back(gauss(rng), gauss(rng));
      d.emplace_back(gauss(rng), gauss(rng));
    }
    cplx oracle{0.0, 0.0};
    double scale = 0.0;
    for (std::size_t n = 0; n < modes.size(); ++n)
      for (std::size_t m = 0; m < modes.size(); ++m) {
        oracle += c[n] * d[m] * (modes[m].omega - modes[n].omega) * g.gram[n][m];
        scale += std::abs(c[n] * d[m] * modes[m].omega * g.gram[n][m]);
      }
    const cplx got = check_H_symmetry(c, d, modes, model);
    CHECK(std::abs(got - oracle) < 1e-10 * scale);
    CHECK(std::abs(got) < 1e-10 * scale);
  }
}

TEST_CASE("sum rules converge on the rod") {
  const auto rod = dielectric_rod(2.0);
  const auto modes = normalized_pairs(rod, 40);
  const std::vector<int> counts{20, 40, 80};
  const auto sweep = sum_rule_sweep(modes, 0.3, 0.4, 0.1, rod, counts);
  CHECK(std::abs(sweep[2].s1) < 0.6 * std::abs(sweep[0].s1));
  CHECK(std::abs(sweep[1].s2_smeared) < 0.1 * std::abs(sweep[0].s2_smeared));
  CHECK(std::abs(sweep[2].s2_smeared) < 1e-5);
  // the smeared identity is the real delta, not i times it
  CHECK(std::abs(sweep[0].s2_smeared.imag()) < 1e-10);
}

TEST_CASE("sum rule preconditions") {
  const auto rod = dielectric_rod(2.0);
  const auto modes = normalized_pairs(rod, 2);
  try {
    sum_rule_residuals(modes, 0.5, 0.05, 0.1, rod);
    FAIL("leaking test function accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::TestFunctionLeaksOutsideInterval);
  }
  CHECK_THROWS_AS(sum_rule_residuals(paired_spectrum(rod, 2), 0.5, 0.5, 0.1, rod), Error);
}

TEST_CASE("bilinear map of states needs a shared grid") {
  const auto rod = dielectric_rod(2.0);
  const auto m = paired_spectrum(rod, 1)[0];
  const auto a = sample_mode(m, rod, make_grid(rod, 0.01)), b = sample_mode(m, rod, make_grid(rod, 0.02));
  try {
    bilinear_map(a, b, rod);
    FAIL("grid mismatch accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::GridMismatch);
  }
}
