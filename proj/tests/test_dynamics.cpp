#include <doctest.h>

#include <cmath>

#include "qnm/biorthogonal.hpp"
#include "qnm/dynamics.hpp"
#include "qnm/error.hpp"

using namespace qnm;

namespace {

std::vector<double> linspace(double t0, double t1, int n) {
  std::vector<double> out;
  for (int k = 0; k < n; ++k) out.push_back(t0 + (t1 - t0) * k / (n - 1));
  return out;
}

std::vector<QnmMode> normalized_pairs(const DensityProfile& model, int pairs) {
  std::vector<QnmMode> out;
  for (const auto& m : paired_spectrum(model, pairs)) out.push_back(normalize_mode(m, model));
  return out;
}

ErrorKind fdtd_error(const DensityProfile& model, double dx) {
  const auto grid = make_grid(model, dx);
  try {
    evolve_fdtd(gaussian_state(model, grid, 0.5, 0.1), model, 1.0, dx);
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("FDTD accepted the setup");
  return ErrorKind::InvalidConfig;
}

}  // namespace

TEST_CASE("a pulse leaves a matched cavity without reflection") {
  const auto uniform = validate_model({Family::Wave, 1.0, {{0.0, 1.0, 1.0}}, {}});
  const double dx = 1.0 / 400;
  const auto s0 = gaussian_state(uniform, make_grid(uniform, dx), 0.5, 0.05);
  const double e0 = interior_energy(s0, uniform);
  for (double cfl : {0.9, 1.0}) {
    FdtdOptions opts;
    opts.cfl = cfl;
    opts.record_times = {0.0, 1.0, 2.5};
    const auto trace = evolve_fdtd(s0, uniform, 2.5, dx, opts);
    CHECK(std::abs(interior_energy(trace.states[0], uniform) - e0) < 1e-6 * e0);
    CHECK(interior_energy(trace.states[2], uniform) < 1e-6 * e0);
  }
}

TEST_CASE("FDTD energy never grows") {
  const auto rod = dielectric_rod(2.0);
  const double dx = 1.0 / 500;
  const auto s0 = gaussian_state(rod, make_grid(rod, dx), 0.5, 0.1);
  const auto trace = evolve_fdtd(s0, rod, 5.0, dx);
  // the continuum energy of interpolated states matches the conserved
  // discrete energy only to O(dx^2)
  for (std::size_t i = 1; i < trace.states.size(); ++i)
    CHECK(interior_energy(trace.states[i], rod) <= interior_energy(trace.states[i - 1], rod) * (1.0 + 1e-5));
}

TEST_CASE("QNM expansion and FDTD agree on a layered cavity with point masses") {
  const auto model =
      validate_model({Family::Wave, 1.0, {{0.0, 0.5, 2.25}, {0.5, 1.0, 6.25}}, {{0.25, 0.1}, {1.0, 0.05}}});
  const double dx = 1.0 / 1000;
  const auto grid = make_grid(model, dx);
  const auto s0 = gaussian_state(model, grid, 0.6, 0.08);
  const auto times = linspace(0.0, 4.0, 21);
  const auto modes = normalized_pairs(model, 40);
  const auto qnm_trace = evolve_qnm(s0, modes, times, model);
  CHECK(qnm_trace.warnings.empty());
  FdtdOptions opts;
  opts.record_times = times;
  const auto fdtd = evolve_fdtd(s0, model, 4.0, dx, opts);
  const auto errors = compare_evolutions(qnm_trace, fdtd);
  CHECK(max_error(errors, 1.0, 4.0) < 1e-3);
  for (double r : qnm_trace.imag_ratio) CHECK(r < 1e-10);
}

TEST_CASE("FDTD converges at second order") {
  const auto rod = dielectric_rod(2.0);
  const auto modes = normalized_pairs(rod, 30);
  const std::vector<double> times{2.0};
  std::vector<double> errs;
  for (double dx : {1.0 / 100, 1.0 / 200, 1.0 / 400}) {
    const auto grid = make_grid(rod, dx);
    const auto s0 = gaussian_state(rod, grid, 0.5, 0.1);
    FdtdOptions opts;
    opts.record_times = times;
    const auto reference = evolve_qnm(s0, modes, times, rod);
    errs.push_back(compare_evolutions(reference, evolve_fdtd(s0, rod, 2.0, dx, opts))[0].relative_l2);
  }
  CHECK(errs[0] / errs[1] > 3.0);
  CHECK(errs[1] / errs[2] > 3.0);
}

TEST_CASE("FDTD setup errors") {
  CHECK(fdtd_error(validate_model({Family::Wave, 1.0, {{0.0, 1.0, 4.0}}, {{0.2505, 1.0}}}), 0.01) ==
        ErrorKind::MassOffGrid);
  CHECK(fdtd_error(validate_model({Family::Wave, 1.0, {{0.0, 0.3333, 4.0}, {0.3333, 1.0, 2.0}}, {}}), 0.01) ==
        ErrorKind::BoundaryOffGrid);
  CHECK(fdtd_error(validate_model({Family::KleinGordon, 1.0, {{0.0, 1.0, 4.0}}, {}}), 0.01) ==
        ErrorKind::UnsupportedFamily);
  CHECK(fdtd_error(dielectric_rod(2.0), 0.0071) == ErrorKind::UnstableParameters);
}

TEST_CASE("comparison bookkeeping") {
  const auto rod = dielectric_rod(2.0);
  const auto modes = normalized_pairs(rod, 5);
  const auto grid = make_grid(rod, 0.01);
  const auto s0 = gaussian_state(rod, grid, 0.5, 0.1);
  const auto times = linspace(0.0, 1.0, 11);
  const auto trace = evolve_qnm(s0, modes, times, rod);
  for (const auto& e : compare_evolutions(trace, trace)) CHECK(e.relative_l2 == 0.0);

  // interpolation in time between reference samples
  const auto fine = evolve_qnm(s0, modes, linspace(0.0, 1.0, 101), rod);
  const auto coarse_times = std::vector<double>{0.05, 0.55, 0.95};
  const auto coarse = evolve_qnm(s0, modes, coarse_times, rod);
  for (const auto& e : compare_evolutions(coarse, fine)) CHECK(e.relative_l2 < 1e-6);

  const auto other = evolve_qnm(gaussian_state(rod, make_grid(rod, 0.02), 0.5, 0.1), modes, times, rod);
  CHECK_THROWS_AS(compare_evolutions(trace, other), Error);

  // dropping a partner leaves spurious imaginary parts and a warning
  std::vector<QnmMode> open(modes.begin(), modes.begin() + 3);
  const auto lopsided = evolve_qnm(s0, open, times, rod);
  REQUIRE(lopsided.warnings.size() == 1);
  CHECK(lopsided.warnings[0].rfind("ModeSetNotConjugateClosed", 0) == 0);
  CHECK(lopsided.imag_ratio[0] > 1e-3);
}

TEST_CASE("probe reads phi at a point") {
  const auto rod = dielectric_rod(2.0);
  const auto modes = normalized_pairs(rod, 3);
  const auto grid = make_grid(rod, 0.01);
  const std::vector<cplx> coeffs{1.0, 0.0, 0.0, 0.0, 0.0, 0.0};
  const std::vector<double> times{0.0, 0.5};
  const auto trace = evolve_qnm(coeffs, modes, grid, times, rod);
  const auto values = probe(trace, 0.7);
  CHECK(std::abs(values[0] - modes[0].f(0.7)) < 1e-9);
  CHECK(std::abs(values[1] - modes[0].f(0.7) * std::exp(cplx(0.0, -0.5) * modes[0].omega)) < 1e-9);
}
