#include <doctest.h>

#include "qnm/error.hpp"
#include "qnm/ringdown.hpp"

using namespace qnm;

TEST_CASE("matrix pencil recovers synthetic damped sinusoids") {
  const std::vector<cplx> omegas{{0.8, -0.27}, {-0.8, -0.27}, {2.4, -0.27}, {-2.4, -0.27}, {5.1, -0.6}};
  const std::vector<cplx> amps{{1.0, 0.5}, {1.0, -0.5}, {0.3, 0.0}, {0.3, 0.0}, {0.05, 0.02}};
  const double t0 = 1.0, dt = 0.05;
  std::vector<cplx> samples;
  for (int k = 0; k < 300; ++k) {
    cplx s{0.0, 0.0};
    for (std::size_t j = 0; j < omegas.size(); ++j)
      s += amps[j] * std::exp(cplx(0.0, -1.0) * omegas[j] * (t0 + k * dt));
    samples.push_back(s);
  }
  const auto fit = fit_damped_sinusoids(samples, t0, dt);
  REQUIRE(fit.components.size() == omegas.size());
  CHECK(fit.relative_residual < 1e-10);
  for (const auto& w : omegas) {
    bool found = false;
    for (const auto& c : fit.components) found = found || std::abs(c.omega - w) < 1e-9;
    CHECK(found);
  }
  const auto f = fundamental(fit);
  CHECK(std::abs(f.omega - omegas[0]) < 1e-9);
  // amplitudes refer to t0
  CHECK(std::abs(f.amplitude - amps[0] * std::exp(cplx(0.0, -1.0) * omegas[0] * t0)) < 1e-8);
}

TEST_CASE("fixed-order fit and errors") {
  std::vector<cplx> samples;
  for (int k = 0; k < 40; ++k) samples.push_back(std::exp(cplx(0.0, -1.0) * cplx(1.5, -0.1) * (0.1 * k)));
  const auto fit = fit_damped_sinusoids(samples, 0.0, 0.1, 1);
  REQUIRE(fit.components.size() == 1);
  CHECK(std::abs(fit.components[0].omega - cplx(1.5, -0.1)) < 1e-12);
  CHECK_THROWS_AS(fit_damped_sinusoids(std::span(samples).first(3), 0.0, 0.1), Error);
  RingdownFit decaying;
  decaying.components.push_back({{0.0, -1.0}, {1.0, 0.0}});
  CHECK_THROWS_AS(fundamental(decaying), Error);
}
