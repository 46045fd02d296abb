#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "qnm/model.hpp"

namespace testing {

using cplx = std::complex<double>;

// Classical RK4 for f'' = -q f with q constant on each (x_left, x_right, q)
// piece, from f(0) = 0, f'(0) = 1. Independent of the transfer matrices.
struct ShootPiece {
  double x_left;
  double x_right;
  cplx q;
};

inline std::pair<cplx, cplx> rk4_shoot(const std::vector<ShootPiece>& pieces, int steps_per_piece) {
  cplx f{0.0, 0.0}, g{1.0, 0.0};
  for (const auto& p : pieces) {
    const double h = (p.x_right - p.x_left) / steps_per_piece;
    for (int i = 0; i < steps_per_piece; ++i) {
      const cplx k1f = g, k1g = -p.q * f;
      const cplx k2f = g + 0.5 * h * k1g, k2g = -p.q * (f + 0.5 * h * k1f);
      const cplx k3f = g + 0.5 * h * k2g, k3g = -p.q * (f + 0.5 * h * k2f);
      const cplx k4f = g + h * k3g, k4g = -p.q * (f + h * k3f);
      f += h / 6.0 * (k1f + 2.0 * k2f + 2.0 * k3f + k4f);
      g += h / 6.0 * (k1g + 2.0 * k2g + 2.0 * k3g + k4g);
    }
  }
  return {f, g};
}

inline double rel(cplx got, cplx want) { return std::abs(got - want) / std::abs(want); }

}  // namespace testing
