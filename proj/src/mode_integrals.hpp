#pragma once

// Exact integrals of products of piecewise plane-wave eigenfunctions.

#include <complex>

#include "qnm/spectrum.hpp"

namespace qnm::detail {

// (e^z - 1) / z without cancellation near 0.
inline cplx expm1_over(cplx z) {
  if (std::abs(z) < 0.5) {
    cplx sum{0.0, 0.0}, term{1.0, 0.0};
    for (int j = 1; j < 25; ++j) {
      sum += term;
      term *= z / static_cast<double>(j + 1);
    }
    return sum;
  }
  return (std::exp(z) - 1.0) / z;
}

// int_{lo}^{hi} exp(i kappa x) dx
inline cplx exp_integral(cplx kappa, double lo, double hi) {
  const double len = hi - lo;
  return std::exp(cplx(0.0, 1.0) * kappa * lo) * len * expm1_over(cplx(0.0, 1.0) * kappa * len);
}

// int f g over a piece, both in A e^{ikx} + B e^{-ikx} form
inline cplx piece_overlap(const ModePiece& p, const ModePiece& q) {
  const double lo = p.x_left, hi = p.x_right;
  return p.A * q.A * exp_integral(p.k + q.k, lo, hi) + p.A * q.B * exp_integral(p.k - q.k, lo, hi) +
         p.B * q.A * exp_integral(-p.k + q.k, lo, hi) + p.B * q.B * exp_integral(-p.k - q.k, lo, hi);
}

}  // namespace qnm::detail
