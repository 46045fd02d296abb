#pragma once

#include <array>
#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace qnm {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point rule, computed by Newton iteration on P_n. Cached per n.
const GaussRule& gauss_legendre(int n);

struct QuadratureResult {
  std::complex<double> value;
  /// |difference| between the last two refinement levels.
  double error_estimate = 0.0;
  int panels = 0;
  bool converged = false;
};

struct QuadratureOptions {
  int points_per_panel = 16;
  double rel_tol = 1e-12;
  int max_doublings = 10;
};

/// Composite Gauss-Legendre over [breaks.front(), breaks.back()].
/// Every interval between consecutive (distinct) breakpoints starts as one
/// panel; all panels are halved together until two successive sums differ by
/// less than rel_tol relative to max(|I|, integral of |f|).
QuadratureResult integrate(const std::function<std::complex<double>(double)>& f, std::span<const double> breaks,
                           const QuadratureOptions& opts = {});

}  // namespace qnm
