#pragma once

// Zeros of an analytic function inside a rectangle of the complex plane:
// argument-principle counting on the rectangle boundary, recursive
// subdivision down to isolated zeros, then Newton polishing.

#include <complex>
#include <functional>
#include <utility>
#include <vector>

namespace qnm {

using cplx = std::complex<double>;

/// Function value and its derivative at z.
using AnalyticFn = std::function<std::pair<cplx, cplx>(cplx)>;

struct SearchRegion {
  double re_min = 0.0;
  double re_max = 1.0;
  double im_min = -1.0;
  double im_max = 0.0;
  /// Newton tolerance on |f/f'| (absolute, in units of z).
  double tol = 1e-12;

  double width() const { return re_max - re_min; }
  double height() const { return im_max - im_min; }
  cplx center() const { return {0.5 * (re_min + re_max), 0.5 * (im_min + im_max)}; }
  bool contains(cplx z, double margin = 0.0) const {
    return z.real() >= re_min - margin && z.real() <= re_max + margin && z.imag() >= im_min - margin &&
           z.imag() <= im_max + margin;
  }
};

struct RootOptions {
  /// Initial Gauss-Legendre panel length along the contour. Should resolve the
  /// oscillation scale of f.
  double panel_length = 0.25;
  int points_per_panel = 16;
  int max_doublings = 10;
  /// Winding numbers must settle within this distance of an integer.
  double integer_tolerance = 1e-3;
  int max_nudges = 6;
  int max_newton_iterations = 60;
  /// Worker cap for the subdivision; 1 runs sequentially.
  int threads = 1;
};

struct ZeroCount {
  int count = 0;
  /// Raw (1/2 pi i) contour integral.
  cplx winding;
  /// Rectangle actually integrated over (possibly nudged outward).
  SearchRegion region;
  int nudges = 0;
};

/// Number of zeros of fn in rect. If the contour passes too close to a zero
/// the rectangle is expanded slightly and the count retried; throws
/// ContourThroughZero or NonIntegerWindingNumber once the nudge budget is spent.
ZeroCount count_zeros(const AnalyticFn& fn, const SearchRegion& rect, const RootOptions& opts = {});

/// All simple zeros in rect, sorted by real part (then imaginary part).
/// Throws DegenerateRoot when a sub-rectangle narrower than max(10 tol,
/// 1e-7 (1 + |center|)) still reports two or more zeros, and NewtonDiverged when an isolated zero cannot
/// be polished.
std::vector<cplx> find_zeros(const AnalyticFn& fn, const SearchRegion& rect, const RootOptions& opts = {});

/// Newton iteration from z0; returns the polished zero or throws NewtonDiverged.
cplx newton_polish(const AnalyticFn& fn, cplx z0, double tol, int max_iterations = 60);

/// Worker count from the QNM_THREADS environment variable (default 1).
int threads_from_env();

}  // namespace qnm
