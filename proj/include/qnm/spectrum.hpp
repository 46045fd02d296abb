#pragma once

// Quasinormal-mode spectrum of a piecewise-constant open cavity.
//
// The mode equation f'' + rho(x) w^2 f = 0 (or f'' + (w^2 - V) f = 0) is
// integrated from f(0) = 0, f'(0) = 1 with exact 2x2 transfer matrices. The
// outgoing condition f'(a+) = i w f(a) then defines the characteristic
// function
//
//     W(w) = f'(a-) - M_a w^2 f(a) - i w f(a),
//
// whose zeros in the lower half plane are the QNM frequencies.

#include <complex>
#include <vector>

#include "qnm/model.hpp"
#include "qnm/roots.hpp"

namespace qnm {

struct Propagation {
  cplx f_a;               // f(a)
  cplx fprime_a_minus;    // f'(a-), before any point mass at a
  cplx d_f_a;             // d f(a) / d omega
  cplx d_fprime_a_minus;  // d f'(a-) / d omega
};

/// Initial-value solution at x = a- with analytic omega-derivatives.
/// omega = 0 is regular in this normalization (f = x in the Wave family).
Propagation propagate(const DensityProfile& model, cplx omega);

struct Characteristic {
  cplx value;
  cplx derivative;
};

Characteristic characteristic(const DensityProfile& model, cplx omega);

/// Wavenumber on a piece of constant density: w sqrt(rho) or sqrt(w^2 - V).
cplx wavenumber(Family family, double value, cplx omega);

/// Coefficients of one piece: f(x) = A e^{ikx} + B e^{-ikx} in the global
/// coordinate x, for x_left <= x <= x_right.
struct ModePiece {
  double x_left = 0.0;
  double x_right = 0.0;
  double value = 0.0;  // rho (or V) on the piece
  cplx k;
  cplx A;
  cplx B;
};

struct QnmMode {
  cplx omega;
  std::vector<ModePiece> pieces;
  bool normalized = false;
  /// |W| / |dW/domega| at omega.
  double residual = 0.0;

  cplx f(double x, Side side = Side::Left) const;
  /// df/dx; the one-sided limit matters at point masses.
  cplx df(double x, Side side = Side::Left) const;
  /// Scales every coefficient by c.
  void scale(cplx c);
};

/// Eigenfunction for a QNM frequency, unnormalized (f'(0) = 1). Throws
/// NotAnEigenfrequency if |W/W'| exceeds tol * max(1, |omega|), OmegaZero for
/// omega = 0.
QnmMode build_eigenfunction(const DensityProfile& model, cplx omega, double tol = 1e-8);

/// Contour settings tuned to the oscillation scale of W for this model.
RootOptions root_options_for(const DensityProfile& model);

/// Optical length of the cavity, integral of sqrt(rho) (Wave) or a (KleinGordon).
double optical_length(const DensityProfile& model);

/// Number of QNMs (zeros of W) in rect.
ZeroCount count_modes(const DensityProfile& model, const SearchRegion& rect);

/// All QNMs in rect sorted by Re omega; omega = 0 is never reported.
std::vector<QnmMode> find_modes(const DensityProfile& model, const SearchRegion& rect);
std::vector<QnmMode> find_modes(const DensityProfile& model, const SearchRegion& rect, const RootOptions& opts);

/// The partner mode at -conj(omega), with f_partner = conj(f).
QnmMode mirror_mode(const QnmMode& mode, const DensityProfile& model);

/// The first `pairs` QNMs with Re omega > 0 together with their mirror
/// partners, ordered (w_0, -w_0*, w_1, -w_1*, ...). Purely imaginary modes
/// count as one pair member each and appear once.
std::vector<QnmMode> paired_spectrum(const DensityProfile& model, int pairs, double im_min = -3.0,
                                     double im_max = 0.5, double tol = 1e-12);

/// True if every mode's partner -omega* is also in the set (to rel_tol).
bool is_conjugate_closed(const std::vector<QnmMode>& modes, double rel_tol = 1e-8);

}  // namespace qnm
