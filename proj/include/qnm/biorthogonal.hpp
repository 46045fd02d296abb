#pragma once

// Bi-orthogonal structure of the QNM basis.
//
// For two-component states Psi = (psi, psi_hat) and Phi = (phi, phi_hat) on
// the cavity the generalized bilinear map is
//
//     (Psi, Phi) = i { int_0^{a+} (psi_hat phi + psi phi_hat) dx + psi(a) phi(a) }
//
// It is linear in both slots and symmetric. The surface term stands in for
// everything outside the cavity. QNMs F_n = (f_n, -i w_n rho f_n) are
// orthogonal under it and are normalized to (F_n, F_n) = 2 w_n.

#include <span>
#include <string>
#include <vector>

#include "qnm/model.hpp"
#include "qnm/spectrum.hpp"
#include "qnm/state.hpp"

namespace qnm {

struct BilinearValue {
  cplx value;
  cplx interior_part;  // includes point masses, up to a+
  cplx surface_part;
};

/// D(phi1, phi2) = -i (phi2*, phi1*). Conjugate linear; D(D(Phi)) = Phi.
/// Acts on the regular samples only: mass velocities are dropped.
TwoComponentState dual(const TwoComponentState& state);

/// Finite superposition sum_n c_n F_n, evaluated pointwise from the modes.
struct Superposition {
  std::vector<cplx> coeffs;
  std::span<const QnmMode> modes;
};

/// Closed form: products of exponentials integrated exactly on every piece.
BilinearValue bilinear_map(const QnmMode& psi, const QnmMode& phi, const DensityProfile& model);

/// Same quantity by composite Gauss-Legendre quadrature (cross-check).
BilinearValue bilinear_map_quadrature(const QnmMode& psi, const QnmMode& phi, const DensityProfile& model);

BilinearValue bilinear_map(const QnmMode& psi, const TwoComponentState& phi, const DensityProfile& model);
BilinearValue bilinear_map(const TwoComponentState& psi, const QnmMode& phi, const DensityProfile& model);
/// Throws GridMismatch unless both states share one grid.
BilinearValue bilinear_map(const TwoComponentState& psi, const TwoComponentState& phi, const DensityProfile& model);
BilinearValue bilinear_map(const Superposition& psi, const Superposition& phi, const DensityProfile& model);

/// Conventional inner product int_0^a (psi* phi + psi_hat* phi_hat) dx of the
/// regular parts.
cplx plain_inner_product(const TwoComponentState& psi, const TwoComponentState& phi, const DensityProfile& model);

/// Rescales so (F, F) = 2 omega, with Re f'(0) > 0 (Im f'(0) > 0 on a tie).
/// Throws ZeroNorm when (F, F) vanishes.
QnmMode normalize_mode(QnmMode mode, const DensityProfile& model);

struct GramReport {
  std::vector<cplx> omegas;
  /// gram[n][m] = (F_n, F_m)
  std::vector<std::vector<cplx>> gram;
  /// max over n != m of |gram[n][m]| / sqrt(|2 w_n| |2 w_m|)
  double offdiag_max = 0.0;
  /// max over n of |gram[n][n] / (2 w_n) - 1|
  double diag_max_deviation = 0.0;
};

GramReport gram_matrix(std::span<const QnmMode> modes, const DensityProfile& model);

/// a_n = (F_n, Phi) / (2 w_n). Throws UnnormalizedMode for raw modes.
std::vector<cplx> expansion_coefficients(const TwoComponentState& state0, std::span<const QnmMode> modes,
                                         const DensityProfile& model);

struct SumRuleResidual {
  /// sum_n f_n(x) f_n(y) / (2 w_n); tends to 0
  cplx s1;
  /// sum_n (1/2) f_n(y) int rho f_n g dx - g(y); tends to 0
  cplx s2_smeared;
};

/// Completeness sum rules truncated to `modes`. The delta identity is
/// smeared with a unit-mass Gaussian g centred at y whose full width at half
/// maximum is testwidth. Throws TestFunctionLeaksOutsideInterval if more
/// than 1e-12 of g lies outside [0, a].
SumRuleResidual sum_rule_residuals(std::span<const QnmMode> modes, double x, double y, double testwidth,
                                   const DensityProfile& model);

/// Residuals for every prefix length in `counts` (each <= modes.size()).
std::vector<SumRuleResidual> sum_rule_sweep(std::span<const QnmMode> modes, double x, double y, double testwidth,
                                            const DensityProfile& model, std::span<const int> counts);

/// (Psi, H Phi) - (Phi, H Psi) for Psi = sum c_n F_n, Phi = sum d_n F_n, both
/// bilinear values evaluated by quadrature from H F_n = w_n F_n.
cplx check_H_symmetry(std::span<const cplx> psi_coeffs, std::span<const cplx> phi_coeffs,
                      std::span<const QnmMode> modes, const DensityProfile& model);

}  // namespace qnm
