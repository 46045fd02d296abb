#pragma once

// First- and second-order shifts of QNM frequencies when the inverse density
// changes as 1/rho -> (1 + mu V(x)) / rho_0, with an exact re-solve as the
// reference.
//
// With F_n = (f_n, -i w_n rho_0 f_n) the perturbation adds mu V w_n f_n to
// the first component of H F_n, so under the bilinear map
//
//     (F_m, dH F_n) = mu w_m w_n [ int rho_0 V f_m f_n dx + sum_k M_k V(x_k) f_m f_n(x_k) ]
//
// which is symmetric in m and n.

#include <span>
#include <string>
#include <vector>

#include "qnm/model.hpp"
#include "qnm/spectrum.hpp"

namespace qnm {

struct PerturbationSpec {
  /// Non-overlapping constant pieces of V; V = 0 elsewhere. Each entry's
  /// `rho` field holds the value of V.
  std::vector<Segment> v;
  double mu = 0.0;
};

/// Throws InvalidPerturbation (or UnsupportedFamily for KleinGordon models):
/// pieces must lie in [0, a), be sorted and disjoint, V must vanish next to
/// x = a, 1 + mu V must stay positive and no point mass may sit on a jump of V.
void validate_perturbation(const PerturbationSpec& spec, const DensityProfile& model);

/// V(x); 0 outside the listed pieces.
double perturbation_value(const PerturbationSpec& spec, double x, Side side = Side::Left);

/// Model with rho = rho_0 / (1 + mu V) and point masses M / (1 + mu V).
DensityProfile perturbed_model(const PerturbationSpec& spec, const DensityProfile& model);

/// (F_m, dH F_n) / mu. Throws UnnormalizedMode.
cplx matrix_element(const QnmMode& m, const QnmMode& n, const PerturbationSpec& spec, const DensityProfile& model);

/// d omega_n / d mu at mu = 0: matrix_element(n, n) / (2 w_n).
cplx first_order_shift(std::size_t n, std::span<const QnmMode> modes, const PerturbationSpec& spec,
                       const DensityProfile& model);

struct SecondOrderShift {
  /// Coefficient of mu^2 in omega_n(mu).
  cplx value;
  /// Magnitude of the last retained term.
  double tail_estimate = 0.0;
  int terms = 0;
  std::vector<std::string> warnings;
};

/// sum over m != n among the first `truncation` modes of
/// M_nm M_mn / (2 w_n 2 w_m (w_n - w_m)). Throws DegeneratePair when
/// |w_n - w_m| < 1e-6 |w_n|.
SecondOrderShift second_order_shift(std::size_t n, std::span<const QnmMode> modes, const PerturbationSpec& spec,
                                    const DensityProfile& model, int truncation);

/// omega_n(mu) of the perturbed model, found in a rectangle around omega0
/// that isolates it in the unperturbed spectrum. Throws RootLeftRectangle.
cplx exact_shift_oracle(cplx omega0, const PerturbationSpec& spec, const DensityProfile& model);

}  // namespace qnm
