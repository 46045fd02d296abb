#pragma once

// Damped-sinusoid fitting of uniformly sampled signals (matrix pencil).
//
// A signal s_k = sum_j c_j exp(-i w_j t_k) is fitted with complex
// frequencies w_j; a decaying oscillation has Im w_j < 0.

#include <complex>
#include <span>
#include <vector>

namespace qnm {

using cplx = std::complex<double>;

struct DampedComponent {
  cplx omega;
  cplx amplitude;  // at t = t0
};

struct RingdownFit {
  std::vector<DampedComponent> components;  // sorted by Re omega
  double relative_residual = 0.0;
};

/// Fits `order` components to samples s_k taken at t0 + k*dt. order = 0 picks
/// the rank from the singular values (cut at sv_cut times the largest).
/// Throws InvalidConfig if there are too few samples.
RingdownFit fit_damped_sinusoids(std::span<const cplx> samples, double t0, double dt, int order = 0,
                                 double sv_cut = 1e-9);

/// Component with the smallest Re omega > 0 among those whose amplitude
/// exceeds rel_amplitude times the largest. Throws InvalidConfig if none.
DampedComponent fundamental(const RingdownFit& fit, double rel_amplitude = 1e-3);

}  // namespace qnm
