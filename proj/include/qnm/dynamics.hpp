#pragma once

// Time evolution of cavity states, two independent ways:
//
//   * the QNM expansion Phi(t) = sum_n a_n exp(-i w_n t) F_n, and
//   * a leapfrog finite-difference solver of rho phi_tt = phi_xx with the
//     outgoing condition phi_t = -phi_x imposed at x = a.

#include <span>
#include <string>
#include <vector>

#include "qnm/model.hpp"
#include "qnm/spectrum.hpp"
#include "qnm/state.hpp"

namespace qnm {

enum class EvolutionMethod { QnmExpansion, Fdtd };

struct EvolutionTrace {
  std::vector<double> times;
  std::vector<TwoComponentState> states;
  EvolutionMethod method = EvolutionMethod::QnmExpansion;
  /// QNM expansion only: max |Im phi| / max |phi| at each time. Vanishes for
  /// real initial data and a conjugate-closed mode set.
  std::vector<double> imag_ratio;
  /// Non-fatal conditions such as ModeSetNotConjugateClosed.
  std::vector<std::string> warnings;
};

/// Expansion coefficients from state0, then reconstruction on state0's grid.
EvolutionTrace evolve_qnm(const TwoComponentState& state0, std::span<const QnmMode> modes,
                          std::span<const double> times, const DensityProfile& model);

/// Reconstruction from given coefficients (one per mode) on `grid`.
EvolutionTrace evolve_qnm(std::span<const cplx> coeffs, std::span<const QnmMode> modes,
                          const std::vector<double>& grid, std::span<const double> times,
                          const DensityProfile& model);

struct FdtdOptions {
  double cfl = 0.9;
  /// Output times; empty means 101 equally spaced times on [0, t_end].
  std::vector<double> record_times;
};

/// Leapfrog on the nodes j*dx (dx is adjusted to divide a exactly). Point
/// masses and segment boundaries must sit on nodes. Output states use
/// make_grid(model, dx) and are interpolated in time with cubics, so phi and
/// phi_hat refer to the same instant. Throws UnsupportedFamily,
/// UnstableParameters, MassOffGrid, BoundaryOffGrid.
EvolutionTrace evolve_fdtd(const TwoComponentState& state0, const DensityProfile& model, double t_end, double dx,
                           const FdtdOptions& opts = {});

/// Time step the FDTD solver uses: cfl * dx * sqrt(min rho).
double fdtd_time_step(const DensityProfile& model, double dx, double cfl = 0.9);

struct ErrorSample {
  double t = 0.0;
  /// ||phi_a - phi_b|| / max(||phi_a||, ||phi_b||), L2 over [0, a]
  double relative_l2 = 0.0;
};

/// Per-time relative error of the phi component. trace_b is interpolated
/// (cubic) onto trace_a's times when they differ. Throws GridMismatch.
std::vector<ErrorSample> compare_evolutions(const EvolutionTrace& trace_a, const EvolutionTrace& trace_b);

/// Largest error with t in [t0, t1].
double max_error(std::span<const ErrorSample> errors, double t0, double t1);

/// int (|phi_hat|^2 / rho + |phi_x|^2) dx plus the kinetic energy of point masses.
double interior_energy(const TwoComponentState& state, const DensityProfile& model);

/// phi(x, t) for every state of the trace.
std::vector<cplx> probe(const EvolutionTrace& trace, double x);

}  // namespace qnm
