#pragma once

#include <functional>
#include <vector>

#include "qnm/model.hpp"
#include "qnm/spectrum.hpp"

namespace qnm {

/// Velocity d(phi)/dt at a point mass. A point mass M at x0 carries the
/// singular part M * velocity * delta(x - x0) of the momentum phi_hat, which
/// cannot live on a sample grid.
struct MassVelocity {
  double position = 0.0;
  cplx velocity;
};

/// Sampled two-component state (phi, phi_hat = rho d(phi)/dt) on [0, a].
///
/// The grid is non-decreasing; a position repeated twice marks a
/// discontinuity (segment boundary or point mass) and the two samples hold
/// the left and right limits.
struct TwoComponentState {
  std::vector<double> grid;
  std::vector<cplx> phi;
  std::vector<cplx> phi_hat;
  std::vector<MassVelocity> mass_velocities;
};

/// Throws InvalidState on length mismatch, a decreasing grid, a grid not
/// spanning [0, a], or phi(0) != 0.
void validate_state(const TwoComponentState& state, const DensityProfile& model);

/// Uniform-per-piece grid of spacing <= dx. Segment boundaries and point
/// masses are duplicated; a model whose breakpoints are multiples of dx gets
/// exactly the nodes j*dx.
std::vector<double> make_grid(const DensityProfile& model, double dx);

/// Samples phi(x) and d(phi)/dt(x); phi_hat takes the one-sided density at
/// duplicated nodes and mass velocities are read at every point mass.
TwoComponentState sample_state(const DensityProfile& model, const std::vector<double>& grid,
                               const std::function<cplx(double)>& phi,
                               const std::function<cplx(double)>& velocity);

/// The QNM as a state (f, -i w rho f), including mass velocities -i w f(x0).
TwoComponentState sample_mode(const QnmMode& mode, const DensityProfile& model, const std::vector<double>& grid);

/// Odd-extended Gaussian exp(-(x-c)^2/2s^2) - exp(-(x+c)^2/2s^2) at rest. The
/// image term makes phi(0) = 0 exactly.
TwoComponentState gaussian_state(const DensityProfile& model, const std::vector<double>& grid, double center,
                                 double sigma);

/// Piecewise Lagrange interpolation of a sampled state: up to 8-point
/// stencils that never straddle a discontinuity.
class StateInterpolant {
 public:
  explicit StateInterpolant(const TwoComponentState& state);

  cplx phi(double x, Side side = Side::Left) const;
  cplx phi_hat(double x, Side side = Side::Left) const;
  cplx dphi_dx(double x, Side side = Side::Left) const;

  /// Distinct grid positions; the interpolant is polynomial between them.
  const std::vector<double>& breakpoints() const { return breaks_; }

 private:
  struct Interval {
    std::size_t first;
    std::size_t last;  // inclusive
  };
  struct Stencil {
    std::size_t start;
    std::size_t count;
  };
  Stencil stencil(double x, Side side) const;
  cplx eval(const std::vector<cplx>& values, double x, Side side, bool derivative) const;

  const TwoComponentState& state_;
  std::vector<Interval> intervals_;
  std::vector<double> breaks_;
};

}  // namespace qnm
