#include "qnm/ringdown.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "qnm/error.hpp"

namespace qnm {

namespace {
using MatrixXc = Eigen::MatrixXcd;
using VectorXc = Eigen::VectorXcd;
}  // namespace

RingdownFit fit_damped_sinusoids(std::span<const cplx> samples, double t0, double dt, int order, double sv_cut) {
  const auto n = static_cast<Eigen::Index>(samples.size());
  if (n < 4 || !(dt > 0.0)) throw Error(ErrorKind::InvalidConfig, "ring-down fit needs >= 4 samples and dt > 0");
  const Eigen::Index pencil = n / 2;
  const Eigen::Index rows = n - pencil;

  MatrixXc hankel(rows, pencil + 1);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j <= pencil; ++j) hankel(i, j) = samples[i + j];

  Eigen::BDCSVD<MatrixXc> svd(hankel, Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  Eigen::Index rank = order;
  if (rank <= 0) {
    rank = 0;
    while (rank < sv.size() && sv(rank) > sv_cut * sv(0)) ++rank;
  }
  rank = std::clamp<Eigen::Index>(rank, 1, std::min<Eigen::Index>(pencil, sv.size()));
  if (order > 0 && order > pencil) throw Error(ErrorKind::InvalidConfig, "fit order exceeds the pencil size");

  // rows of the Hankel matrix lie in the span of conj(V)
  const MatrixXc v = svd.matrixV().leftCols(rank).conjugate();
  const MatrixXc v1 = v.topRows(pencil);
  const MatrixXc v2 = v.bottomRows(pencil);
  const MatrixXc shift = v1.completeOrthogonalDecomposition().solve(v2);
  Eigen::ComplexEigenSolver<MatrixXc> eig(shift);
  const VectorXc poles = eig.eigenvalues();

  MatrixXc vander(n, rank);
  for (Eigen::Index j = 0; j < rank; ++j) {
    cplx p{1.0, 0.0};
    for (Eigen::Index k = 0; k < n; ++k) {
      vander(k, j) = p;
      p *= poles(j);
    }
  }
  VectorXc rhs(n);
  for (Eigen::Index k = 0; k < n; ++k) rhs(k) = samples[k];
  const VectorXc amps = vander.completeOrthogonalDecomposition().solve(rhs);

  RingdownFit fit;
  for (Eigen::Index j = 0; j < rank; ++j) {
    const cplx omega = cplx(0.0, 1.0) * std::log(poles(j)) / dt;
    fit.components.push_back({omega, amps(j)});
  }
  std::sort(fit.components.begin(), fit.components.end(), [](const DampedComponent& l, const DampedComponent& r) {
    return l.omega.real() < r.omega.real() || (l.omega.real() == r.omega.real() && l.omega.imag() < r.omega.imag());
  });
  const double denom = rhs.norm();
  fit.relative_residual = denom > 0.0 ? (vander * amps - rhs).norm() / denom : 0.0;
  (void)t0;
  return fit;
}

DampedComponent fundamental(const RingdownFit& fit, double rel_amplitude) {
  double peak = 0.0;
  for (const auto& c : fit.components) peak = std::max(peak, std::abs(c.amplitude));
  for (const auto& c : fit.components)
    if (c.omega.real() > 0.0 && std::abs(c.amplitude) > rel_amplitude * peak) return c;
  throw Error(ErrorKind::InvalidConfig, "no oscillating component above the amplitude threshold");
}

}  // namespace qnm
