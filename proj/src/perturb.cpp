#include "qnm/perturb.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mode_integrals.hpp"
#include "qnm/error.hpp"

namespace qnm {

void validate_perturbation(const PerturbationSpec& spec, const DensityProfile& model) {
  if (model.family() != Family::Wave)
    throw Error(ErrorKind::UnsupportedFamily, "density perturbations are defined for the Wave family only");
  if (!std::isfinite(spec.mu)) throw Error(ErrorKind::InvalidPerturbation, "mu must be finite");
  const double a = model.a();
  for (std::size_t j = 0; j < spec.v.size(); ++j) {
    const auto& s = spec.v[j];
    if (!(s.x_left >= 0.0 && s.x_right > s.x_left && s.x_right <= a))
      throw Error(ErrorKind::InvalidPerturbation, "V piece " + std::to_string(j) + " is empty or leaves [0, a]");
    if (!std::isfinite(s.rho)) throw Error(ErrorKind::InvalidPerturbation, "V must be finite");
    if (j > 0 && s.x_left < spec.v[j - 1].x_right)
      throw Error(ErrorKind::InvalidPerturbation, "V pieces must be sorted and disjoint");
    if (s.x_right == a && s.rho != 0.0)
      throw Error(ErrorKind::InvalidPerturbation, "V must vanish on the piece touching x = a");
    if (!(1.0 + spec.mu * s.rho > 0.0))
      throw Error(ErrorKind::InvalidPerturbation, "1 + mu V must stay positive");
  }
  for (const auto& pm : model.point_masses())
    if (perturbation_value(spec, pm.position, Side::Left) != perturbation_value(spec, pm.position, Side::Right))
      throw Error(ErrorKind::InvalidPerturbation, "a point mass sits on a jump of V");
}

double perturbation_value(const PerturbationSpec& spec, double x, Side side) {
  for (const auto& s : spec.v) {
    const bool inside = side == Side::Left ? (x > s.x_left && x <= s.x_right) : (x >= s.x_left && x < s.x_right);
    if (inside) return s.rho;
  }
  return 0.0;
}

DensityProfile perturbed_model(const PerturbationSpec& spec, const DensityProfile& model) {
  validate_perturbation(spec, model);
  std::vector<double> breaks{0.0, model.a()};
  for (const auto& s : model.segments()) breaks.push_back(s.x_right);
  for (const auto& s : spec.v) {
    breaks.push_back(s.x_left);
    breaks.push_back(s.x_right);
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  ModelCandidate raw;
  raw.family = model.family();
  raw.a = model.a();
  for (std::size_t j = 0; j + 1 < breaks.size(); ++j) {
    const double mid = 0.5 * (breaks[j] + breaks[j + 1]);
    const double rho = evaluate_density(model, mid) / (1.0 + spec.mu * perturbation_value(spec, mid));
    raw.segments.push_back({breaks[j], breaks[j + 1], rho});
  }
  for (const auto& pm : model.point_masses())
    raw.point_masses.push_back({pm.position, pm.mass / (1.0 + spec.mu * perturbation_value(spec, pm.position))});
  return validate_model(raw);
}

cplx matrix_element(const QnmMode& m, const QnmMode& n, const PerturbationSpec& spec, const DensityProfile& model) {
  if (!m.normalized || !n.normalized)
    throw Error(ErrorKind::UnnormalizedMode, "matrix elements require normalized modes");
  if (m.pieces.size() != n.pieces.size())
    throw Error(ErrorKind::GridMismatch, "modes belong to different models");
  cplx overlap{0.0, 0.0};
  for (std::size_t p = 0; p < m.pieces.size(); ++p) {
    for (const auto& s : spec.v) {
      const double lo = std::max(s.x_left, m.pieces[p].x_left), hi = std::min(s.x_right, m.pieces[p].x_right);
      if (!(hi > lo) || s.rho == 0.0) continue;
      ModePiece pm = m.pieces[p], pn = n.pieces[p];
      pm.x_left = pn.x_left = lo;
      pm.x_right = pn.x_right = hi;
      overlap += m.pieces[p].value * s.rho * detail::piece_overlap(pm, pn);
    }
  }
  for (const auto& pm : model.point_masses()) {
    const double v = perturbation_value(spec, pm.position);
    if (v != 0.0) overlap += pm.mass * v * m.f(pm.position) * n.f(pm.position);
  }
  return m.omega * n.omega * overlap;
}

cplx first_order_shift(std::size_t n, std::span<const QnmMode> modes, const PerturbationSpec& spec,
                       const DensityProfile& model) {
  if (n >= modes.size()) throw Error(ErrorKind::InvalidConfig, "mode index out of range");
  validate_perturbation(spec, model);
  return matrix_element(modes[n], modes[n], spec, model) / (2.0 * modes[n].omega);
}

SecondOrderShift second_order_shift(std::size_t n, std::span<const QnmMode> modes, const PerturbationSpec& spec,
                                    const DensityProfile& model, int truncation) {
  if (n >= modes.size()) throw Error(ErrorKind::InvalidConfig, "mode index out of range");
  validate_perturbation(spec, model);
  SecondOrderShift out;
  const std::size_t count = std::min<std::size_t>(modes.size(), static_cast<std::size_t>(std::max(truncation, 0)));
  if (count == 0) {
    out.warnings.push_back("EmptySum: truncation 0 leaves the whole series in the tail");
    return out;
  }
  if (count < modes.size() && count <= n)
    out.warnings.push_back("mode " + std::to_string(n) + " lies beyond the truncation");
  const cplx wn = modes[n].omega;
  for (std::size_t m = 0; m < count; ++m) {
    if (m == n) continue;
    const cplx wm = modes[m].omega;
    if (std::abs(wn - wm) < 1e-6 * std::abs(wn))
      throw Error(ErrorKind::DegeneratePair, "modes " + std::to_string(n) + " and " + std::to_string(m) +
                                                 " are (nearly) degenerate");
    const cplx element = matrix_element(modes[n], modes[m], spec, model);
    const cplx term = element * element / (4.0 * wn * wm * (wn - wm));
    out.value += term;
    out.tail_estimate = std::abs(term);
    ++out.terms;
  }
  return out;
}

cplx exact_shift_oracle(cplx omega0, const PerturbationSpec& spec, const DensityProfile& model) {
  validate_perturbation(spec, model);
  if (spec.mu == 0.0 || spec.v.empty()) return omega0;
  double half = 0.4 * std::numbers::pi / optical_length(model);
  SearchRegion rect;
  for (int attempt = 0;; ++attempt) {
    rect = {omega0.real() - half, omega0.real() + half, omega0.imag() - half, omega0.imag() + half};
    const int found = count_modes(model, rect).count;
    if (found == 1) break;
    if (found == 0) throw Error(ErrorKind::NotAnEigenfrequency, "omega0 is not a QNM of the unperturbed model");
    if (attempt == 40) throw Error(ErrorKind::DegenerateRoot, "cannot isolate omega0");
    half *= 0.5;
  }
  const auto perturbed = perturbed_model(spec, model);
  const auto modes = find_modes(perturbed, rect);
  if (modes.size() != 1)
    throw Error(ErrorKind::RootLeftRectangle, "perturbed model has " + std::to_string(modes.size()) +
                                                  " roots in the isolating rectangle; reduce mu");
  return modes.front().omega;
}

}  // namespace qnm
