#include "qnm/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "qnm/error.hpp"

namespace qnm {

namespace {

std::string describe(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

double DensityProfile::boundary_mass() const {
  double m = 0.0;
  for (const auto& pm : point_masses_)
    if (pm.position == a_) m += pm.mass;
  return m;
}

double DensityProfile::min_value() const {
  double v = std::numeric_limits<double>::infinity();
  for (const auto& s : segments_) v = std::min(v, s.rho);
  return v;
}

double DensityProfile::max_value() const {
  double v = -std::numeric_limits<double>::infinity();
  for (const auto& s : segments_) v = std::max(v, s.rho);
  return v;
}

ModelCandidate DensityProfile::to_candidate() const {
  return ModelCandidate{family_, a_, segments_, point_masses_};
}

DensityProfile validate_model(const ModelCandidate& raw) {
  if (!(std::isfinite(raw.a) && raw.a > 0.0))
    throw Error(ErrorKind::GapOrOverlap, "cavity length a must be positive, got " + describe(raw.a));
  if (raw.segments.empty()) throw Error(ErrorKind::GapOrOverlap, "model has no segments");

  const auto& segs = raw.segments;
  if (segs.front().x_left != 0.0)
    throw Error(ErrorKind::GapOrOverlap, "first segment must start at x = 0");
  if (segs.back().x_right != raw.a)
    throw Error(ErrorKind::GapOrOverlap, "last segment must end at x = a = " + describe(raw.a));
  for (std::size_t j = 0; j < segs.size(); ++j) {
    if (!(segs[j].x_right > segs[j].x_left))
      throw Error(ErrorKind::GapOrOverlap, "segment " + std::to_string(j) + " has non-positive length");
    if (j + 1 < segs.size() && segs[j].x_right != segs[j + 1].x_left)
      throw Error(ErrorKind::GapOrOverlap, "segments " + std::to_string(j) + " and " +
                                               std::to_string(j + 1) + " are not contiguous");
    if (!std::isfinite(segs[j].rho))
      throw Error(ErrorKind::NonPositiveDensity, "segment " + std::to_string(j) + " value is not finite");
    if (raw.family == Family::Wave && !(segs[j].rho > 0.0))
      throw Error(ErrorKind::NonPositiveDensity,
                  "segment " + std::to_string(j) + " has rho = " + describe(segs[j].rho));
  }

  auto masses = raw.point_masses;
  std::sort(masses.begin(), masses.end(),
            [](const PointMass& l, const PointMass& r) { return l.position < r.position; });
  for (std::size_t k = 0; k < masses.size(); ++k) {
    const auto& pm = masses[k];
    if (!(pm.position > 0.0 && pm.position <= raw.a))
      throw Error(ErrorKind::BadPointMass, "point mass position " + describe(pm.position) + " outside (0, a]");
    if (!(std::isfinite(pm.mass) && pm.mass >= 0.0))
      throw Error(ErrorKind::BadPointMass, "point mass " + describe(pm.mass) + " must be >= 0");
    if (k > 0 && masses[k - 1].position == pm.position)
      throw Error(ErrorKind::BadPointMass, "two point masses at x = " + describe(pm.position));
  }

  DensityProfile p;
  p.family_ = raw.family;
  p.a_ = raw.a;
  p.segments_ = segs;
  p.point_masses_ = masses;

  for (const auto& s : segs) {
    double left = s.x_left;
    for (const auto& pm : masses) {
      if (pm.position > s.x_left && pm.position < s.x_right) {
        p.pieces_.push_back({left, pm.position, s.rho});
        left = pm.position;
      }
    }
    p.pieces_.push_back({left, s.x_right, s.rho});
  }

  const bool jump_at_a = segs.back().rho != p.tail_value();
  const bool mass_at_a = p.boundary_mass() > 0.0;
  p.completeness_eligible_ = jump_at_a || mass_at_a;
  if (!p.completeness_eligible_)
    p.warnings_.push_back(
        "NotCompletenessEligible: density is continuous at x = a and no point mass sits there; "
        "QNM expansions are not guaranteed complete");
  return p;
}

double evaluate_density(const DensityProfile& model, double x, Side side) {
  const double a = model.a();
  if (x > a || (x == a && side == Side::Right)) return model.tail_value();
  const auto& segs = model.segments();
  if (x <= 0.0) return segs.front().rho;
  // first segment whose right edge is >= x (Left) or > x (Right)
  auto it = side == Side::Left
                ? std::lower_bound(segs.begin(), segs.end(), x,
                                   [](const Segment& s, double v) { return s.x_right < v; })
                : std::upper_bound(segs.begin(), segs.end(), x,
                                   [](double v, const Segment& s) { return v < s.x_right; });
  if (it == segs.end()) --it;
  return it->rho;
}

double inertia_density(const DensityProfile& model, double x, Side side) {
  return model.family() == Family::Wave ? evaluate_density(model, x, side) : 1.0;
}

DensityProfile dielectric_rod(double n, double a) {
  return validate_model({Family::Wave, a, {{0.0, a, n * n}}, {}});
}

DensityProfile mirror_cavity(double mass, double a) {
  return validate_model({Family::Wave, a, {{0.0, a, 1.0}}, {{a, mass}}});
}

}  // namespace qnm
