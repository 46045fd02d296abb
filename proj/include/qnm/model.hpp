#pragma once

// Piecewise-constant open-cavity models.
//
// A model describes rho(x) on the cavity [0, a] as a sequence of constant
// segments plus optional point masses M*delta(x - x0). Outside the cavity the
// density is 1 (Wave family) and the potential is 0 (KleinGordon family), so
// waves leaving through x = a never return.

#include <complex>
#include <string>
#include <vector>

namespace qnm {

using cplx = std::complex<double>;

enum class Family { Wave, KleinGordon };

/// Which one-sided limit to take at a discontinuity.
enum class Side { Left, Right };

struct Segment {
  double x_left = 0.0;
  double x_right = 0.0;
  double rho = 1.0;  // potential V_j in the KleinGordon family

  bool operator==(const Segment&) const = default;
};

struct PointMass {
  double position = 0.0;
  double mass = 0.0;

  bool operator==(const PointMass&) const = default;
};

/// Unvalidated model fields, as read from a file or assembled in code.
struct ModelCandidate {
  Family family = Family::Wave;
  double a = 1.0;
  std::vector<Segment> segments;
  std::vector<PointMass> point_masses;
};

/// Interval of constant density with no point mass strictly inside.
/// Pieces are the model segments further split at interior point masses.
struct Piece {
  double x_left;
  double x_right;
  double value;

  bool operator==(const Piece&) const = default;
};

class DensityProfile {
 public:
  Family family() const { return family_; }
  double a() const { return a_; }
  const std::vector<Segment>& segments() const { return segments_; }
  /// Sorted by position.
  const std::vector<PointMass>& point_masses() const { return point_masses_; }
  const std::vector<Piece>& pieces() const { return pieces_; }

  /// True when rho(a-) differs from the exterior value or a point mass sits at
  /// x = a; only then is the QNM set guaranteed complete on [0, a].
  bool completeness_eligible() const { return completeness_eligible_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  /// Exterior value: 1 for Wave, 0 for KleinGordon.
  double tail_value() const { return family_ == Family::Wave ? 1.0 : 0.0; }

  /// Mass sitting exactly at x = a (0 if none).
  double boundary_mass() const;

  /// Smallest segment density (Wave family).
  double min_value() const;
  double max_value() const;

  /// Candidate fields of this profile; validate_model(to_candidate()) == *this.
  ModelCandidate to_candidate() const;

  bool operator==(const DensityProfile&) const = default;

 private:
  friend DensityProfile validate_model(const ModelCandidate& raw);
  DensityProfile() = default;

  Family family_ = Family::Wave;
  double a_ = 1.0;
  std::vector<Segment> segments_;
  std::vector<PointMass> point_masses_;
  std::vector<Piece> pieces_;
  bool completeness_eligible_ = false;
  std::vector<std::string> warnings_;
};

/// Checks tiling, positivity and point-mass placement. Throws qnm::Error with
/// GapOrOverlap, NonPositiveDensity or BadPointMass. A model that is not
/// completeness-eligible is accepted with a "NotCompletenessEligible" warning.
DensityProfile validate_model(const ModelCandidate& raw);

/// Coefficient of d(phi)/dt in the momentum phi_hat: rho(x) in the Wave
/// family, 1 in the KleinGordon family (where segment values are V).
double inertia_density(const DensityProfile& model, double x, Side side = Side::Left);

/// rho(x) (or V(x)); x > a, or x == a with Side::Right, returns the tail value.
/// Point masses are not included.
double evaluate_density(const DensityProfile& model, double x, Side side = Side::Left);

// Convenience constructors for the reference models.

/// Uniform rod rho = n^2 on [0, a].
DensityProfile dielectric_rod(double n, double a = 1.0);

/// rho = 1 on [0, a] with a partially transmitting mirror M*delta(x - a).
DensityProfile mirror_cavity(double mass, double a = 1.0);

}  // namespace qnm
