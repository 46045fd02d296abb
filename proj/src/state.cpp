#include "qnm/state.hpp"

#include <algorithm>
#include <cmath>

#include "qnm/error.hpp"

namespace qnm {

namespace {

constexpr std::size_t kStencil = 8;

double mass_at(const DensityProfile& model, double x) {
  for (const auto& pm : model.point_masses())
    if (pm.position == x) return pm.mass;
  return 0.0;
}

}  // namespace

void validate_state(const TwoComponentState& s, const DensityProfile& model) {
  const auto n = s.grid.size();
  if (n < 2 || s.phi.size() != n || s.phi_hat.size() != n)
    throw Error(ErrorKind::InvalidState, "grid, phi and phi_hat must have equal lengths >= 2");
  for (std::size_t i = 1; i < n; ++i) {
    if (s.grid[i] < s.grid[i - 1]) throw Error(ErrorKind::InvalidState, "grid is decreasing");
    if (i >= 2 && s.grid[i] == s.grid[i - 2])
      throw Error(ErrorKind::InvalidState, "grid position repeated more than twice");
  }
  if (s.grid.front() != 0.0 || s.grid.back() != model.a())
    throw Error(ErrorKind::InvalidState, "grid must span [0, a]");
  double scale = 1.0;
  for (const auto& v : s.phi) scale = std::max(scale, std::abs(v));
  if (std::abs(s.phi.front()) > 1e-8 * scale) throw Error(ErrorKind::InvalidState, "phi(0) must vanish");
}

std::vector<double> make_grid(const DensityProfile& model, double dx) {
  if (!(dx > 0.0)) throw Error(ErrorKind::InvalidState, "grid spacing must be positive");
  std::vector<double> grid;
  for (const auto& piece : model.pieces()) {
    const double len = piece.x_right - piece.x_left;
    // tolerate round-off when len is a multiple of dx
    const auto cells = std::max<long>(1, static_cast<long>(std::ceil(len / dx - 1e-9)));
    for (long j = 0; j <= cells; ++j) {
      const double x = j == cells ? piece.x_right : piece.x_left + len * static_cast<double>(j) / cells;
      grid.push_back(x);
    }
  }
  // keep a duplicate only where the profile actually jumps: segment
  // boundaries and point masses (pieces already end at both)
  std::vector<double> out;
  out.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!out.empty() && grid[i] == out.back()) {
      const double x = grid[i];
      const bool jump = evaluate_density(model, x, Side::Left) != evaluate_density(model, x, Side::Right) ||
                        mass_at(model, x) > 0.0;
      if (!jump) continue;
    }
    out.push_back(grid[i]);
  }
  return out;
}

TwoComponentState sample_state(const DensityProfile& model, const std::vector<double>& grid,
                               const std::function<cplx(double)>& phi,
                               const std::function<cplx(double)>& velocity) {
  TwoComponentState s;
  s.grid = grid;
  s.phi.reserve(grid.size());
  s.phi_hat.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid[i];
    const bool right = i > 0 && grid[i - 1] == x;
    const double rho = inertia_density(model, x, right ? Side::Right : Side::Left);
    s.phi.push_back(phi(x));
    s.phi_hat.push_back(rho * velocity(x));
  }
  for (const auto& pm : model.point_masses()) s.mass_velocities.push_back({pm.position, velocity(pm.position)});
  return s;
}

TwoComponentState sample_mode(const QnmMode& mode, const DensityProfile& model, const std::vector<double>& grid) {
  const cplx minus_i_omega = cplx(0.0, -1.0) * mode.omega;
  TwoComponentState s;
  s.grid = grid;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid[i];
    const Side side = i > 0 && grid[i - 1] == x ? Side::Right : Side::Left;
    const cplx f = mode.f(x, side);
    s.phi.push_back(f);
    s.phi_hat.push_back(minus_i_omega * inertia_density(model, x, side) * f);
  }
  for (const auto& pm : model.point_masses()) s.mass_velocities.push_back({pm.position, minus_i_omega * mode.f(pm.position)});
  return s;
}

TwoComponentState gaussian_state(const DensityProfile& model, const std::vector<double>& grid, double center,
                                 double sigma) {
  auto g = [&](double x) {
    const double u = (x - center) / sigma, v = (x + center) / sigma;
    return cplx(std::exp(-0.5 * u * u) - std::exp(-0.5 * v * v), 0.0);
  };
  return sample_state(model, grid, g, [](double) { return cplx(0.0, 0.0); });
}

StateInterpolant::StateInterpolant(const TwoComponentState& state) : state_(state) {
  const auto& g = state.grid;
  std::size_t first = 0;
  for (std::size_t i = 1; i <= g.size(); ++i) {
    if (i == g.size() || g[i] == g[i - 1]) {
      intervals_.push_back({first, i - 1});
      first = i;
    }
  }
  for (const auto x : g)
    if (breaks_.empty() || x != breaks_.back()) breaks_.push_back(x);
}

StateInterpolant::Stencil StateInterpolant::stencil(double x, Side side) const {
  const auto& g = state_.grid;
  // interval whose span contains x; at a shared endpoint, Side picks
  std::size_t iv = 0;
  for (std::size_t k = 0; k < intervals_.size(); ++k) {
    const double lo = g[intervals_[k].first], hi = g[intervals_[k].last];
    if (x < lo) break;
    iv = k;
    if (x < hi || (x == hi && side == Side::Left)) break;
  }
  const auto [first, last] = intervals_[iv];
  const std::size_t n = last - first + 1;
  const std::size_t count = std::min(n, kStencil);
  // cell containing x
  auto it = std::upper_bound(g.begin() + first, g.begin() + last + 1, x);
  std::size_t cell = it == g.begin() + first ? first : static_cast<std::size_t>(it - g.begin()) - 1;
  cell = std::min(cell, last > first ? last - 1 : first);
  const std::size_t half = count >= 2 ? count / 2 - 1 : 0;
  std::size_t start = cell >= first + half ? cell - half : first;
  start = std::min(start, last + 1 - count);
  return {start, count};
}

cplx StateInterpolant::eval(const std::vector<cplx>& values, double x, Side side, bool derivative) const {
  const auto [start, count] = stencil(x, side);
  const auto& g = state_.grid;
  cplx acc{0.0, 0.0};
  for (std::size_t j = 0; j < count; ++j) {
    const double xj = g[start + j];
    double basis = 1.0, dbasis = 0.0;
    for (std::size_t m = 0; m < count; ++m) {
      if (m == j) continue;
      const double xm = g[start + m];
      const double factor = (x - xm) / (xj - xm);
      dbasis = dbasis * factor + basis / (xj - xm);
      basis *= factor;
    }
    acc += values[start + j] * (derivative ? dbasis : basis);
  }
  return acc;
}

cplx StateInterpolant::phi(double x, Side side) const { return eval(state_.phi, x, side, false); }
cplx StateInterpolant::phi_hat(double x, Side side) const { return eval(state_.phi_hat, x, side, false); }
cplx StateInterpolant::dphi_dx(double x, Side side) const { return eval(state_.phi, x, side, true); }

}  // namespace qnm
