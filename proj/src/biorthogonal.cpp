#include "qnm/biorthogonal.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <numbers>

#include "mode_integrals.hpp"
#include "qnm/error.hpp"
#include "qnm/quadrature.hpp"

namespace qnm {

namespace {

constexpr cplx I{0.0, 1.0};

double inertia(const DensityProfile& model, double piece_value) {
  return model.family() == Family::Wave ? piece_value : 1.0;
}

// One argument of the bilinear map, seen through point evaluations.
struct Operand {
  std::function<cplx(double, Side)> value;
  std::function<cplx(double, Side)> momentum;  // regular part of phi_hat
  std::function<cplx(const PointMass&)> mass_momentum;  // weight of delta(x - x0) in phi_hat
  std::vector<double> breaks;
  std::shared_ptr<const void> keep_alive;
};

Operand mode_operand(const QnmMode& mode, const DensityProfile& model) {
  Operand op;
  op.value = [&mode](double x, Side s) { return mode.f(x, s); };
  op.momentum = [&mode, &model](double x, Side s) {
    return -I * mode.omega * inertia_density(model, x, s) * mode.f(x, s);
  };
  op.mass_momentum = [&mode](const PointMass& pm) { return -I * mode.omega * pm.mass * mode.f(pm.position); };
  for (const auto& p : mode.pieces) op.breaks.push_back(p.x_left);
  if (!mode.pieces.empty()) op.breaks.push_back(mode.pieces.back().x_right);
  return op;
}

Operand state_operand(const TwoComponentState& state, const DensityProfile& model) {
  validate_state(state, model);
  auto interp = std::make_shared<StateInterpolant>(state);
  Operand op;
  op.value = [interp](double x, Side s) { return interp->phi(x, s); };
  op.momentum = [interp](double x, Side s) { return interp->phi_hat(x, s); };
  op.mass_momentum = [&state](const PointMass& pm) {
    for (const auto& mv : state.mass_velocities)
      if (mv.position == pm.position) return pm.mass * mv.velocity;
    return cplx(0.0, 0.0);
  };
  op.breaks = interp->breakpoints();
  op.keep_alive = interp;
  return op;
}

Operand superposition_operand(const Superposition& sup, const DensityProfile& model) {
  if (sup.coeffs.size() != sup.modes.size())
    throw Error(ErrorKind::InvalidState, "superposition needs one coefficient per mode");
  Operand op;
  op.value = [&sup](double x, Side s) {
    cplx acc{0.0, 0.0};
    for (std::size_t n = 0; n < sup.modes.size(); ++n) acc += sup.coeffs[n] * sup.modes[n].f(x, s);
    return acc;
  };
  op.momentum = [&sup, &model](double x, Side s) {
    cplx acc{0.0, 0.0};
    for (std::size_t n = 0; n < sup.modes.size(); ++n)
      acc += sup.coeffs[n] * (-I * sup.modes[n].omega) * sup.modes[n].f(x, s);
    return inertia_density(model, x, s) * acc;
  };
  op.mass_momentum = [&sup](const PointMass& pm) {
    cplx acc{0.0, 0.0};
    for (std::size_t n = 0; n < sup.modes.size(); ++n)
      acc += sup.coeffs[n] * (-I * sup.modes[n].omega) * sup.modes[n].f(pm.position);
    return pm.mass * acc;
  };
  for (const auto& piece : model.pieces()) op.breaks.push_back(piece.x_left);
  op.breaks.push_back(model.a());
  return op;
}

std::vector<double> merged_breaks(const Operand& l, const Operand& r, const DensityProfile& model) {
  std::vector<double> b = l.breaks;
  b.insert(b.end(), r.breaks.begin(), r.breaks.end());
  for (const auto& piece : model.pieces()) b.push_back(piece.x_left);
  b.push_back(model.a());
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  return b;
}

BilinearValue evaluate(const Operand& psi, const Operand& phi, const DensityProfile& model) {
  const auto breaks = merged_breaks(psi, phi, model);
  const auto integral = integrate(
      [&](double x) {
        return psi.momentum(x, Side::Left) * phi.value(x, Side::Left) +
               psi.value(x, Side::Left) * phi.momentum(x, Side::Left);
      },
      breaks);
  cplx masses{0.0, 0.0};
  for (const auto& pm : model.point_masses())
    masses += psi.mass_momentum(pm) * phi.value(pm.position, Side::Left) +
              psi.value(pm.position, Side::Left) * phi.mass_momentum(pm);
  const double a = model.a();
  BilinearValue out;
  out.interior_part = I * (integral.value + masses);
  out.surface_part = I * psi.value(a, Side::Left) * phi.value(a, Side::Left);
  out.value = out.interior_part + out.surface_part;
  return out;
}

}  // namespace

TwoComponentState dual(const TwoComponentState& state) {
  TwoComponentState out;
  out.grid = state.grid;
  out.phi.reserve(state.phi.size());
  out.phi_hat.reserve(state.phi.size());
  for (std::size_t i = 0; i < state.phi.size(); ++i) {
    out.phi.push_back(-I * std::conj(state.phi_hat[i]));
    out.phi_hat.push_back(-I * std::conj(state.phi[i]));
  }
  return out;
}

BilinearValue bilinear_map(const QnmMode& psi, const QnmMode& phi, const DensityProfile& model) {
  if (psi.pieces.size() != phi.pieces.size())
    throw Error(ErrorKind::GridMismatch, "modes belong to different models");
  cplx overlap{0.0, 0.0};
  for (std::size_t p = 0; p < psi.pieces.size(); ++p)
    overlap += inertia(model, psi.pieces[p].value) * detail::piece_overlap(psi.pieces[p], phi.pieces[p]);
  for (const auto& pm : model.point_masses()) overlap += pm.mass * psi.f(pm.position) * phi.f(pm.position);
  const double a = model.a();
  BilinearValue out;
  out.interior_part = (psi.omega + phi.omega) * overlap;
  out.surface_part = I * psi.f(a) * phi.f(a);
  out.value = out.interior_part + out.surface_part;
  return out;
}

BilinearValue bilinear_map_quadrature(const QnmMode& psi, const QnmMode& phi, const DensityProfile& model) {
  return evaluate(mode_operand(psi, model), mode_operand(phi, model), model);
}

BilinearValue bilinear_map(const QnmMode& psi, const TwoComponentState& phi, const DensityProfile& model) {
  return evaluate(mode_operand(psi, model), state_operand(phi, model), model);
}

BilinearValue bilinear_map(const TwoComponentState& psi, const QnmMode& phi, const DensityProfile& model) {
  return evaluate(state_operand(psi, model), mode_operand(phi, model), model);
}

BilinearValue bilinear_map(const TwoComponentState& psi, const TwoComponentState& phi, const DensityProfile& model) {
  if (psi.grid != phi.grid) throw Error(ErrorKind::GridMismatch, "states are sampled on different grids");
  return evaluate(state_operand(psi, model), state_operand(phi, model), model);
}

BilinearValue bilinear_map(const Superposition& psi, const Superposition& phi, const DensityProfile& model) {
  return evaluate(superposition_operand(psi, model), superposition_operand(phi, model), model);
}

cplx plain_inner_product(const TwoComponentState& psi, const TwoComponentState& phi, const DensityProfile& model) {
  if (psi.grid != phi.grid) throw Error(ErrorKind::GridMismatch, "states are sampled on different grids");
  const StateInterpolant l(psi), r(phi);
  auto breaks = l.breakpoints();
  for (const auto& piece : model.pieces()) breaks.push_back(piece.x_left);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  return integrate(
             [&](double x) {
               return std::conj(l.phi(x)) * r.phi(x) + std::conj(l.phi_hat(x)) * r.phi_hat(x);
             },
             breaks)
      .value;
}

QnmMode normalize_mode(QnmMode mode, const DensityProfile& model) {
  const cplx norm = bilinear_map(mode, mode, model).value;
  double scale = 0.0;
  for (const auto& p : mode.pieces)
    for (double x : {p.x_left, 0.5 * (p.x_left + p.x_right), p.x_right})
      scale = std::max(scale, std::norm(mode.f(x, Side::Right)));
  double inertia_len = 0.0;
  for (const auto& p : mode.pieces) inertia_len += inertia(model, p.value) * (p.x_right - p.x_left);
  for (const auto& pm : model.point_masses()) inertia_len += pm.mass;
  scale *= 2.0 * std::abs(mode.omega) * inertia_len + 1.0;
  if (!(std::abs(norm) > 1e-13 * scale))
    throw Error(ErrorKind::ZeroNorm, "(F, F) vanishes; exceptional point or degenerate mode");
  cplx c = std::sqrt(2.0 * mode.omega / norm);
  const cplx slope = c * mode.df(0.0, Side::Right);
  if (slope.real() < 0.0 || (slope.real() == 0.0 && slope.imag() < 0.0)) c = -c;
  mode.scale(c);
  mode.normalized = true;
  return mode;
}

GramReport gram_matrix(std::span<const QnmMode> modes, const DensityProfile& model) {
  GramReport r;
  const auto n = modes.size();
  r.gram.assign(n, std::vector<cplx>(n));
  for (std::size_t i = 0; i < n; ++i) {
    r.omegas.push_back(modes[i].omega);
    for (std::size_t j = i; j < n; ++j) {
      // symmetric by construction; computing the upper triangle suffices
      r.gram[i][j] = bilinear_map(modes[i], modes[j], model).value;
      r.gram[j][i] = r.gram[i][j];
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    r.diag_max_deviation = std::max(r.diag_max_deviation, std::abs(r.gram[i][i] / (2.0 * modes[i].omega) - 1.0));
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double norm = std::sqrt(std::abs(2.0 * modes[i].omega) * std::abs(2.0 * modes[j].omega));
      r.offdiag_max = std::max(r.offdiag_max, std::abs(r.gram[i][j]) / norm);
    }
  }
  return r;
}

std::vector<cplx> expansion_coefficients(const TwoComponentState& state0, std::span<const QnmMode> modes,
                                         const DensityProfile& model) {
  for (const auto& m : modes)
    if (!m.normalized) throw Error(ErrorKind::UnnormalizedMode, "expansion requires normalized modes");
  validate_state(state0, model);
  std::vector<cplx> coeffs;
  coeffs.reserve(modes.size());
  for (const auto& m : modes) coeffs.push_back(bilinear_map(m, state0, model).value / (2.0 * m.omega));
  return coeffs;
}

std::vector<SumRuleResidual> sum_rule_sweep(std::span<const QnmMode> modes, double x, double y, double testwidth,
                                            const DensityProfile& model, std::span<const int> counts) {
  const double a = model.a();
  if (!(x > 0.0 && x < a && y > 0.0 && y < a))
    throw Error(ErrorKind::InvalidState, "sum rules need interior points 0 < x, y < a");
  if (!(testwidth > 0.0)) throw Error(ErrorKind::InvalidState, "test width must be positive");
  const double sigma = testwidth / (2.0 * std::sqrt(2.0 * std::numbers::ln2));
  const double leak = 0.5 * std::erfc(y / (sigma * std::numbers::sqrt2)) +
                      0.5 * std::erfc((a - y) / (sigma * std::numbers::sqrt2));
  if (leak > 1e-12)
    throw Error(ErrorKind::TestFunctionLeaksOutsideInterval,
                "Gaussian test function leaks " + std::to_string(leak) + " of its mass outside [0, a]");
  auto g = [&](double s) {
    const double u = (s - y) / sigma;
    return std::exp(-0.5 * u * u) / (sigma * std::sqrt(2.0 * std::numbers::pi));
  };

  // g < 1e-31 beyond 12 sigma, so only that window is integrated
  const double lo = std::max(0.0, y - 12.0 * sigma), hi = std::min(a, y + 12.0 * sigma);
  std::vector<double> breaks{lo, hi};
  for (const auto& piece : model.pieces())
    if (piece.x_left > lo && piece.x_left < hi) breaks.push_back(piece.x_left);
  for (int j = -8; j <= 8; ++j) {
    const double s = y + j * sigma;
    if (s > lo && s < hi) breaks.push_back(s);
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  std::vector<cplx> t1, t2;
  for (const auto& m : modes) {
    if (!m.normalized) throw Error(ErrorKind::UnnormalizedMode, "sum rules require normalized modes");
    t1.push_back(m.f(x) * m.f(y) / (2.0 * m.omega));
    cplx smeared = integrate([&](double s) { return inertia_density(model, s) * m.f(s) * g(s); }, breaks).value;
    for (const auto& pm : model.point_masses()) smeared += pm.mass * m.f(pm.position) * g(pm.position);
    t2.push_back(0.5 * m.f(y) * smeared);
  }
  std::vector<SumRuleResidual> out;
  for (int count : counts) {
    if (count < 0 || static_cast<std::size_t>(count) > modes.size())
      throw Error(ErrorKind::InvalidState, "sum-rule prefix longer than the mode list");
    SumRuleResidual r{{0.0, 0.0}, {0.0, 0.0}};
    for (int n = 0; n < count; ++n) {
      r.s1 += t1[n];
      r.s2_smeared += t2[n];
    }
    r.s2_smeared -= g(y);
    out.push_back(r);
  }
  return out;
}

SumRuleResidual sum_rule_residuals(std::span<const QnmMode> modes, double x, double y, double testwidth,
                                   const DensityProfile& model) {
  const int all = static_cast<int>(modes.size());
  return sum_rule_sweep(modes, x, y, testwidth, model, std::span<const int>(&all, 1)).front();
}

cplx check_H_symmetry(std::span<const cplx> psi_coeffs, std::span<const cplx> phi_coeffs,
                      std::span<const QnmMode> modes, const DensityProfile& model) {
  if (psi_coeffs.size() != modes.size() || phi_coeffs.size() != modes.size())
    throw Error(ErrorKind::InvalidState, "one coefficient per mode required");
  Superposition psi{{psi_coeffs.begin(), psi_coeffs.end()}, modes};
  Superposition phi{{phi_coeffs.begin(), phi_coeffs.end()}, modes};
  Superposition h_psi{psi.coeffs, modes}, h_phi{phi.coeffs, modes};
  for (std::size_t n = 0; n < modes.size(); ++n) {
    h_psi.coeffs[n] *= modes[n].omega;
    h_phi.coeffs[n] *= modes[n].omega;
  }
  return bilinear_map(psi, h_phi, model).value - bilinear_map(phi, h_psi, model).value;
}

}  // namespace qnm
