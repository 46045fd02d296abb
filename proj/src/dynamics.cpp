#include "qnm/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>

#include "qnm/biorthogonal.hpp"
#include "qnm/error.hpp"
#include "qnm/quadrature.hpp"

namespace qnm {

namespace {

constexpr cplx I{0.0, 1.0};

double l2_norm(const std::vector<double>& grid, const std::vector<cplx>& v) {
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double h = grid[i + 1] - grid[i];
    if (h > 0.0) sum += 0.5 * h * (std::norm(v[i]) + std::norm(v[i + 1]));
  }
  return std::sqrt(sum);
}

double mass_at(const DensityProfile& model, double x) {
  for (const auto& pm : model.point_masses())
    if (pm.position == x) return pm.mass;
  return 0.0;
}

// Lagrange weights (and derivative weights) at t for nodes ts.
template <std::size_t N>
void lagrange_weights(const std::array<double, N>& ts, double t, std::array<double, N>& w, std::array<double, N>& dw) {
  for (std::size_t j = 0; j < N; ++j) {
    double basis = 1.0, dbasis = 0.0;
    for (std::size_t m = 0; m < N; ++m) {
      if (m == j) continue;
      const double factor = (t - ts[m]) / (ts[j] - ts[m]);
      dbasis = dbasis * factor + basis / (ts[j] - ts[m]);
      basis *= factor;
    }
    w[j] = basis;
    dw[j] = dbasis;
  }
}

}  // namespace

EvolutionTrace evolve_qnm(std::span<const cplx> coeffs, std::span<const QnmMode> modes,
                          const std::vector<double>& grid, std::span<const double> times,
                          const DensityProfile& model) {
  if (coeffs.size() != modes.size()) throw Error(ErrorKind::InvalidState, "one coefficient per mode required");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1])) throw Error(ErrorKind::InvalidState, "times must be strictly increasing");
  if (!times.empty() && times.front() < 0.0)
    throw Error(ErrorKind::InvalidState, "the QNM expansion holds for t >= 0 only");

  EvolutionTrace trace;
  trace.method = EvolutionMethod::QnmExpansion;
  if (!model.completeness_eligible())
    trace.warnings.push_back("NotCompletenessEligible: the mode set cannot represent arbitrary data");
  if (!is_conjugate_closed(std::vector<QnmMode>(modes.begin(), modes.end())))
    trace.warnings.push_back("ModeSetNotConjugateClosed: real data will acquire spurious imaginary parts");

  const std::size_t n_modes = modes.size(), n_grid = grid.size();
  std::vector<cplx> f(n_modes * n_grid);
  std::vector<double> rho(n_grid);
  for (std::size_t i = 0; i < n_grid; ++i) {
    const Side side = i > 0 && grid[i - 1] == grid[i] ? Side::Right : Side::Left;
    rho[i] = inertia_density(model, grid[i], side);
    for (std::size_t n = 0; n < n_modes; ++n) f[n * n_grid + i] = modes[n].f(grid[i], side);
  }
  const auto& masses = model.point_masses();
  std::vector<cplx> f_mass(n_modes * masses.size());
  for (std::size_t n = 0; n < n_modes; ++n)
    for (std::size_t k = 0; k < masses.size(); ++k) f_mass[n * masses.size() + k] = modes[n].f(masses[k].position);

  std::vector<cplx> amp(n_modes);
  for (double t : times) {
    for (std::size_t n = 0; n < n_modes; ++n) amp[n] = coeffs[n] * std::exp(-I * modes[n].omega * t);
    TwoComponentState s;
    s.grid = grid;
    s.phi.assign(n_grid, cplx(0.0, 0.0));
    s.phi_hat.assign(n_grid, cplx(0.0, 0.0));
    for (std::size_t n = 0; n < n_modes; ++n) {
      const cplx a = amp[n], a_dot = -I * modes[n].omega * amp[n];
      const cplx* fn = &f[n * n_grid];
      for (std::size_t i = 0; i < n_grid; ++i) {
        s.phi[i] += a * fn[i];
        s.phi_hat[i] += a_dot * fn[i];
      }
    }
    for (std::size_t i = 0; i < n_grid; ++i) s.phi_hat[i] *= rho[i];
    for (std::size_t k = 0; k < masses.size(); ++k) {
      cplx v{0.0, 0.0};
      for (std::size_t n = 0; n < n_modes; ++n) v += -I * modes[n].omega * amp[n] * f_mass[n * masses.size() + k];
      s.mass_velocities.push_back({masses[k].position, v});
    }
    double peak = 0.0, imag_peak = 0.0;
    for (const auto& v : s.phi) {
      peak = std::max(peak, std::abs(v));
      imag_peak = std::max(imag_peak, std::abs(v.imag()));
    }
    trace.imag_ratio.push_back(peak > 0.0 ? imag_peak / peak : 0.0);
    trace.times.push_back(t);
    trace.states.push_back(std::move(s));
  }
  return trace;
}

EvolutionTrace evolve_qnm(const TwoComponentState& state0, std::span<const QnmMode> modes,
                          std::span<const double> times, const DensityProfile& model) {
  const auto coeffs = expansion_coefficients(state0, modes, model);
  return evolve_qnm(coeffs, modes, state0.grid, times, model);
}

double fdtd_time_step(const DensityProfile& model, double dx, double cfl) {
  return cfl * dx * std::sqrt(model.min_value());
}

EvolutionTrace evolve_fdtd(const TwoComponentState& state0, const DensityProfile& model, double t_end, double dx,
                           const FdtdOptions& opts) {
  if (model.family() != Family::Wave)
    throw Error(ErrorKind::UnsupportedFamily, "the FDTD solver handles the Wave family only");
  const double a = model.a();
  if (!(dx > 0.0 && dx <= a && t_end >= 0.0 && opts.cfl > 0.0 && opts.cfl <= 1.0))
    throw Error(ErrorKind::UnstableParameters, "need 0 < dx <= a, t_end >= 0 and 0 < cfl <= 1");
  const long cells = std::lround(a / dx);
  if (cells < 2 || std::abs(cells * dx - a) > 1e-6 * a)
    throw Error(ErrorKind::UnstableParameters, "dx must divide the cavity length");
  const double h = a / static_cast<double>(cells);
  auto on_node = [&](double x) {
    const double r = x / h;
    return std::abs(r - std::round(r)) < 1e-6;
  };
  for (const auto& pm : model.point_masses())
    if (!on_node(pm.position)) throw Error(ErrorKind::MassOffGrid, "point mass is not on an FDTD node");
  for (const auto& s : model.segments())
    if (!on_node(s.x_left)) throw Error(ErrorKind::BoundaryOffGrid, "segment boundary is not on an FDTD node");

  const auto grid = make_grid(model, h);
  std::vector<double> nodes;
  for (double x : grid)
    if (nodes.empty() || x != nodes.back()) nodes.push_back(x);
  if (nodes.size() != static_cast<std::size_t>(cells) + 1)
    throw Error(ErrorKind::BoundaryOffGrid, "model breakpoints do not fall on a uniform grid");

  const std::size_t nn = nodes.size(), last = nn - 1;
  std::vector<double> cell_rho(cells), node_mass(nn, 0.0);
  for (long j = 0; j < cells; ++j) cell_rho[j] = evaluate_density(model, (j + 0.5) * h);
  for (std::size_t j = 1; j < last; ++j)
    node_mass[j] = 0.5 * (cell_rho[j - 1] + cell_rho[j]) * h + mass_at(model, nodes[j]);
  node_mass[last] = 0.5 * cell_rho[last - 1] * h + mass_at(model, nodes[last]);

  const double dt = fdtd_time_step(model, h, opts.cfl);

  validate_state(state0, model);
  const StateInterpolant init(state0);
  std::vector<cplx> phi0(nn), vel0(nn);
  for (std::size_t j = 0; j < nn; ++j) {
    const double x = nodes[j];
    phi0[j] = j == 0 ? cplx(0.0, 0.0) : init.phi(x);
    vel0[j] = j == 0 ? cplx(0.0, 0.0) : init.phi_hat(x) / inertia_density(model, x);
    for (const auto& mv : state0.mass_velocities)
      if (mv.position == x) vel0[j] = mv.velocity;
  }

  auto accel = [&](const std::vector<cplx>& phi, const std::vector<cplx>& vel, std::vector<cplx>& out) {
    out.assign(nn, cplx(0.0, 0.0));
    for (std::size_t j = 1; j < last; ++j)
      out[j] = (phi[j + 1] - 2.0 * phi[j] + phi[j - 1]) / h / node_mass[j];
    out[last] = (-(phi[last] - phi[last - 1]) / h - vel[last]) / node_mass[last];
  };

  std::vector<double> record = opts.record_times;
  if (record.empty())
    for (int k = 0; k <= 100; ++k) record.push_back(t_end * k / 100.0);
  for (std::size_t i = 0; i < record.size(); ++i) {
    if (record[i] < 0.0 || record[i] > t_end * (1.0 + 1e-12))
      throw Error(ErrorKind::UnstableParameters, "record time outside [0, t_end]");
    if (i > 0 && !(record[i] > record[i - 1]))
      throw Error(ErrorKind::UnstableParameters, "record times must be strictly increasing");
  }

  // levels[k] holds phi at step (first_level + k)
  std::deque<std::vector<cplx>> levels;
  long first_level = -1;
  {
    std::vector<cplx> acc;
    accel(phi0, vel0, acc);
    std::vector<cplx> prev(nn);
    for (std::size_t j = 0; j < nn; ++j) prev[j] = phi0[j] - dt * vel0[j] + 0.5 * dt * dt * acc[j];
    prev[0] = 0.0;
    levels.push_back(std::move(prev));
    levels.push_back(phi0);
  }

  EvolutionTrace trace;
  trace.method = EvolutionMethod::Fdtd;
  std::size_t next_record = 0;
  const double alpha = node_mass[last] / (dt * dt), beta = 0.5 / dt;

  auto emit = [&](double t) {
    const long i = static_cast<long>(std::floor(t / dt));
    const long s = std::max(-1L, i - 1);
    std::array<double, 4> ts{}, w{}, dw{};
    for (int k = 0; k < 4; ++k) ts[k] = (s + k) * dt;
    lagrange_weights(ts, t, w, dw);
    std::vector<cplx> phi(nn, cplx(0.0, 0.0)), vel(nn, cplx(0.0, 0.0));
    for (int k = 0; k < 4; ++k) {
      const auto& lv = levels[s + k - first_level];
      for (std::size_t j = 0; j < nn; ++j) {
        phi[j] += w[k] * lv[j];
        vel[j] += dw[k] * lv[j];
      }
    }
    TwoComponentState st;
    st.grid = grid;
    std::size_t j = 0;
    for (std::size_t g = 0; g < grid.size(); ++g) {
      const bool right = g > 0 && grid[g - 1] == grid[g];
      if (g > 0 && !right) ++j;
      st.phi.push_back(phi[j]);
      st.phi_hat.push_back(inertia_density(model, grid[g], right ? Side::Right : Side::Left) * vel[j]);
    }
    for (const auto& pm : model.point_masses())
      st.mass_velocities.push_back({pm.position, vel[static_cast<std::size_t>(std::lround(pm.position / h))]});
    trace.times.push_back(t);
    trace.states.push_back(std::move(st));
  };

  auto needed_level = [&](double t) { return std::max(2L, static_cast<long>(std::floor(t / dt)) + 2); };

  long current = 0;
  while (next_record < record.size()) {
    while (next_record < record.size() && needed_level(record[next_record]) <= current) {
      emit(record[next_record]);
      ++next_record;
    }
    if (next_record == record.size()) break;
    const auto& cur = levels.back();
    const auto& old = levels[levels.size() - 2];
    std::vector<cplx> next(nn);
    next[0] = 0.0;
    for (std::size_t j = 1; j < last; ++j)
      next[j] = 2.0 * cur[j] - old[j] + dt * dt * (cur[j + 1] - 2.0 * cur[j] + cur[j - 1]) / h / node_mass[j];
    next[last] = (2.0 * alpha * cur[last] - (alpha - beta) * old[last] - (cur[last] - cur[last - 1]) / h) /
                 (alpha + beta);
    levels.push_back(std::move(next));
    ++current;
    if (levels.size() > 4) {
      levels.pop_front();
      ++first_level;
    }
  }
  return trace;
}

std::vector<ErrorSample> compare_evolutions(const EvolutionTrace& trace_a, const EvolutionTrace& trace_b) {
  if (trace_a.states.empty() || trace_b.states.empty()) return {};
  const auto& grid = trace_a.states.front().grid;
  for (const auto& s : trace_a.states)
    if (s.grid != grid) throw Error(ErrorKind::GridMismatch, "trace states use different grids");
  for (const auto& s : trace_b.states)
    if (s.grid != grid) throw Error(ErrorKind::GridMismatch, "traces use different grids");

  const auto& tb = trace_b.times;
  std::vector<ErrorSample> out;
  for (std::size_t i = 0; i < trace_a.times.size(); ++i) {
    const double t = trace_a.times[i];
    std::vector<cplx> phi_b;
    auto exact = std::find(tb.begin(), tb.end(), t);
    if (exact != tb.end()) {
      phi_b = trace_b.states[exact - tb.begin()].phi;
    } else {
      if (tb.size() < 4 || t < tb.front() || t > tb.back())
        throw Error(ErrorKind::GridMismatch, "comparison time outside the reference trace");
      const auto idx = static_cast<std::size_t>(std::upper_bound(tb.begin(), tb.end(), t) - tb.begin());
      std::size_t s = idx >= 2 ? idx - 2 : 0;
      s = std::min(s, tb.size() - 4);
      std::array<double, 4> ts{}, w{}, dw{};
      for (int k = 0; k < 4; ++k) ts[k] = tb[s + k];
      lagrange_weights(ts, t, w, dw);
      phi_b.assign(grid.size(), cplx(0.0, 0.0));
      for (int k = 0; k < 4; ++k)
        for (std::size_t j = 0; j < grid.size(); ++j) phi_b[j] += w[k] * trace_b.states[s + k].phi[j];
    }
    const auto& phi_a = trace_a.states[i].phi;
    std::vector<cplx> diff(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) diff[j] = phi_a[j] - phi_b[j];
    const double scale = std::max(l2_norm(grid, phi_a), l2_norm(grid, phi_b));
    const double d = l2_norm(grid, diff);
    out.push_back({t, d == 0.0 ? 0.0 : d / scale});
  }
  return out;
}

double max_error(std::span<const ErrorSample> errors, double t0, double t1) {
  double m = 0.0;
  for (const auto& e : errors)
    if (e.t >= t0 && e.t <= t1) m = std::max(m, e.relative_l2);
  return m;
}

double interior_energy(const TwoComponentState& state, const DensityProfile& model) {
  const StateInterpolant interp(state);
  auto breaks = interp.breakpoints();
  const auto value = integrate(
      [&](double x) {
        const double rho = inertia_density(model, x);
        return cplx(std::norm(interp.phi_hat(x)) / rho + std::norm(interp.dphi_dx(x)), 0.0);
      },
      breaks);
  double e = value.value.real();
  for (const auto& pm : model.point_masses())
    for (const auto& mv : state.mass_velocities)
      if (mv.position == pm.position) e += pm.mass * std::norm(mv.velocity);
  return e;
}

std::vector<cplx> probe(const EvolutionTrace& trace, double x) {
  std::vector<cplx> out;
  out.reserve(trace.states.size());
  for (const auto& s : trace.states) out.push_back(StateInterpolant(s).phi(x));
  return out;
}

}  // namespace qnm
