#include "qnm/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qnm/error.hpp"

namespace qnm {

namespace {

constexpr cplx I{0.0, 1.0};

// Entries of the transfer matrix [[C, S], [-q S, C]] over length l as
// functions of q = k^2, with their q-derivatives. All are entire in q, so the
// branch of k never matters.
struct Transfer {
  cplx c, s, dc, ds;
};

Transfer transfer(cplx q, double l) {
  Transfer t;
  const cplx ql2 = q * l * l;
  if (std::abs(ql2) < 1.0) {
    // power series in -q: C = sum (-q)^j l^2j/(2j)!, S = sum (-q)^j l^(2j+1)/(2j+1)!
    cplx c{0.0, 0.0}, s{0.0, 0.0}, dc{0.0, 0.0}, ds{0.0, 0.0};
    double coef_c = 1.0, coef_s = l;
    cplx pow_prev{1.0, 0.0}, pow_j{1.0, 0.0};
    for (int j = 0; j < 30; ++j) {
      c += pow_j * coef_c;
      s += pow_j * coef_s;
      if (j >= 1) {
        dc -= static_cast<double>(j) * pow_prev * coef_c;
        ds -= static_cast<double>(j) * pow_prev * coef_s;
      }
      coef_c *= l * l / ((2.0 * j + 1.0) * (2.0 * j + 2.0));
      coef_s *= l * l / ((2.0 * j + 2.0) * (2.0 * j + 3.0));
      pow_prev = pow_j;
      pow_j *= -q;
    }
    return {c, s, dc, ds};
  }
  const cplx k = std::sqrt(q);
  const cplx kl = k * l;
  t.c = std::cos(kl);
  t.s = std::sin(kl) / k;
  t.dc = -0.5 * l * t.s;
  t.ds = (l * t.c - t.s) / (2.0 * q);
  return t;
}

cplx q_of(Family family, double value, cplx omega) {
  return family == Family::Wave ? value * omega * omega : omega * omega - value;
}

cplx dq_of(Family family, double value, cplx omega) {
  return family == Family::Wave ? 2.0 * value * omega : 2.0 * omega;
}

// Walks the pieces, calling visit(piece, f, g) with the state at the start of
// every piece (after any point-mass jump at its left edge).
template <class Visit>
Propagation walk(const DensityProfile& model, cplx omega, Visit&& visit) {
  cplx f{0.0, 0.0}, g{1.0, 0.0}, df{0.0, 0.0}, dg{0.0, 0.0};
  const auto& masses = model.point_masses();
  for (const auto& piece : model.pieces()) {
    visit(piece, f, g);
    const cplx q = q_of(model.family(), piece.value, omega);
    const cplx dq = dq_of(model.family(), piece.value, omega);
    const auto t = transfer(q, piece.x_right - piece.x_left);
    const cplx f_new = t.c * f + t.s * g;
    const cplx g_new = -q * t.s * f + t.c * g;
    const cplx df_new = t.dc * dq * f + t.c * df + t.ds * dq * g + t.s * dg;
    const cplx dqs = -(t.s + q * t.ds);  // d(-q S)/dq
    const cplx dg_new = dqs * dq * f - q * t.s * df + t.dc * dq * g + t.c * dg;
    f = f_new;
    g = g_new;
    df = df_new;
    dg = dg_new;
    for (const auto& pm : masses) {
      if (pm.position == piece.x_right && pm.position < model.a()) {
        dg -= pm.mass * (2.0 * omega * f + omega * omega * df);
        g -= pm.mass * omega * omega * f;
      }
    }
  }
  return {f, g, df, dg};
}

const ModePiece& piece_at(const std::vector<ModePiece>& pieces, double x, Side side) {
  if (side == Side::Left) {
    auto it = std::lower_bound(pieces.begin(), pieces.end(), x,
                               [](const ModePiece& p, double v) { return p.x_right < v; });
    return it == pieces.end() ? pieces.back() : *it;
  }
  auto it = std::upper_bound(pieces.begin(), pieces.end(), x,
                             [](double v, const ModePiece& p) { return v < p.x_right; });
  return it == pieces.end() ? pieces.back() : *it;
}

}  // namespace

cplx wavenumber(Family family, double value, cplx omega) {
  return family == Family::Wave ? omega * std::sqrt(value) : std::sqrt(omega * omega - value);
}

Propagation propagate(const DensityProfile& model, cplx omega) {
  return walk(model, omega, [](const Piece&, cplx, cplx) {});
}

Characteristic characteristic(const DensityProfile& model, cplx omega) {
  const auto p = propagate(model, omega);
  const double m = model.boundary_mass();
  const cplx w = p.fprime_a_minus - m * omega * omega * p.f_a - I * omega * p.f_a;
  const cplx dw = p.d_fprime_a_minus - m * (2.0 * omega * p.f_a + omega * omega * p.d_f_a) - I * p.f_a -
                  I * omega * p.d_f_a;
  return {w, dw};
}

cplx QnmMode::f(double x, Side side) const {
  const auto& p = piece_at(pieces, x, side);
  return p.A * std::exp(I * p.k * x) + p.B * std::exp(-I * p.k * x);
}

cplx QnmMode::df(double x, Side side) const {
  const auto& p = piece_at(pieces, x, side);
  return I * p.k * (p.A * std::exp(I * p.k * x) - p.B * std::exp(-I * p.k * x));
}

void QnmMode::scale(cplx c) {
  for (auto& p : pieces) {
    p.A *= c;
    p.B *= c;
  }
}

QnmMode build_eigenfunction(const DensityProfile& model, cplx omega, double tol) {
  if (omega == cplx(0.0, 0.0)) throw Error(ErrorKind::OmegaZero, "omega = 0 is excluded from QNM spectra");
  const auto ch = characteristic(model, omega);
  const double residual = std::abs(ch.value) / std::abs(ch.derivative);
  if (!(residual <= tol * std::max(1.0, std::abs(omega))))
    throw Error(ErrorKind::NotAnEigenfrequency,
                "|W/W'| = " + std::to_string(residual) + " at the requested frequency");
  QnmMode mode;
  mode.omega = omega;
  mode.residual = residual;
  walk(model, omega, [&](const Piece& piece, cplx f, cplx g) {
    const cplx k = wavenumber(model.family(), piece.value, omega);
    if (k == cplx(0.0, 0.0))
      throw Error(ErrorKind::NotAnEigenfrequency, "zero wavenumber on a piece; plane-wave form undefined");
    const double x0 = piece.x_left;
    const cplx A = std::exp(-I * k * x0) * 0.5 * (f + g / (I * k));
    const cplx B = std::exp(I * k * x0) * 0.5 * (f - g / (I * k));
    mode.pieces.push_back({piece.x_left, piece.x_right, piece.value, k, A, B});
  });
  return mode;
}

double optical_length(const DensityProfile& model) {
  if (model.family() == Family::KleinGordon) return model.a();
  double len = 0.0;
  for (const auto& s : model.segments()) len += std::sqrt(s.rho) * (s.x_right - s.x_left);
  return len;
}

RootOptions root_options_for(const DensityProfile& model) {
  RootOptions opts;
  // W oscillates like exp(+-i w L); a quarter period per panel
  opts.panel_length = 0.25 * std::numbers::pi / std::max(optical_length(model), 1e-3);
  double mass = 0.0;
  for (const auto& pm : model.point_masses()) mass += pm.mass;
  if (mass > 0.0) opts.panel_length /= 1.0 + std::log1p(mass);
  opts.threads = threads_from_env();
  return opts;
}

ZeroCount count_modes(const DensityProfile& model, const SearchRegion& rect) {
  return count_zeros([&](cplx w) {
    const auto c = characteristic(model, w);
    return std::pair{c.value, c.derivative};
  }, rect, root_options_for(model));
}

std::vector<QnmMode> find_modes(const DensityProfile& model, const SearchRegion& rect) {
  return find_modes(model, rect, root_options_for(model));
}

std::vector<QnmMode> find_modes(const DensityProfile& model, const SearchRegion& rect, const RootOptions& opts) {
  const auto roots = find_zeros(
      [&](cplx w) {
        const auto c = characteristic(model, w);
        return std::pair{c.value, c.derivative};
      },
      rect, opts);
  std::vector<QnmMode> modes;
  for (const auto& w : roots) {
    if (std::abs(w) < 10.0 * rect.tol) continue;
    auto mode = build_eigenfunction(model, w, std::max(1e-8, rect.tol));
    modes.push_back(std::move(mode));
  }
  return modes;
}

QnmMode mirror_mode(const QnmMode& mode, const DensityProfile& model) {
  QnmMode out;
  out.omega = -std::conj(mode.omega);
  out.normalized = mode.normalized;
  out.residual = mode.residual;
  for (const auto& p : mode.pieces) {
    ModePiece q = p;
    q.k = wavenumber(model.family(), p.value, out.omega);
    // conj(A e^{ikx} + B e^{-ikx}) = A* e^{-ik*x} + B* e^{ik*x}
    if (std::abs(q.k + std::conj(p.k)) <= std::abs(q.k - std::conj(p.k))) {
      q.A = std::conj(p.A);
      q.B = std::conj(p.B);
    } else {
      q.A = std::conj(p.B);
      q.B = std::conj(p.A);
    }
    out.pieces.push_back(q);
  }
  return out;
}

std::vector<QnmMode> paired_spectrum(const DensityProfile& model, int pairs, double im_min, double im_max,
                                     double tol) {
  if (pairs <= 0) return {};
  const double spacing = std::numbers::pi / std::max(optical_length(model), 1e-3);
  const auto opts = root_options_for(model);
  // a strip left of the imaginary axis keeps purely imaginary modes off the contour
  const double re_min = -0.37 * opts.panel_length;
  double re_max = (pairs + 1.5) * spacing;
  for (int attempt = 0; attempt < 12; ++attempt, re_max *= 1.5) {
    SearchRegion rect{re_min, re_max, im_min, im_max, tol};
    const auto found = find_modes(model, rect, opts);
    std::vector<QnmMode> positive;
    for (const auto& m : found)
      if (m.omega.real() > -10.0 * tol) positive.push_back(m);
    if (static_cast<int>(positive.size()) < pairs) continue;
    positive.resize(pairs);
    std::vector<QnmMode> out;
    for (const auto& m : positive) {
      out.push_back(m);
      if (std::abs(m.omega.real()) > 10.0 * tol) out.push_back(mirror_mode(m, model));
    }
    return out;
  }
  throw Error(ErrorKind::NonIntegerWindingNumber,
              "could not locate " + std::to_string(pairs) + " modes with Im omega in [" + std::to_string(im_min) +
                  ", " + std::to_string(im_max) + "]");
}

bool is_conjugate_closed(const std::vector<QnmMode>& modes, double rel_tol) {
  for (const auto& m : modes) {
    const cplx partner = -std::conj(m.omega);
    const bool found = std::any_of(modes.begin(), modes.end(), [&](const QnmMode& o) {
      return std::abs(o.omega - partner) <= rel_tol * std::max(1.0, std::abs(partner));
    });
    if (!found) return false;
  }
  return true;
}

}  // namespace qnm
