#include "qnm/roots.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <future>
#include <limits>
#include <numbers>
#include <optional>
#include <string>

#include "qnm/error.hpp"
#include "qnm/quadrature.hpp"

namespace qnm {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

std::string describe(const SearchRegion& r) {
  return "[" + std::to_string(r.re_min) + ", " + std::to_string(r.re_max) + "] x [" + std::to_string(r.im_min) +
         ", " + std::to_string(r.im_max) + "]";
}

struct Edge {
  cplx from;
  cplx to;
  int base_panels;
};

// (1 / 2 pi i) * contour integral of f'/f over the rectangle boundary, or
// throws if a zero lies (numerically) on the contour or the quadrature does
// not settle on an integer.
cplx winding_number(const AnalyticFn& fn, const SearchRegion& r, const RootOptions& opts) {
  if (!(r.width() > 0.0 && r.height() > 0.0))
    throw Error(ErrorKind::NonIntegerWindingNumber, "degenerate rectangle " + describe(r));
  const cplx c00{r.re_min, r.im_min}, c10{r.re_max, r.im_min}, c11{r.re_max, r.im_max}, c01{r.re_min, r.im_max};
  auto panels_for = [&](double len) { return std::max(2, static_cast<int>(std::ceil(len / opts.panel_length))); };
  const std::array<Edge, 4> edges{Edge{c00, c10, panels_for(r.width())}, Edge{c10, c11, panels_for(r.height())},
                                  Edge{c11, c01, panels_for(r.width())}, Edge{c01, c00, panels_for(r.height())}};
  const auto& rule = gauss_legendre(opts.points_per_panel);
  const double near_zero = 1e-9 * (1.0 + std::abs(r.center()));

  auto integrate_contour = [&](int refine) {
    cplx total{0.0, 0.0};
    for (const auto& e : edges) {
      const int panels = e.base_panels * refine;
      const cplx dz = (e.to - e.from) / static_cast<double>(panels);
      for (int p = 0; p < panels; ++p) {
        const cplx mid = e.from + (p + 0.5) * dz;
        for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
          const cplx z = mid + 0.5 * rule.nodes[q] * dz;
          const auto [w, dw] = fn(z);
          if (std::abs(w) <= near_zero * std::abs(dw) || !std::isfinite(std::abs(w)) || !std::isfinite(std::abs(dw)))
            throw Error(ErrorKind::ContourThroughZero, "zero on or near contour of " + describe(r));
          total += 0.5 * rule.weights[q] * dz * (dw / w);
        }
      }
    }
    return total / cplx(0.0, 2.0 * std::numbers::pi);
  };

  cplx prev = integrate_contour(1);
  int refine = 1;
  for (int d = 0; d < opts.max_doublings; ++d) {
    refine *= 2;
    const cplx next = integrate_contour(refine);
    const double off_integer = std::abs(next - std::round(next.real()));
    if (std::abs(next - prev) < opts.integer_tolerance && off_integer < opts.integer_tolerance) return next;
    prev = next;
  }
  throw Error(ErrorKind::NonIntegerWindingNumber,
              "winding number over " + describe(r) + " did not settle (last value " + std::to_string(prev.real()) +
                  " + " + std::to_string(prev.imag()) + "i)");
}

int count_in(const AnalyticFn& fn, const SearchRegion& r, const RootOptions& opts) {
  return static_cast<int>(std::lround(winding_number(fn, r, opts).real()));
}

SearchRegion expanded(const SearchRegion& r, double delta) {
  SearchRegion e = r;
  e.re_min -= delta;
  e.re_max += delta;
  e.im_min -= delta;
  e.im_max += delta;
  return e;
}

class Subdivider {
 public:
  Subdivider(const AnalyticFn& fn, const RootOptions& opts, double tol)
      : fn_(fn), opts_(opts), tol_(tol), spare_workers_(std::max(0, opts.threads - 1)) {}

  std::vector<cplx> search(const SearchRegion& r, int count) {
    if (count <= 0) return {};
    const double size = std::max(r.width(), r.height());
    const double scale = 1.0 + std::abs(r.center());
    if (count == 1) {
      if (auto z = try_newton(r)) return {*z};
      if (size < std::max(10.0 * tol_, 1e-10 * scale))
        throw Error(ErrorKind::NewtonDiverged, "could not polish the isolated zero in " + describe(r));
    } else if (size < std::max(10.0 * tol_, 1e-7 * scale)) {
      // contours closer than this to a zero are rejected, so splitting stops here
      throw Error(ErrorKind::DegenerateRoot,
                  std::to_string(count) + " zeros inside " + describe(r) + " below the resolution limit");
    }
    return split(r, count);
  }

 private:
  std::optional<cplx> try_newton(const SearchRegion& r) const {
    const double margin = 1e-9 * std::max(r.width(), r.height());
    try {
      const cplx z = newton_polish(fn_, r.center(), tol_, opts_.max_newton_iterations);
      if (r.contains(z, margin)) return z;
    } catch (const Error&) {
    }
    return std::nullopt;
  }

  std::vector<cplx> split(const SearchRegion& r, int count) {
    static constexpr std::array<double, 7> fractions{0.5, 0.4621, 0.5379, 0.4137, 0.5863, 0.3571, 0.6429};
    const bool vertical_cut = r.width() >= r.height();
    for (double f : fractions) {
      SearchRegion lo = r, hi = r;
      if (vertical_cut) {
        const double cut = r.re_min + f * r.width();
        lo.re_max = cut;
        hi.re_min = cut;
      } else {
        const double cut = r.im_min + f * r.height();
        lo.im_max = cut;
        hi.im_min = cut;
      }
      int n_lo = 0, n_hi = 0;
      try {
        n_lo = count_in(fn_, lo, opts_);
        n_hi = count_in(fn_, hi, opts_);
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::ContourThroughZero || e.kind() == ErrorKind::NonIntegerWindingNumber) continue;
        throw;
      }
      if (n_lo + n_hi != count || n_lo < 0 || n_hi < 0) continue;
      return merge(lo, n_lo, hi, n_hi);
    }
    if (count >= 2)
      throw Error(ErrorKind::DegenerateRoot,
                  std::to_string(count) + " zeros inside " + describe(r) + " cannot be separated");
    throw Error(ErrorKind::NonIntegerWindingNumber, "no consistent subdivision of " + describe(r));
  }

  std::vector<cplx> merge(const SearchRegion& lo, int n_lo, const SearchRegion& hi, int n_hi) {
    std::vector<cplx> a, b;
    if (n_lo > 0 && n_hi > 0 && claim_worker()) {
      auto fut = std::async(std::launch::async, [&] { return search(hi, n_hi); });
      try {
        a = search(lo, n_lo);
      } catch (...) {
        fut.wait();
        release_worker();
        throw;
      }
      b = fut.get();
      release_worker();
    } else {
      a = search(lo, n_lo);
      b = search(hi, n_hi);
    }
    a.insert(a.end(), b.begin(), b.end());
    return a;
  }

  bool claim_worker() {
    int avail = spare_workers_.load();
    while (avail > 0)
      if (spare_workers_.compare_exchange_weak(avail, avail - 1)) return true;
    return false;
  }
  void release_worker() { spare_workers_.fetch_add(1); }

  const AnalyticFn& fn_;
  const RootOptions& opts_;
  double tol_;
  std::atomic<int> spare_workers_;
};

}  // namespace

cplx newton_polish(const AnalyticFn& fn, cplx z0, double tol, int max_iterations) {
  cplx z = z0;
  for (int it = 0; it < max_iterations; ++it) {
    const auto [w, dw] = fn(z);
    if (w == cplx(0.0, 0.0)) return z;
    if (dw == cplx(0.0, 0.0) || !std::isfinite(std::abs(w)) || !std::isfinite(std::abs(dw)))
      throw Error(ErrorKind::NewtonDiverged, "vanishing or non-finite derivative during Newton iteration");
    const cplx step = w / dw;
    z -= step;
    if (std::abs(step) <= std::max(tol, 8.0 * kEps * std::abs(z))) {
      // one more step to land below the tolerance rather than on it
      const auto [w2, dw2] = fn(z);
      if (dw2 != cplx(0.0, 0.0) && std::isfinite(std::abs(w2 / dw2))) {
        const cplx last = w2 / dw2;
        if (std::abs(last) < std::abs(step)) z -= last;
      }
      return z;
    }
  }
  throw Error(ErrorKind::NewtonDiverged, "Newton iteration did not converge");
}

ZeroCount count_zeros(const AnalyticFn& fn, const SearchRegion& rect, const RootOptions& opts) {
  if (!(rect.width() > 0.0 && rect.height() > 0.0))
    throw Error(ErrorKind::NonIntegerWindingNumber, "degenerate search rectangle " + describe(rect));
  const double base = 1e-3 * std::max(rect.width(), rect.height());
  ErrorKind last = ErrorKind::ContourThroughZero;
  std::string last_what;
  for (int nudge = 0; nudge <= opts.max_nudges; ++nudge) {
    // irrational-ish growth so successive contours do not retrace each other
    const SearchRegion r = nudge == 0 ? rect : expanded(rect, base * nudge * 1.3819660112501051);
    try {
      const cplx w = winding_number(fn, r, opts);
      return {static_cast<int>(std::lround(w.real())), w, r, nudge};
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::ContourThroughZero && e.kind() != ErrorKind::NonIntegerWindingNumber) throw;
      last = e.kind();
      last_what = e.what();
    }
  }
  throw Error(last, "after " + std::to_string(opts.max_nudges) + " nudges: " + last_what);
}

std::vector<cplx> find_zeros(const AnalyticFn& fn, const SearchRegion& rect, const RootOptions& opts) {
  const auto counted = count_zeros(fn, rect, opts);
  Subdivider sub(fn, opts, rect.tol);
  auto roots = sub.search(counted.region, counted.count);
  std::sort(roots.begin(), roots.end(), [](cplx l, cplx r) {
    return l.real() != r.real() ? l.real() < r.real() : l.imag() < r.imag();
  });
  std::vector<cplx> unique;
  for (const auto& z : roots) {
    if (!unique.empty() && std::abs(unique.back() - z) < 10.0 * rect.tol) continue;
    unique.push_back(z);
  }
  return unique;
}

int threads_from_env() {
  if (const char* env = std::getenv("QNM_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return 1;
}

}  // namespace qnm
