#include "qnm/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace qnm {

namespace {

GaussRule compute_rule(int n) {
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1);
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) < 1e-16) break;
    }
    rule.nodes[i] = -z;
    rule.nodes[n - 1 - i] = z;
    rule.weights[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    rule.weights[n - 1 - i] = rule.weights[i];
  }
  return rule;
}

struct Sums {
  std::complex<double> value;
  double magnitude;
};

Sums composite(const std::function<std::complex<double>(double)>& f, std::span<const double> breaks,
               const GaussRule& rule, int subdivisions) {
  Sums s{{0.0, 0.0}, 0.0};
  for (std::size_t b = 0; b + 1 < breaks.size(); ++b) {
    const double lo = breaks[b], hi = breaks[b + 1];
    if (!(hi > lo)) continue;
    const double h = (hi - lo) / subdivisions;
    for (int p = 0; p < subdivisions; ++p) {
      const double mid = lo + (p + 0.5) * h;
      const double half = 0.5 * h;
      for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        const auto v = f(mid + half * rule.nodes[q]);
        s.value += half * rule.weights[q] * v;
        s.magnitude += half * rule.weights[q] * std::abs(v);
      }
    }
  }
  return s;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
  static std::mutex mtx;
  static std::map<int, GaussRule> cache;
  std::lock_guard lock(mtx);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_rule(n)).first;
  return it->second;
}

QuadratureResult integrate(const std::function<std::complex<double>(double)>& f, std::span<const double> breaks,
                           const QuadratureOptions& opts) {
  const auto& rule = gauss_legendre(opts.points_per_panel);
  QuadratureResult res;
  int sub = 1;
  auto prev = composite(f, breaks, rule, sub);
  for (int d = 0; d < opts.max_doublings; ++d) {
    sub *= 2;
    const auto next = composite(f, breaks, rule, sub);
    res.value = next.value;
    res.error_estimate = std::abs(next.value - prev.value);
    const double scale = std::max(std::abs(next.value), next.magnitude);
    prev = next;
    if (res.error_estimate <= opts.rel_tol * scale) {
      res.converged = true;
      break;
    }
  }
  std::size_t intervals = 0;
  for (std::size_t b = 0; b + 1 < breaks.size(); ++b)
    if (breaks[b + 1] > breaks[b]) ++intervals;
  res.panels = static_cast<int>(intervals) * sub;
  return res;
}

}  // namespace qnm
