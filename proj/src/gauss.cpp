#include "biflat/gauss.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace biflat {

namespace {

gl_rule compute_rule(int n) {
  // Newton iteration on Legendre P_n from Chebyshev initial guesses.
  gl_rule rule;
  rule.x.resize(n);
  rule.w.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.x[n - 1 - i] = x;
    rule.w[n - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
  }
  return rule;
}

}  // namespace

const gl_rule& gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: order must be positive");
  static std::map<int, gl_rule> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_rule(n)).first;
  return it->second;
}

cx integrate_segment(const std::function<cx(cx)>& f, cx a, cx b, int order, int panels) {
  const gl_rule& rule = gauss_legendre(order);
  cx total = 0.0;
  for (int p = 0; p < panels; ++p) {
    cx lo = a + (b - a) * (double(p) / panels);
    cx hi = a + (b - a) * (double(p + 1) / panels);
    cx mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    cx acc = 0.0;
    for (int i = 0; i < order; ++i) acc += rule.w[i] * f(mid + half * rule.x[i]);
    total += half * acc;
  }
  return total;
}

namespace {

cx adaptive_rec(const std::function<cx(cx)>& f, cx a, cx b, cx whole, double tol, int order,
                int depth) {
  cx mid = 0.5 * (a + b);
  cx left = integrate_segment(f, a, mid, order, 1);
  cx right = integrate_segment(f, mid, b, order, 1);
  if (std::abs(left + right - whole) <= tol || depth <= 0) return left + right;
  return adaptive_rec(f, a, mid, left, tol / 2, order, depth - 1) +
         adaptive_rec(f, mid, b, right, tol / 2, order, depth - 1);
}

}  // namespace

cx integrate_segment_adaptive(const std::function<cx(cx)>& f, cx a, cx b, double tol, int order,
                              int max_depth) {
  cx whole = integrate_segment(f, a, b, order, 1);
  return adaptive_rec(f, a, b, whole, tol, order, max_depth);
}

double integrate_disk(const std::function<double(cx)>& f, int nr, int nt) {
  const gl_rule& rr = gauss_legendre(nr);
  const gl_rule& tr = gauss_legendre(nt);
  double total = 0.0;
  for (int i = 0; i < nr; ++i) {
    double r = 0.5 * (rr.x[i] + 1.0);
    double wr = 0.5 * rr.w[i];
    double ring = 0.0;
    for (int j = 0; j < nt; ++j) {
      double th = std::numbers::pi * (tr.x[j] + 1.0);
      double wt = std::numbers::pi * tr.w[j];
      ring += wt * f(std::polar(r, th));
    }
    total += wr * r * ring;
  }
  return total;
}

}  // namespace biflat
