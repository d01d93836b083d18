#include "biflat/poly.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <numeric>

namespace biflat {

std::pair<qpoly, qpoly> divmod(const qpoly& a, const qpoly& b) {
  if (b.is_zero()) throw std::invalid_argument("divmod: division by zero polynomial");
  qpoly r = a;
  if (a.degree() < b.degree()) return {qpoly{}, r};
  std::vector<gq> q(a.degree() - b.degree() + 1, gq{});
  const gq lead = b.c.back();
  while (!r.is_zero() && r.degree() >= b.degree()) {
    int shift = r.degree() - b.degree();
    gq f = r.c.back() / lead;
    q[shift] = f;
    // r -= f * z^shift * b
    for (int i = 0; i <= b.degree(); ++i)
      r.c[i + shift] = r.c[i + shift] - f * b.c[i];
    r.trim();
  }
  return {qpoly(std::move(q)), r};
}

qpoly poly_gcd(qpoly a, qpoly b) {
  while (!b.is_zero()) {
    auto [q, r] = divmod(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.is_zero()) {
    gq lead = a.c.back();
    for (auto& x : a.c) x = x / lead;  // monic
  }
  return a;
}

qpoly to_exact(const cpoly& p, std::int64_t denom_scale) {
  std::vector<gq> d(p.c.size());
  for (std::size_t i = 0; i < p.c.size(); ++i) {
    rational re(static_cast<std::int64_t>(std::llround(p.c[i].real() * double(denom_scale))),
                denom_scale);
    rational im(static_cast<std::int64_t>(std::llround(p.c[i].imag() * double(denom_scale))),
                denom_scale);
    d[i] = gq{re, im};
  }
  return qpoly(std::move(d));
}

cpoly to_floating(const qpoly& p) {
  std::vector<cx> d(p.c.size());
  for (std::size_t i = 0; i < p.c.size(); ++i) d[i] = p.c[i].to_complex();
  return cpoly(std::move(d));
}

std::vector<cx> poly_roots(const cpoly& p) {
  if (p.degree() < 1) throw std::runtime_error("poly_roots: polynomial has no roots (degree < 1)");
  // deflate exact trailing zeros first: roots at the origin stay exact
  std::size_t nzero = 0;
  while (nzero < p.c.size() && detail::coeff_is_zero(p.c[nzero])) ++nzero;
  std::vector<cx> roots(nzero, cx(0.0, 0.0));
  std::vector<cx> a(p.c.begin() + nzero, p.c.end());
  const int n = static_cast<int>(a.size()) - 1;
  if (n >= 1) {
    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) companion(i, n - 1) = -a[i] / a[n];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success)
      throw std::runtime_error("poly_roots: eigenvalue iteration failed to converge");
    cpoly q{std::vector<cx>(a)};
    cpoly dq = q.derivative();
    for (int i = 0; i < n; ++i) {
      cx r = solver.eigenvalues()(i);
      cx d = dq.eval(r);
      if (std::abs(d) > 1e-12) {  // one Newton polish step; skip near-multiple roots
        cx r2 = r - q.eval(r) / d;
        if (std::abs(q.eval(r2)) < std::abs(q.eval(r))) r = r2;
      }
      roots.push_back(r);
    }
  }
  return roots;
}

std::vector<std::pair<cx, int>> cluster_roots(std::vector<cx> roots, double tol) {
  std::vector<std::pair<cx, int>> clusters;
  std::vector<bool> used(roots.size(), false);
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (used[i]) continue;
    cx sum = roots[i];
    int count = 1;
    used[i] = true;
    for (std::size_t j = i + 1; j < roots.size(); ++j) {
      if (!used[j] && std::abs(roots[j] - sum / double(count)) <= tol) {
        sum += roots[j];
        ++count;
        used[j] = true;
      }
    }
    clusters.emplace_back(sum / double(count), count);
  }
  std::sort(clusters.begin(), clusters.end(), [](const auto& x, const auto& y) {
    double mx = std::abs(x.first), my = std::abs(y.first);
    if (std::abs(mx - my) > 1e-14) return mx < my;
    return std::arg(x.first) < std::arg(y.first);
  });
  return clusters;
}

}  // namespace biflat
