#pragma once

#include <algorithm>
#include <complex>
#include <initializer_list>
#include <stdexcept>
#include <vector>

#include "biflat/rational.hpp"

namespace biflat {

using cx = std::complex<double>;

namespace detail {
inline bool coeff_is_zero(const cx& c) { return c == cx(0.0, 0.0); }
inline bool coeff_is_zero(const gq& c) { return c.is_zero(); }
inline cx coeff_conj(const cx& c) { return std::conj(c); }
inline gq coeff_conj(const gq& c) { return c.conj(); }
}  // namespace detail

/// Dense univariate polynomial, coefficients in ascending degree order.
/// The zero polynomial is the empty coefficient sequence; otherwise the
/// leading (highest-index) coefficient is nonzero.
template <class C>
struct poly {
  std::vector<C> c;

  poly() = default;
  poly(std::initializer_list<C> coeffs) : c(coeffs) { trim(); }
  explicit poly(std::vector<C> coeffs) : c(std::move(coeffs)) { trim(); }

  void trim() {
    while (!c.empty() && detail::coeff_is_zero(c.back())) c.pop_back();
  }

  bool is_zero() const { return c.empty(); }
  int degree() const { return static_cast<int>(c.size()) - 1; }  // -1 for zero

  C operator[](std::size_t i) const { return i < c.size() ? c[i] : C{}; }

  template <class X>
  auto eval(const X& x) const {
    using R = decltype(C{} * x);
    R acc{};
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  poly derivative() const {
    if (c.size() <= 1) return {};
    std::vector<C> d(c.size() - 1);
    for (std::size_t i = 1; i < c.size(); ++i) d[i - 1] = c[i] * C(static_cast<std::int64_t>(i));
    return poly(std::move(d));
  }

  /// Coefficient-wise complex conjugation (the `*` of reflection).
  poly conj_coeffs() const {
    std::vector<C> d(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) d[i] = detail::coeff_conj(c[i]);
    return poly(std::move(d));
  }

  /// Reversed coefficients: z^deg * p(1/z).
  poly reversed() const {
    std::vector<C> d(c.rbegin(), c.rend());
    return poly(std::move(d));
  }

  poly shifted_up(int k) const {  // multiply by z^k
    if (is_zero()) return {};
    std::vector<C> d(c.size() + k);
    std::copy(c.begin(), c.end(), d.begin() + k);
    return poly(std::move(d));
  }

  friend poly operator+(const poly& a, const poly& b) {
    std::vector<C> d(std::max(a.c.size(), b.c.size()));
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = a[i] + b[i];
    return poly(std::move(d));
  }
  friend poly operator-(const poly& a, const poly& b) {
    std::vector<C> d(std::max(a.c.size(), b.c.size()));
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = a[i] - b[i];
    return poly(std::move(d));
  }
  friend poly operator*(const poly& a, const poly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<C> d(a.c.size() + b.c.size() - 1, C{});
    for (std::size_t i = 0; i < a.c.size(); ++i)
      for (std::size_t j = 0; j < b.c.size(); ++j) d[i + j] = d[i + j] + a.c[i] * b.c[j];
    return poly(std::move(d));
  }
  friend poly operator*(const C& s, const poly& a) {
    std::vector<C> d(a.c);
    for (auto& x : d) x = s * x;
    return poly(std::move(d));
  }
  friend bool operator==(const poly& a, const poly& b) { return a.c == b.c; }
};

using cpoly = poly<cx>;
using qpoly = poly<gq>;

/// Exact polynomial division with remainder (field coefficients).
std::pair<qpoly, qpoly> divmod(const qpoly& a, const qpoly& b);

/// Monic gcd by the Euclidean algorithm, exact arithmetic.
qpoly poly_gcd(qpoly a, qpoly b);

qpoly to_exact(const cpoly& p, std::int64_t denom_scale = 1);
cpoly to_floating(const qpoly& p);

/// All complex roots via the companion-matrix eigenvalues, each polished by
/// one Newton step. Throws std::runtime_error on empty/constant input.
std::vector<cx> poly_roots(const cpoly& p);

/// Cluster a root list into (representative, multiplicity) pairs with the
/// given merge tolerance; representatives are cluster means, sorted by
/// modulus then argument.
std::vector<std::pair<cx, int>> cluster_roots(std::vector<cx> roots, double tol);

}  // namespace biflat
