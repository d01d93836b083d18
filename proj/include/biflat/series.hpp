#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

namespace biflat {

/// Truncated Maclaurin series with complex coefficients, fixed length.
struct cseries {
  std::vector<std::complex<double>> c;

  cseries() = default;
  explicit cseries(std::size_t n) : c(n, 0.0) {}
  explicit cseries(std::vector<std::complex<double>> coeffs) : c(std::move(coeffs)) {}

  std::size_t size() const { return c.size(); }
  std::complex<double> operator[](std::size_t i) const { return i < c.size() ? c[i] : 0.0; }

  std::complex<double> eval(std::complex<double> z) const {
    std::complex<double> acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
    return acc;
  }

  friend cseries operator+(const cseries& a, const cseries& b) {
    cseries r(std::max(a.size(), b.size()));
    for (std::size_t i = 0; i < r.size(); ++i) r.c[i] = a[i] + b[i];
    return r;
  }
  friend cseries operator-(const cseries& a, const cseries& b) {
    cseries r(std::max(a.size(), b.size()));
    for (std::size_t i = 0; i < r.size(); ++i) r.c[i] = a[i] - b[i];
    return r;
  }
  friend cseries operator*(std::complex<double> s, const cseries& a) {
    cseries r = a;
    for (auto& v : r.c) v *= s;
    return r;
  }

  /// Product truncated to n terms.
  static cseries mul(const cseries& a, const cseries& b, std::size_t n) {
    cseries r(n);
    for (std::size_t i = 0; i < std::min(a.size(), n); ++i) {
      if (a.c[i] == std::complex<double>(0.0)) continue;
      for (std::size_t j = 0; i + j < n && j < b.size(); ++j) r.c[i + j] += a.c[i] * b.c[j];
    }
    return r;
  }

  /// Quotient a/b to n terms; requires b[0] != 0.
  static cseries div(const cseries& a, const cseries& b, std::size_t n) {
    if (b.size() == 0 || b[0] == std::complex<double>(0.0))
      throw std::invalid_argument("cseries::div: divisor has zero constant term");
    cseries r(n);
    for (std::size_t m = 0; m < n; ++m) {
      std::complex<double> s = a[m];
      for (std::size_t i = 0; i < m; ++i) s -= r.c[i] * b[m - i];
      r.c[m] = s / b[0];
    }
    return r;
  }

  cseries derivative() const {
    if (c.size() <= 1) return cseries(std::size_t(1));
    cseries r(c.size() - 1);
    for (std::size_t i = 1; i < c.size(); ++i) r.c[i - 1] = double(i) * c[i];
    return r;
  }

  /// Antiderivative with zero constant term, one term longer.
  cseries integral() const {
    cseries r(c.size() + 1);
    for (std::size_t i = 0; i < c.size(); ++i) r.c[i + 1] = c[i] / double(i + 1);
    return r;
  }

  /// Divide by z^k; the dropped low-order coefficients must vanish to `tol`
  /// (they are returned so the caller can audit what was discarded).
  cseries shift_down(std::size_t k, std::vector<std::complex<double>>* dropped = nullptr) const {
    if (dropped) dropped->assign(c.begin(), c.begin() + std::min(k, c.size()));
    cseries r(c.size() > k ? c.size() - k : 0);
    for (std::size_t i = k; i < c.size(); ++i) r.c[i - k] = c[i];
    return r;
  }

  cseries shift_up(std::size_t k) const {
    cseries r(c.size() + k);
    for (std::size_t i = 0; i < c.size(); ++i) r.c[i + k] = c[i];
    return r;
  }
};

}  // namespace biflat
