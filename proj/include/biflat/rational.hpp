#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <complex>
#include <cstdint>
#include <string>

namespace biflat {

/// Exact rational scalar used by every symbolic module.
using rational = boost::multiprecision::cpp_rational;
using bigint = boost::multiprecision::cpp_int;

inline double to_double(const rational& q) { return q.convert_to<double>(); }

inline rational rat(std::int64_t num, std::int64_t den = 1) { return rational(num, den); }

/// Gaussian rational: complex number with exact rational real/imaginary parts.
/// Coefficient field for the exact mode of complex polynomials.
struct gq {
  rational re{0};
  rational im{0};

  gq() = default;
  gq(rational r) : re(std::move(r)) {}
  gq(rational r, rational i) : re(std::move(r)), im(std::move(i)) {}
  gq(std::int64_t r) : re(r) {}

  bool is_zero() const { return re == 0 && im == 0; }

  friend gq operator+(const gq& a, const gq& b) { return {a.re + b.re, a.im + b.im}; }
  friend gq operator-(const gq& a, const gq& b) { return {a.re - b.re, a.im - b.im}; }
  friend gq operator-(const gq& a) { return {-a.re, -a.im}; }
  friend gq operator*(const gq& a, const gq& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend gq operator/(const gq& a, const gq& b) {
    rational n2 = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / n2, (a.im * b.re - a.re * b.im) / n2};
  }
  friend bool operator==(const gq& a, const gq& b) { return a.re == b.re && a.im == b.im; }

  gq conj() const { return {re, -im}; }
  std::complex<double> to_complex() const { return {to_double(re), to_double(im)}; }
};

inline std::string to_string(const rational& q) { return q.str(); }

}  // namespace biflat
