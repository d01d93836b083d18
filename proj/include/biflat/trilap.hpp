#pragma once

#include <array>
#include <map>
#include <random>
#include <stdexcept>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "biflat/rational.hpp"

namespace biflat {

using exp3 = std::array<int, 3>;

/// Real trivariate polynomial sum c_abc x1^a x2^b x3^c, exact rational
/// coefficients; doubles as a constant-coefficient operator polynomial in
/// (d1, d2, d3) since those commute.
struct poly3q {
  std::map<exp3, rational> t;

  static poly3q monomial(int a, int b, int c, rational coef);
  void add(const exp3& e, const rational& c);
  bool is_zero() const { return t.empty(); }
  int degree() const;

  friend poly3q operator+(const poly3q& p, const poly3q& q);
  friend poly3q operator-(const poly3q& p, const poly3q& q);
  friend poly3q operator*(const poly3q& p, const poly3q& q);
  friend bool operator==(const poly3q& p, const poly3q& q) { return p.t == q.t; }
  poly3q scaled(const rational& s) const;

  poly3q d(int axis) const;          // partial derivative along axis 0/1/2
  poly3q laplacian() const;
  poly3q substitute_x1_zero() const; // set x1 = 0
  double eval(double x1, double x2, double x3) const;

  nlohmann::json to_json() const;
  static poly3q from_json(const nlohmann::json& j);
  std::string str() const;
};

/// Apply a constant-coefficient operator polynomial to a field polynomial.
poly3q dop_apply(const poly3q& op, const poly3q& f);

/// 3x3 matrix of operator polynomials.
struct op_matrix3 {
  poly3q e[3][3];

  friend op_matrix3 operator+(const op_matrix3& A, const op_matrix3& B);
  friend op_matrix3 operator-(const op_matrix3& A, const op_matrix3& B);
  friend bool operator==(const op_matrix3& A, const op_matrix3& B);
  nlohmann::json to_json() const;
};

op_matrix3 op_mul(const op_matrix3& A, const op_matrix3& B);
std::array<poly3q, 3> op_apply(const op_matrix3& A, const std::array<poly3q, 3>& f);

// the operator catalog
op_matrix3 op_L();         // first factor of the bilaplacian
op_matrix3 op_Lprime();    // second factor (x1 -> -x1 conjugate of L)
op_matrix3 op_R();
op_matrix3 op_D();
op_matrix3 op_B();         // columns (-d1,-d2,-d3), (-d2,d1,0), (-d3,0,d1)
op_matrix3 op_B_printed(); // sign variant with columns 2-3 negated
op_matrix3 op_hessian();
op_matrix3 op_identity();
op_matrix3 op_diag(const poly3q& a, const poly3q& b, const poly3q& c);
poly3q lap_op();           // d1^2 + d2^2 + d3^2 as an operator polynomial

std::array<poly3q, 3> lift(const poly3q& u, int slot);  // u^<slot>, slot 1..3

struct non_biharmonic_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Canonical particular solution P of the plane Poisson equation
/// d2^2 P + d3^2 P = q for a polynomial q(x2, x3): per-monomial double
/// x2-integration with the x3-correction recursion, then symmetrized over
/// the x2 <-> x3 swap when q is swap-invariant. Deterministic; reproduces
/// P = (3/2)(x2^2+x3^2) for q = 6 and P = x2^3 for q = 6 x2.
poly3q poisson_profile(const poly3q& q);

/// Almansi-type split u = v + x1 w with v, w exactly harmonic, via
/// h = Delta u, w = (int_0^{x1} h dt - P(x'))/2, Delta' P = d1 h(0, x').
std::pair<poly3q, poly3q> almansi3(const poly3q& u);

/// True iff every monomial of u has x1-exponent >= 3 (order-2 flatness on
/// the plane patch {x1 = 0} for polynomials).
bool flat3_check(const poly3q& u);

/// X1 = (H[w])^-1 (-H[v] + B[w]) as an exact matrix of rational functions:
/// numerators adj(H[w]) * (-H[v] + B[w]), shared denominator det H[w].
/// A vanishing determinant sets the degeneracy flag and reports the rank of
/// H[w] over the rational function field.
struct mat_field3 {
  poly3q num[3][3];
  poly3q den;
  bool degenerate = false;
  int rank = 0;

  /// Evaluate the matrix at a point (throws if the denominator vanishes).
  std::array<std::array<double, 3>, 3> eval(double x1, double x2, double x3) const;
  /// Numerator matrix with x1 = 0 substituted (all entries must vanish on the
  /// patch when the theorem applies).
  bool numerator_vanishes_on_patch() const;
};

mat_field3 x1_field(const poly3q& u);

struct reduction_report {
  bool symbolic_ok = false;   // L' - 2R == diag(-Delta, Delta, Delta)
  bool field_ok = false;      // the x1-lift identity on random harmonic inputs
  int checked = 0;
  std::string counterexample;
};

/// Verifies L'[h] = 2R[h] and L'[x1 h] = 2D[h] + 2 x1 R[h] for harmonic h:
/// symbolically for the operator difference, and exactly on `count` random
/// harmonic polynomials of degree <= maxdeg in every lift slot.
reduction_report harmonic_reduction_check(unsigned seed = 0, int count = 20, int maxdeg = 5);

/// Exact harmonic projection: the Fischer component h of p = h + |x|^2 r.
poly3q harmonic_projection3(const poly3q& p);

poly3q random_poly3(std::mt19937_64& rng, int maxdeg);
poly3q random_harmonic3(std::mt19937_64& rng, int maxdeg);
poly3q random_biharmonic3(std::mt19937_64& rng, int maxdeg);

}  // namespace biflat
