#pragma once

#include <functional>
#include <map>
#include <random>
#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "biflat/fieldlab.hpp"
#include "biflat/rational.hpp"

namespace biflat {

/// Real bivariate polynomial with exact rational coefficients,
/// sum c_ab x^a y^b. Zero coefficients are never stored.
struct poly2q {
  std::map<std::pair<int, int>, rational> t;

  static poly2q monomial(int a, int b, rational c);
  void add(int a, int b, const rational& c);
  bool is_zero() const { return t.empty(); }
  int degree() const;

  friend poly2q operator+(const poly2q& p, const poly2q& q);
  friend poly2q operator-(const poly2q& p, const poly2q& q);
  friend poly2q operator*(const poly2q& p, const poly2q& q);
  friend bool operator==(const poly2q& p, const poly2q& q) { return p.t == q.t; }
  poly2q scaled(const rational& s) const;

  poly2q dx() const;
  poly2q dy() const;
  poly2q laplacian() const;

  double eval(double x, double y) const;
  scalar_field2 as_field(const std::string& name = "poly2") const;

  nlohmann::json to_json() const;
  static poly2q from_json(const nlohmann::json& j);
  std::string str() const;
};

struct not_nharmonic_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Almansi coefficient functions u_1..u_N, each exactly harmonic.
struct harmonic_stack {
  std::vector<poly2q> u;
};

/// Exact Almansi decomposition u = sum |z|^(2(j-1)) u_j of an N-harmonic
/// polynomial; unique, computed by the triangular read-off in the (z, zbar)
/// monomial basis. Throws not_nharmonic_error when Delta^N u != 0.
harmonic_stack almansi_decompose(const poly2q& u, int N);

poly2q almansi_reconstruct(const harmonic_stack& stack);

/// Exactly harmonic random polynomial: rational combination of
/// {1, Re z^k, Im z^k}, k <= maxdeg, coefficients in [-9, 9].
poly2q random_harmonic2(std::mt19937_64& rng, int maxdeg);

/// Re z^k and Im z^k as exact polynomials in (x, y).
poly2q re_zk(int k);
poly2q im_zk(int k);

// ---- numerical polyanalytic machinery ------------------------------------

/// Provider of Wirtinger derivatives dz^a dzbar^b U(z) of a complex field.
using wirtinger_provider = std::function<cx(cx z, int a, int b)>;

/// Wirtinger jets of a complex field by FD jets of its real and imaginary
/// parts (a + b limited by the jet order 4).
wirtinger_provider wirtinger_of_complex_field(std::function<cx(cx)> U, double step);

/// Wirtinger jets of U := dz^N u computed from a single order-4 jet of the
/// real field u, so dz^a dzbar^b U = dz^(a+N) dzbar^b u (a + b <= 4 - N).
wirtinger_provider wirtinger_of_dzN(const scalar_field2& u, int N, double step);

/// U(z) = dz^N u(z) via Wirtinger powers of the order-2N jet (N <= 2).
cx U_from_u(const scalar_field2& u, int N, cx z, double step = 1e-3);

struct split_result {
  int N = 0;
  std::vector<cx> probes;
  std::vector<std::vector<cx>> Uk;   // Uk[k-1][i] = U_k at probe i
  double max_dbar_residual = 0;      // |dzbar^N U| over probes (pre-check)
  double max_reconstruction = 0;     // |U - sum zbar^(k-1) U_k| over probes
};

/// Peel the polyanalytic stack U = U_1 + zbar U_2 + ... + zbar^(N-1) U_N at
/// the probe points, top coefficient first: U_N = dzbar^(N-1) U / (N-1)!.
/// Throws not_nharmonic_error when the dzbar^N residual exceeds resid_tol.
split_result polyanalytic_split(const wirtinger_provider& U, int N, std::span<const cx> probes,
                                double resid_tol = 1e-5);

struct root_check_report {
  double max_abs = 0;       // max over probes and derivative depth
  double scale = 0;         // max |psi_J| over probes
  double relative = 0;
  int top_index = 0;        // J, largest nontrivial coefficient index
  bool pass = false;
};

/// Checks that w = S(z) annihilates dw^(j-1) Psi(z, w) for j = 1..depth,
/// where Psi(z, w) = sum psi_k(z) w^(k-1) with psi_k = U_k from the split.
root_check_report psi_root_check(const split_result& stack, const std::function<cx(cx)>& schwarz_fn,
                                 int depth, double rel_tol = 1e-4);

}  // namespace biflat
