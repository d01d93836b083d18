#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "biflat/poly.hpp"

namespace biflat {

struct pole_eval_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Pole of a rational function inside the unit disk.
struct pole_record {
  cx location;
  int order = 1;
};

/// Rational function num/den with floating complex coefficients. Doubles as
/// the conformal map type (phi: D -> Omega) and as general rational data such
/// as the reflected Schwarz pullback, which has poles inside the disk.
struct rational_map {
  cpoly num;
  cpoly den{cx(1.0, 0.0)};

  rational_map() = default;
  rational_map(cpoly n, cpoly d) : num(std::move(n)), den(std::move(d)) {
    if (den.is_zero()) throw std::invalid_argument("rational_map: zero denominator");
  }
  explicit rational_map(cpoly n) : num(std::move(n)) {}

  cx operator()(cx z) const;
  rational_map derivative() const;

  /// phi* : conjugate every coefficient, so phi*(w) = conj(phi(conj(w))).
  rational_map reflect() const { return {num.conj_coeffs(), den.conj_coeffs()}; }

  bool is_polynomial() const { return den.degree() == 0; }

  nlohmann::json to_json() const;
  static rational_map from_json(const nlohmann::json& j);
};

/// Cancel matching numerator/denominator roots (tolerance `tol`) and
/// normalize the leading denominator coefficient to 1.
rational_map reduce(rational_map f, double tol = 1e-10);

rational_map rmul(const rational_map& a, const rational_map& b);
rational_map rdiv(const rational_map& a, const rational_map& b);

/// The rational function zeta -> f*(1/zeta) in reduced form. For a conformal
/// map this is the Schwarz function of the image boundary pulled back to the
/// zeta-plane: S∘phi(zeta) = conj(phi(1/conj(zeta))) = phi*(1/zeta).
rational_map schwarz_pullback(const rational_map& f);

/// Reflection coefficient c(zeta) = phi*(1/zeta)/phi(zeta); its disk poles
/// drive the vanishing constraints of the arc-flat construction.
rational_map reflection_coefficient(const rational_map& phi);

/// Denominator roots with |root| < 1, clustered into multiplicities and
/// sorted by modulus then argument.
std::vector<pole_record> poles_in_disk(const rational_map& f, double cluster_tol = 1e-10);

struct conformal_report {
  bool ok = false;
  int winding = 0;               // argument-principle count of phi' zeros in the closed disk
  double min_boundary_gap = 0;   // smallest pairwise distance of boundary samples
  bool injective = false;
  std::string reason;
};

/// Checks that phi' has no zero on the closed unit disk (argument principle
/// on |zeta| = 1+eps) and that phi is injective on `samples` boundary points.
conformal_report conformal_check(const rational_map& phi, int samples = 256);

/// Throwing validation of the conformal-map contract: reduced, pole-free on
/// the closed disk, phi(0) = 0, and conformal_check passes.
void validate_conformal(const rational_map& phi, int samples = 256);

}  // namespace biflat
