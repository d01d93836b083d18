#pragma once

#include <stdexcept>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "biflat/almansi2d.hpp"
#include "biflat/ratmap.hpp"

namespace biflat {

struct branch_point_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Axis-aligned centered ellipse x^2/a^2 + y^2/b^2 = 1 with a >= b > 0.
struct ellipse_spec {
  double a = 1;
  double b = 1;

  ellipse_spec(double a_, double b_);
  double focal() const { return std::sqrt(a * a - b * b); }
  bool is_circle() const { return a == b; }
  cx boundary(double theta) const { return {a * std::cos(theta), b * std::sin(theta)}; }
};

struct schwarz_value {
  cx z;
  cx value;
  int sheet = +1;
};

/// Schwarz function of the ellipse:
///   S(z) = ((a^2+b^2) z - 2ab * sheet * sqrt(z-c) sqrt(z+c)) / (a^2-b^2)
/// with principal square roots (branch cut on the focal segment [-c, c]);
/// S(z) = conj(z) on the boundary for sheet +1. For a circle, S(z) = a^2/z.
/// The closed form is gated by a construction-time boundary oracle.
schwarz_value schwarz_ellipse(const ellipse_spec& spec, cx z, int sheet = +1);

/// Continue S around the circle loop center + radius*e^{i theta} in `steps`
/// increments, picking the square-root sheet by continuity; returns
/// |S_end - S_start| at the base point. Nonzero mismatch certifies that S
/// does not extend meromorphically (a branch point is enclosed).
double monodromy_probe(const ellipse_spec& spec, cx loop_center, double loop_radius, int steps);

/// One quadrature node: weight wh on h plus real weights (wx, wy) on the
/// first-order derivative functionals h_x, h_y at the node.
struct quad_node {
  cx z;
  double wh = 0;
  double wx = 0;
  double wy = 0;
};

struct quadrature_data {
  std::vector<quad_node> nodes;
  double act(const poly2q& h) const;
};

struct resolution_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Max over the test functions of |int_Omega h dA - <h, data>| where the
/// area integral is pulled back through phi and evaluated by tensor polar
/// Gauss-Legendre quadrature (nr x nt nodes). Throws resolution_error when
/// nr and nr/2 radial resolutions disagree by more than 1e-6.
double quadrature_residual(const rational_map& phi, const quadrature_data& data,
                           const std::vector<poly2q>& harmonics, int nr = 256, int nt = 512);

/// Area integral of h over phi(D) alone (the fit/verify oracle).
double pushforward_area_integral(const rational_map& phi, const poly2q& h, int nr = 256,
                                 int nt = 512);

struct meromorphy_info {
  std::string kind;                    // "meromorphic" | "branched"
  std::vector<pole_record> pullback_poles;
  std::vector<cx> pushforward_poles;   // phi(zeta_p)
  double mismatch = 0;                 // monodromy mismatch (ellipse route)

  nlohmann::json to_json() const;
};

/// Rational-map route: the Schwarz pullback's disk poles certify the
/// meromorphic extension of S to Omega.
meromorphy_info meromorphy_report(const rational_map& phi);

/// Ellipse route: monodromy probe around a focus decides branched vs not.
meromorphy_info meromorphy_report(const ellipse_spec& spec);

}  // namespace biflat
