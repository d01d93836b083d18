#pragma once

#include <memory>
#include <random>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "biflat/fieldlab.hpp"
#include "biflat/ratmap.hpp"
#include "biflat/series.hpp"

namespace biflat {

struct pole_suppression_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct infeasible_measure_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct inverse_map_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct assembly_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Open circular arc Itilde = {e^{i theta}: theta0 < theta < theta1}; the
/// complementary closed arc carries the measure.
struct arc_spec {
  double theta0 = 0;
  double theta1 = 0;

  arc_spec(double t0, double t1);
  double length() const { return theta1 - theta0; }
  double midpoint() const { return 0.5 * (theta0 + theta1); }
  /// Complementary closed arc as [theta1, theta0 + 2pi].
  std::pair<double, double> complement() const;
};

/// Finitely many unit-modulus atoms with real weights, supported on the
/// complementary arc with angular margin >= 0.05 from Itilde's closure.
struct atomic_measure {
  std::vector<cx> atoms;
  std::vector<double> weights;

  double weight_scale() const;  // euclidean norm of the weights
  atomic_measure scaled(double s) const;
};

struct pole_constraint {
  cx zeta;           // pole of c(zeta) = phi*(1/zeta)/phi(zeta) in D
  int pole_order;    // m_p
  int vanish_order;  // s_p: required zero order of V2' at zeta
};

struct constraint_set {
  std::vector<pole_constraint> items;
  /// Complex constraint count including the V2(0) = 0 normalization row.
  int complex_rows() const;
};

/// Required vanishing orders from the Laurent rule: s = m-1 at zeta = 0
/// (where phi has its simple zero), s = m+1 at interior poles away from 0.
/// Each order is re-certified after construction by the series audit in
/// theorem2_builder.
constraint_set pole_constraints(const rational_map& phi);

/// F(zeta, xi) = (1/phi(zeta)) int_0^zeta (1+conj(xi) eta)/(1-conj(xi) eta)
/// phi'(eta) deta, standalone adaptive evaluation (series value 1 + conj(xi)
/// zeta below |zeta| < 1e-4).
cx herglotz_F(const rational_map& phi, cx zeta, cx xi, double tol = 1e-12);

/// Cached per-atom Herglotz evaluator: Maclaurin series (valid to |zeta| ~
/// 0.85) plus fixed-panel direct quadrature beyond.
class herglotz_kernel {
 public:
  herglotz_kernel(const rational_map& phi, cx xi, int series_terms = 220);

  cx F(cx zeta) const;
  cx dF(cx zeta) const;
  cx ddF(cx zeta) const;
  cx taylor(int j) const { return series_[std::size_t(j)]; }  // j-th Maclaurin coefficient
  cx atom() const { return xi_; }
  const cseries& series() const { return series_; }

 private:
  rational_map phi_, dphi_, ddphi_;
  cx xi_;
  cseries series_, der1_, der2_;
  double series_radius_ = 0.85;
};

/// Equally spaced atoms on the complementary arc; weights from the smallest
/// singular directions of the real constraint matrix (rows: Re/Im of
/// sum_k c_k d^j F(zeta_p, xi_k), j = 0..s_0 at the origin pole and
/// j = 1..s_p elsewhere). Unit-norm weights, first significant entry > 0.
atomic_measure solve_measure(const rational_map& phi, const arc_spec& arc,
                             const constraint_set& constraints, int atom_count);

/// Built evaluation pipeline for one (map, measure) pair:
///   V2 = sum_k c_k F(., xi_k), V1' = -phi' int_0^zeta c G', G = phi^2 V2'/phi',
///   v = Re V1 + |phi|^2 Re V2.
class theorem2_builder {
 public:
  theorem2_builder(rational_map phi, atomic_measure nu);

  cx V2(cx zeta) const;
  cx V2p(cx zeta) const;
  cx V2pp(cx zeta) const;
  cx V1(cx zeta) const;   // single-integral form, path [0, zeta]
  cx V1p(cx zeta) const;
  double v(cx zeta) const;

  /// Suppressed integrand c(eta) G'(eta); Maclaurin series near the origin
  /// (the principal part, whose coefficients are the constraint residuals,
  /// is dropped and audited), direct evaluation elsewhere.
  cx g(cx eta) const;
  /// V1 along an explicit polyline (for path-independence checks).
  cx V1_along(const std::vector<cx>& waypoints) const;

  double dropped_principal_norm() const { return dropped_norm_; }
  const rational_map& map() const { return phi_; }
  const atomic_measure& measure() const { return nu_; }
  /// (phi V2)'/phi' = sum_k c_k (1 + conj(xi_k) zeta)/(1 - conj(xi_k) zeta);
  /// its real part is the Poisson superposition that vanishes along Itilde.
  cx poisson_sum(cx zeta) const;

 private:
  rational_map phi_, dphi_, ddphi_, cmap_;
  atomic_measure nu_;
  std::vector<herglotz_kernel> kernels_;
  cseries g_series_;
  double g_radius_ = 0.3;
  double dropped_norm_ = 0;
  int origin_pole_order_ = 0;

  cx g_direct(cx eta) const;
};

std::pair<cx, cx> build_V2(const theorem2_builder& b, cx zeta);  // (V2'(zeta), V2(zeta))
std::pair<cx, cx> build_V1(const theorem2_builder& b, cx zeta);  // (V1'(zeta), V1(zeta))

struct assemble_options {
  bool check_flatness = true;
  double flat_t0 = 0.08;
  int flat_rungs = 6;
  double arc_end_margin = 0.15;  // fraction of the arc kept away from each end
  int inverse_grid = 64;
};

/// The assembled arc-flat solution u(z) = v(phi^{-1}(z)) - A(z).
class theorem2_solution {
 public:
  theorem2_solution(rational_map phi, arc_spec arc, atomic_measure nu, assemble_options opt);

  double u(cx z) const;
  double utilde(cx z) const;
  cx inverse(cx z) const;  // Newton seeded from a forward grid
  scalar_field2 as_field() const;

  const theorem2_builder& builder() const { return *builder_; }
  const arc_spec& arc() const { return arc_; }
  const rational_map& map() const { return phi_; }

  /// Image arc of Itilde (shrunk by the end margin) with inward normals.
  curve_arc image_arc() const;

  double constraint_residual() const { return constraint_residual_; }
  int nullspace_dim() const { return nullspace_dim_; }
  double weight_scale() const;
  std::array<double, 3> affine() const { return {A0_, A1_, A2_}; }
  const decay_report& flatness() const { return flatness_; }

  nlohmann::json diagnostics() const;

 private:
  rational_map phi_, dphi_;
  arc_spec arc_;
  std::shared_ptr<theorem2_builder> builder_;
  assemble_options opt_;
  double A0_ = 0, A1_ = 0, A2_ = 0;
  cx z_mid_;
  double constraint_residual_ = 0;
  int nullspace_dim_ = 0;
  decay_report flatness_;
  std::vector<cx> seed_zeta_, seed_z_;

  friend theorem2_solution assemble(const rational_map&, const arc_spec&, const atomic_measure&,
                                    const assemble_options&);
};

/// Full Theorem-2 pipeline step: push the measure through V2/V1/v, invert the
/// map, subtract the affine correction fixed by one-sided extrapolation at
/// the arc midpoint, and (optionally) verify order-3 flatness. Throws
/// assembly_error for trivial measures or failed flatness.
theorem2_solution assemble(const rational_map& phi, const arc_spec& arc, const atomic_measure& nu,
                           const assemble_options& opt = {});

/// Convenience: constraints + measure + assemble with auto atom count.
theorem2_solution build_arc_flat(const rational_map& phi, const arc_spec& arc, int atom_count = 0,
                                 const assemble_options& opt = {});

struct arcflat_verification {
  double constraint_residual = 0;
  double max_bilaplacian = 0;       // FD residual on an interior grid
  double field_scale = 0;           // max |u| on the same grid
  double max_laplacian = 0;         // nontriviality witness
  double path_difference = 0;       // two-leg vs direct V1 path
  double boundary_ratio = 0;        // Poisson sum: inner-arc sup / atom-side peak
  decay_report flatness;
  bool pass = false;

  nlohmann::json to_json() const;
};

arcflat_verification verify(const theorem2_solution& sol);

}  // namespace biflat
