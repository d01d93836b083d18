#include "biflat/arcflat.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "biflat/gauss.hpp"

namespace biflat {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

cx herglotz_quotient(cx eta, cx xi) { return (1.0 + std::conj(xi) * eta) / (1.0 - std::conj(xi) * eta); }

cseries phi_taylor(const rational_map& phi, int terms) {
  cseries num{std::vector<cx>(std::size_t(terms))}, den{std::vector<cx>(std::size_t(terms))};
  for (int i = 0; i < terms; ++i) {
    num.c[i] = phi.num[std::size_t(i)];
    den.c[i] = phi.den[std::size_t(i)];
  }
  return cseries::div(num, den, terms);
}

}  // namespace

arc_spec::arc_spec(double t0, double t1) : theta0(t0), theta1(t1) {
  if (!(theta1 - theta0 > 0 && theta1 - theta0 < kTwoPi))
    throw std::invalid_argument("arc_spec: need 0 < theta1 - theta0 < 2pi");
}

std::pair<double, double> arc_spec::complement() const { return {theta1, theta0 + kTwoPi}; }

double atomic_measure::weight_scale() const {
  double s = 0;
  for (double w : weights) s += w * w;
  return std::sqrt(s);
}

atomic_measure atomic_measure::scaled(double s) const {
  atomic_measure m = *this;
  for (double& w : m.weights) w *= s;
  return m;
}

int constraint_set::complex_rows() const {
  int rows = 0;
  for (const auto& it : items) {
    rows += it.vanish_order;
    if (std::abs(it.zeta) < 1e-12) rows += 1;  // the V2(0) = 0 normalization row
  }
  return rows;
}

constraint_set pole_constraints(const rational_map& phi) {
  if (std::abs(phi(cx(0, 0))) > 1e-12)
    throw std::invalid_argument("pole_constraints: map must be normalized with phi(0) = 0");
  validate_conformal(phi);
  constraint_set cs;
  for (const pole_record& p : poles_in_disk(reflection_coefficient(phi))) {
    bool at_origin = std::abs(p.location) < 1e-10;
    cs.items.push_back({p.location, p.order, at_origin ? p.order - 1 : p.order + 1});
  }
  return cs;
}

cx herglotz_F(const rational_map& phi, cx zeta, cx xi, double tol) {
  if (std::abs(std::abs(xi) - 1.0) > 1e-12)
    throw std::invalid_argument("herglotz_F: xi must have unit modulus");
  if (std::abs(zeta) < 1e-4) return 1.0 + std::conj(xi) * zeta;
  // segment [0, zeta] distance to the Herglotz singularity 1/conj(xi) = xi
  cx s = xi;
  double t = std::clamp((s.real() * zeta.real() + s.imag() * zeta.imag()) / std::norm(zeta), 0.0, 1.0);
  if (std::abs(s - t * zeta) < 1e-6)
    throw std::invalid_argument("herglotz_F: integration path passes through the kernel pole");
  rational_map dphi = phi.derivative();
  auto f = [&](cx eta) { return herglotz_quotient(eta, xi) * dphi(eta); };
  return integrate_segment_adaptive(f, cx(0, 0), zeta, tol) / phi(zeta);
}

herglotz_kernel::herglotz_kernel(const rational_map& phi, cx xi, int series_terms)
    : phi_(phi), dphi_(phi.derivative()), ddphi_(dphi_.derivative()), xi_(xi) {
  const int M = series_terms;
  cseries pt = phi_taylor(phi, M + 2);
  if (std::abs(pt[0]) > 1e-12)
    throw std::invalid_argument("herglotz_kernel: phi(0) must vanish");
  cseries K{std::vector<cx>(std::size_t(M + 2))};
  K.c[0] = 1.0;
  cx p = 1.0;
  for (int m = 1; m < M + 2; ++m) {
    p *= std::conj(xi);
    K.c[m] = 2.0 * p;
  }
  cseries integrand = cseries::mul(K, pt.derivative(), M + 2);
  cseries G = integrand.integral();
  // F = (G/zeta) / (phi/zeta); both numerator and denominator are regular at 0
  series_ = cseries::div(G.shift_down(1), pt.shift_down(1), M);
  der1_ = series_.derivative();
  der2_ = der1_.derivative();
}

cx herglotz_kernel::F(cx zeta) const {
  if (std::abs(zeta) <= series_radius_) return series_.eval(zeta);
  auto f = [&](cx eta) { return herglotz_quotient(eta, xi_) * dphi_(eta); };
  return integrate_segment(f, cx(0, 0), zeta, 40, 3) / phi_(zeta);
}

cx herglotz_kernel::dF(cx zeta) const {
  if (std::abs(zeta) <= series_radius_) return der1_.eval(zeta);
  return dphi_(zeta) / phi_(zeta) * (herglotz_quotient(zeta, xi_) - F(zeta));
}

cx herglotz_kernel::ddF(cx zeta) const {
  if (std::abs(zeta) <= series_radius_) return der2_.eval(zeta);
  cx r = dphi_(zeta) / phi_(zeta);
  cx Kv = herglotz_quotient(zeta, xi_);
  cx Kp = 2.0 * std::conj(xi_) / ((1.0 - std::conj(xi_) * zeta) * (1.0 - std::conj(xi_) * zeta));
  cx Fv = F(zeta);
  cx Fp = r * (Kv - Fv);
  return (ddphi_(zeta) / phi_(zeta) - r * r) * (Kv - Fv) + r * (Kp - Fp);
}

namespace {

std::vector<cx> place_atoms(const arc_spec& arc, int count, double margin) {
  auto [lo, hi] = arc.complement();
  lo += margin;
  hi -= margin;
  if (hi <= lo) throw std::invalid_argument("place_atoms: complementary arc too short for margin");
  std::vector<cx> atoms(count);
  for (int k = 0; k < count; ++k)
    atoms[k] = std::polar(1.0, lo + (hi - lo) * (count == 1 ? 0.5 : double(k) / (count - 1)));
  return atoms;
}

/// j-th derivative of F at an interior point by a small Cauchy circle.
cx cauchy_derivative(const herglotz_kernel& hk, cx center, int j, double radius) {
  const int M = 64;
  cx acc = 0;
  for (int k = 0; k < M; ++k) {
    cx rot = std::polar(1.0, kTwoPi * k / M);
    acc += hk.F(center + radius * rot) / std::pow(rot, j);
  }
  double jf = 1;
  for (int i = 2; i <= j; ++i) jf *= i;
  return acc / double(M) / std::pow(radius, j) * jf;
}

Eigen::MatrixXd constraint_matrix(const std::vector<herglotz_kernel>& kernels,
                                  const constraint_set& constraints) {
  const int K = static_cast<int>(kernels.size());
  std::vector<std::pair<cx, int>> rows_spec;  // (zeta_p, derivative order j)
  for (const auto& it : constraints.items) {
    int j0 = std::abs(it.zeta) < 1e-12 ? 0 : 1;
    for (int j = j0; j <= it.vanish_order; ++j) rows_spec.emplace_back(it.zeta, j);
  }
  Eigen::MatrixXd A(2 * rows_spec.size(), K);
  for (std::size_t r = 0; r < rows_spec.size(); ++r) {
    auto [zp, j] = rows_spec[r];
    for (int k = 0; k < K; ++k) {
      cx val;
      if (std::abs(zp) < 1e-12) {
        double jf = 1;
        for (int i = 2; i <= j; ++i) jf *= i;
        val = kernels[k].taylor(j) * jf;
      } else {
        val = cauchy_derivative(kernels[k], zp, j, 0.05);
      }
      A(2 * r, k) = val.real();
      A(2 * r + 1, k) = val.imag();
    }
  }
  return A;
}

}  // namespace

atomic_measure solve_measure(const rational_map& phi, const arc_spec& arc,
                             const constraint_set& constraints, int atom_count) {
  int s_total = 0;
  for (const auto& it : constraints.items) s_total += it.vanish_order;
  if (atom_count < 2 * s_total + 3)
    throw std::invalid_argument("solve_measure: atom_count must be at least 2*sum(s_p) + 3");

  std::vector<cx> atoms = place_atoms(arc, atom_count, 0.05);
  std::vector<herglotz_kernel> kernels;
  kernels.reserve(atoms.size());
  for (cx xi : atoms) kernels.emplace_back(phi, xi);

  Eigen::MatrixXd A = constraint_matrix(kernels, constraints);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > 1e-8) ++rank;
  if (rank >= atom_count)
    throw infeasible_measure_error("solve_measure: constraint matrix has no numerical nullspace");

  const std::vector<cx> test_points = {cx(0.3, 0.0), cx(0.0, 0.5), cx(-0.2, 0.4), cx(0.6, -0.3),
                                       cx(-0.5, -0.5)};
  for (int col = atom_count - 1; col >= rank; --col) {
    Eigen::VectorXd c = svd.matrixV().col(col);
    c.normalize();
    // deterministic sign: first significant entry positive
    for (int i = 0; i < c.size(); ++i) {
      if (std::abs(c(i)) > 1e-12) {
        if (c(i) < 0) c = -c;
        break;
      }
    }
    double v2p_max = 0;
    for (cx zt : test_points) {
      cx acc = 0;
      for (int k = 0; k < atom_count; ++k) acc += c(k) * kernels[k].dF(zt);
      v2p_max = std::max(v2p_max, std::abs(acc));
    }
    if (v2p_max > 1e-12) {
      atomic_measure nu;
      nu.atoms = atoms;
      nu.weights.assign(c.data(), c.data() + c.size());
      return nu;
    }
  }
  throw infeasible_measure_error("solve_measure: every nullspace direction gave V2' = 0");
}

theorem2_builder::theorem2_builder(rational_map phi, atomic_measure nu)
    : phi_(std::move(phi)),
      dphi_(phi_.derivative()),
      ddphi_(dphi_.derivative()),
      cmap_(reflection_coefficient(phi_)),
      nu_(std::move(nu)) {
  if (nu_.atoms.size() != nu_.weights.size())
    throw std::invalid_argument("theorem2_builder: atoms/weights size mismatch");
  kernels_.reserve(nu_.atoms.size());
  for (cx xi : nu_.atoms) kernels_.emplace_back(phi_, xi);

  // origin pole order of c: exact trailing zeros of the reduced denominator
  double dmax = 0;
  for (cx v : cmap_.den.c) dmax = std::max(dmax, std::abs(v));
  int m0 = 0;
  while (m0 < cmap_.den.degree() && std::abs(cmap_.den[std::size_t(m0)]) <= 1e-12 * dmax) ++m0;
  origin_pole_order_ = m0;

  // Maclaurin series of the suppressed integrand g = c * G'
  const int M = 200;
  cseries v2p{std::vector<cx>(std::size_t(M))};
  for (std::size_t k = 0; k < kernels_.size(); ++k) {
    cseries fk = kernels_[k].series().derivative();
    for (int m = 0; m < M; ++m) v2p.c[m] += nu_.weights[k] * fk[m];
  }
  cseries v2pp = v2p.derivative();
  cseries pt = phi_taylor(phi_, M);
  cseries ptd = pt.derivative();
  cseries ptdd = ptd.derivative();
  cseries phi2 = cseries::mul(pt, pt, M);
  cseries gp = cseries::mul(pt, v2p, M);
  for (auto& c : gp.c) c *= 2.0;
  gp = gp + cseries::div(cseries::mul(phi2, v2pp, M), ptd, M);
  gp = gp - cseries::div(cseries::mul(cseries::mul(phi2, ptdd, M), v2p, M),
                         cseries::mul(ptd, ptd, M), M);
  cseries nc{std::vector<cx>(std::size_t(M))};
  for (int i = 0; i < M; ++i) nc.c[i] = cmap_.num[std::size_t(i)];
  cseries ec{std::vector<cx>(std::size_t(M))};
  for (int i = 0; i + m0 <= cmap_.den.degree() && i < M; ++i)
    ec.c[i] = cmap_.den[std::size_t(i + m0)];
  cseries full = cseries::div(cseries::mul(nc, gp, M), ec, M);
  std::vector<cx> dropped;
  g_series_ = full.shift_down(std::size_t(m0), &dropped);
  for (cx d : dropped) dropped_norm_ = std::max(dropped_norm_, std::abs(d));
}

cx theorem2_builder::V2(cx zeta) const {
  cx acc = 0;
  for (std::size_t k = 0; k < kernels_.size(); ++k) acc += nu_.weights[k] * kernels_[k].F(zeta);
  return acc;
}

cx theorem2_builder::V2p(cx zeta) const {
  cx acc = 0;
  for (std::size_t k = 0; k < kernels_.size(); ++k) acc += nu_.weights[k] * kernels_[k].dF(zeta);
  return acc;
}

cx theorem2_builder::V2pp(cx zeta) const {
  cx acc = 0;
  for (std::size_t k = 0; k < kernels_.size(); ++k) acc += nu_.weights[k] * kernels_[k].ddF(zeta);
  return acc;
}

cx theorem2_builder::poisson_sum(cx zeta) const {
  cx acc = 0;
  for (std::size_t k = 0; k < kernels_.size(); ++k)
    acc += nu_.weights[k] * herglotz_quotient(zeta, kernels_[k].atom());
  return acc;
}

cx theorem2_builder::g_direct(cx eta) const {
  cx ph = phi_(eta), pd = dphi_(eta), pdd = ddphi_(eta);
  cx gp = 2.0 * ph * V2p(eta) + ph * ph / pd * V2pp(eta) - ph * ph * pdd / (pd * pd) * V2p(eta);
  cx val = cmap_(eta) * gp;
  double scale = std::max(1.0, nu_.weight_scale());
  if (std::abs(val) > 1e6 * scale)
    throw pole_suppression_error("theorem2_builder: |c*G'| blow-up near a constraint point");
  return val;
}

cx theorem2_builder::g(cx eta) const {
  if (std::abs(eta) <= g_radius_) return g_series_.eval(eta);
  return g_direct(eta);
}

cx theorem2_builder::V1(cx zeta) const {
  cx phi_end = phi_(zeta);
  auto f = [&](cx eta) { return g(eta) * (phi_end - phi_(eta)); };
  return -integrate_segment(f, cx(0, 0), zeta, 40, 3);
}

cx theorem2_builder::V1p(cx zeta) const {
  auto f = [&](cx eta) { return g(eta); };
  return -dphi_(zeta) * integrate_segment(f, cx(0, 0), zeta, 40, 3);
}

cx theorem2_builder::V1_along(const std::vector<cx>& waypoints) const {
  if (waypoints.size() < 2) throw std::invalid_argument("V1_along: need at least two waypoints");
  cx phi_end = phi_(waypoints.back());
  auto f = [&](cx eta) { return g(eta) * (phi_end - phi_(eta)); };
  cx acc = 0;
  for (std::size_t i = 0; i + 1 < waypoints.size(); ++i)
    acc += integrate_segment(f, waypoints[i], waypoints[i + 1], 40, 3);
  return -acc;
}

double theorem2_builder::v(cx zeta) const {
  return V1(zeta).real() + std::norm(phi_(zeta)) * V2(zeta).real();
}

std::pair<cx, cx> build_V2(const theorem2_builder& b, cx zeta) { return {b.V2p(zeta), b.V2(zeta)}; }
std::pair<cx, cx> build_V1(const theorem2_builder& b, cx zeta) { return {b.V1p(zeta), b.V1(zeta)}; }

theorem2_solution::theorem2_solution(rational_map phi, arc_spec arc, atomic_measure nu,
                                     assemble_options opt)
    : phi_(std::move(phi)), dphi_(phi_.derivative()), arc_(arc), opt_(opt) {
  if (nu.weight_scale() == 0)
    throw assembly_error("assemble: the zero measure produces the trivial solution");
  builder_ = std::make_shared<theorem2_builder>(phi_, std::move(nu));
  if (builder_->dropped_principal_norm() >
      1e-6 * std::max(1.0, builder_->measure().weight_scale()))
    throw pole_suppression_error(
        "assemble: dropped principal-part coefficients of c*G' are not negligible; "
        "the measure does not satisfy the vanishing constraints");

  // nontriviality of V2'
  double v2p_max = 0;
  for (cx zt : {cx(0.3, 0.0), cx(0.0, 0.5), cx(-0.2, 0.4), cx(0.6, -0.3), cx(-0.5, -0.5)})
    v2p_max = std::max(v2p_max, std::abs(builder_->V2p(zt)));
  if (v2p_max < 1e-12) throw assembly_error("assemble: V2' vanishes identically (trivial u)");

  // forward grid for Newton seeding
  const int n = opt_.inverse_grid;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      cx zeta(-0.995 + 1.99 * i / (n - 1), -0.995 + 1.99 * j / (n - 1));
      if (std::abs(zeta) > 0.999) continue;
      seed_zeta_.push_back(zeta);
      seed_z_.push_back(phi_(zeta));
    }
  }

  // affine correction: one-sided ladder at the arc midpoint, Richardson in t
  cx zeta_mid = std::polar(1.0, arc_.midpoint());
  z_mid_ = phi_(zeta_mid);
  cx normal = -dphi_(zeta_mid) * zeta_mid;
  normal /= std::abs(normal);
  auto value_and_grad = [&](cx p) {
    const double h = 1e-5;
    double val = utilde(p);
    double gx = (utilde(p + h) - utilde(p - h)) / (2 * h);
    double gy = (utilde(p + cx(0, h)) - utilde(p - cx(0, h))) / (2 * h);
    return std::array<double, 3>{val, gx, gy};
  };
  std::array<std::array<double, 3>, 3> ladder;
  const double ts[3] = {1e-2, 5e-3, 2.5e-3};
  for (int i = 0; i < 3; ++i) ladder[i] = value_and_grad(z_mid_ + ts[i] * normal);
  auto richardson3 = [](double y0, double y1, double y2) {
    double a = 2 * y1 - y0;
    double b = 2 * y2 - y1;
    return (4 * b - a) / 3;
  };
  std::array<double, 3> lim;
  for (int c = 0; c < 3; ++c) lim[c] = richardson3(ladder[0][c], ladder[1][c], ladder[2][c]);
  A1_ = lim[1];
  A2_ = lim[2];
  A0_ = lim[0] - A1_ * z_mid_.real() - A2_ * z_mid_.imag();

  if (opt_.check_flatness) {
    auto ladder_t = geometric_ladder(opt_.flat_t0, opt_.flat_rungs);
    flatness_ = flatness_decay(as_field(), image_arc(), ladder_t, 3);
    if (!flatness_.pass) {
      throw assembly_error(
          "assemble: constructed solution failed order-3 flatness (exponents " +
          std::to_string(flatness_.u.exponent) + ", " + std::to_string(flatness_.dnu.exponent) +
          ", " + std::to_string(flatness_.dn2u.exponent) + ")");
    }
  }
}

cx theorem2_solution::inverse(cx z) const {
  cx best = 0;
  double bd = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < seed_z_.size(); ++i) {
    double d = std::abs(seed_z_[i] - z);
    if (d < bd) {
      bd = d;
      best = seed_zeta_[i];
    }
  }
  cx zeta = best;
  for (int it = 0; it < 80; ++it) {
    cx r = phi_(zeta) - z;
    if (std::abs(r) <= 1e-13 * (1.0 + std::abs(z))) return zeta;
    zeta -= r / dphi_(zeta);
  }
  if (std::abs(phi_(zeta) - z) <= 1e-10 * (1.0 + std::abs(z))) return zeta;
  throw inverse_map_error("theorem2_solution: Newton iteration for phi^{-1} did not converge");
}

double theorem2_solution::utilde(cx z) const { return builder_->v(inverse(z)); }

double theorem2_solution::u(cx z) const {
  return utilde(z) - (A0_ + A1_ * z.real() + A2_ * z.imag());
}

scalar_field2 theorem2_solution::as_field() const {
  auto self = *this;  // value copy: the field contract is pure and self-contained
  return scalar_field2{[self](double x, double y) { return self.u(cx(x, y)); }, 20, {},
                       "arcflat solution"};
}

curve_arc theorem2_solution::image_arc() const {
  double delta = opt_.arc_end_margin * arc_.length();
  double lo = arc_.theta0 + delta, hi = arc_.theta1 - delta;
  rational_map phi = phi_, dphi = dphi_;
  curve_arc arc;
  arc.id = "image of (" + std::to_string(arc_.theta0) + ", " + std::to_string(arc_.theta1) + ")";
  arc.point = [phi, lo, hi](double s) { return phi(std::polar(1.0, lo + (hi - lo) * s)); };
  arc.inward_normal = [dphi, lo, hi](double s) {
    cx zeta = std::polar(1.0, lo + (hi - lo) * s);
    cx n = -dphi(zeta) * zeta;
    return n / std::abs(n);
  };
  return arc;
}

double theorem2_solution::weight_scale() const { return builder_->measure().weight_scale(); }

nlohmann::json theorem2_solution::diagnostics() const {
  nlohmann::json atoms = nlohmann::json::array();
  for (cx a : builder_->measure().atoms) atoms.push_back({a.real(), a.imag()});
  return {{"constraint_residual", constraint_residual_},
          {"nullspace_dim", nullspace_dim_},
          {"weights", builder_->measure().weights},
          {"atoms", atoms},
          {"affine", {A0_, A1_, A2_}},
          {"flatness", flatness_.to_json()}};
}

theorem2_solution assemble(const rational_map& phi, const arc_spec& arc, const atomic_measure& nu,
                           const assemble_options& opt) {
  theorem2_solution sol(phi, arc, nu, opt);
  // recompute the constraint residual and nullspace dimension for diagnostics
  constraint_set cs = pole_constraints(phi);
  std::vector<herglotz_kernel> kernels;
  for (cx xi : nu.atoms) kernels.emplace_back(phi, xi);
  Eigen::MatrixXd A = constraint_matrix(kernels, cs);
  Eigen::VectorXd w(nu.weights.size());
  for (std::size_t i = 0; i < nu.weights.size(); ++i) w(i) = nu.weights[i];
  sol.constraint_residual_ = (A * w).lpNorm<Eigen::Infinity>();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > 1e-8) ++rank;
  sol.nullspace_dim_ = static_cast<int>(nu.atoms.size()) - rank;
  return sol;
}

theorem2_solution build_arc_flat(const rational_map& phi, const arc_spec& arc, int atom_count,
                                 const assemble_options& opt) {
  constraint_set cs = pole_constraints(phi);
  int s_total = 0;
  for (const auto& it : cs.items) s_total += it.vanish_order;
  if (atom_count == 0) atom_count = std::max(2 * s_total + 4, 8);
  atomic_measure nu = solve_measure(phi, arc, cs, atom_count);
  return assemble(phi, arc, nu, opt);
}

arcflat_verification verify(const theorem2_solution& sol) {
  arcflat_verification ver;
  ver.constraint_residual = sol.constraint_residual();

  scalar_field2 field = sol.as_field();
  std::vector<cx> grid;
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) {
      cx zeta(-0.55 + 1.1 * i / 7.0, -0.55 + 1.1 * j / 7.0);
      if (std::abs(zeta) <= 0.6) grid.push_back(sol.map()(zeta));
    }
  auto bilap = bilaplacian_residual(field, grid, 1e-2);
  ver.max_bilaplacian = bilap.max_abs;
  for (cx z : grid) ver.field_scale = std::max(ver.field_scale, std::abs(field(z)));

  for (cx z : grid) {
    jet2 jet = jet_at(field, z.real(), z.imag(), 2, 1e-3);
    ver.max_laplacian = std::max(ver.max_laplacian, std::abs(jet.laplacian()));
  }

  cx target(0.5, 0.3);
  cx direct = sol.builder().V1(target);
  cx two_leg = sol.builder().V1_along({cx(0, 0), cx(0.5, 0.0), target});
  ver.path_difference = std::abs(direct - two_leg);

  // Poisson superposition: small on the inner side of Itilde, peaked on the
  // complementary (atom-carrying) side
  const arc_spec& arc = sol.arc();
  double inner = 0, peak = 0;
  double margin = 0.2;
  for (int k = 0; k <= 16; ++k) {
    double th = arc.theta0 + margin + (arc.length() - 2 * margin) * k / 16.0;
    inner = std::max(inner,
                     std::abs(sol.builder().poisson_sum(std::polar(0.995, th)).real()));
  }
  auto [clo, chi] = arc.complement();
  for (int k = 0; k <= 32; ++k) {
    double th = clo + (chi - clo) * k / 32.0;
    peak = std::max(peak, std::abs(sol.builder().poisson_sum(std::polar(0.995, th)).real()));
  }
  ver.boundary_ratio = inner / std::max(peak, 1e-300);

  auto ladder = geometric_ladder(0.08, 6);
  ver.flatness = flatness_decay(field, sol.image_arc(), ladder, 3);

  double wscale = sol.weight_scale();
  ver.pass = ver.constraint_residual < 1e-10 && ver.flatness.pass &&
             ver.max_bilaplacian < 1e-3 * std::max(ver.field_scale, 1e-12) &&
             ver.max_laplacian > 1e-8 * wscale && ver.path_difference < 1e-9 &&
             ver.boundary_ratio < 0.05;
  return ver;
}

nlohmann::json arcflat_verification::to_json() const {
  return {{"constraint_residual", constraint_residual},
          {"max_bilaplacian", max_bilaplacian},
          {"field_scale", field_scale},
          {"max_laplacian", max_laplacian},
          {"path_difference", path_difference},
          {"boundary_ratio", boundary_ratio},
          {"flatness", flatness.to_json()},
          {"pass", pass}};
}

}  // namespace biflat
