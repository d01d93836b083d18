#include "biflat/schwarz.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <numbers>

#include "biflat/gauss.hpp"

namespace biflat {

namespace {

// sqrt(z-c)*sqrt(z+c) with principal branches: holomorphic off the focal
// segment [-c, c], asymptotic to z at infinity
cx focal_sqrt(cx z, double c) { return std::sqrt(z - c) * std::sqrt(z + c); }

cx ellipse_S(const ellipse_spec& spec, cx z, int sheet) {
  // rationalized form of ((a^2+b^2) z - 2ab s sqrt(z^2-c^2))/(a^2-b^2):
  // stays finite as a -> b and degenerates to a^2/z on the circle
  double a = spec.a, b = spec.b, c = spec.focal();
  cx num = c * c * z * z + 4.0 * a * a * b * b;
  cx den = (a * a + b * b) * z + 2.0 * a * b * double(sheet) * focal_sqrt(z, c);
  return num / den;
}

// construction-time gate: the closed form must reproduce conj(z) on the
// boundary before it is trusted (the formula is derived, not tabulated)
void gate_boundary_oracle(const ellipse_spec& spec) {
  static thread_local double checked_a = -1, checked_b = -1;
  if (checked_a == spec.a && checked_b == spec.b) return;
  for (int k = 0; k < 256; ++k) {
    double th = 2.0 * std::numbers::pi * k / 256;
    cx z = spec.boundary(th);
    cx s = spec.is_circle() ? spec.a * spec.a / z : ellipse_S(spec, z, +1);
    if (std::abs(s - std::conj(z)) >= 1e-10)
      throw std::logic_error("schwarz_ellipse: boundary oracle rejected the closed form");
  }
  checked_a = spec.a;
  checked_b = spec.b;
}

}  // namespace

ellipse_spec::ellipse_spec(double a_, double b_) : a(a_), b(b_) {
  if (!(a >= b && b > 0)) throw std::invalid_argument("ellipse_spec: need a >= b > 0");
}

schwarz_value schwarz_ellipse(const ellipse_spec& spec, cx z, int sheet) {
  gate_boundary_oracle(spec);
  if (spec.is_circle()) {
    if (std::abs(z) < 1e-12) throw branch_point_error("schwarz_ellipse: pole of a^2/z at 0");
    return {z, spec.a * spec.a / z, sheet};
  }
  double c = spec.focal();
  if (std::abs(z - c) < 1e-9 || std::abs(z + c) < 1e-9)
    throw branch_point_error("schwarz_ellipse: z is a focus (branch point)");
  return {z, ellipse_S(spec, z, sheet), sheet};
}

double monodromy_probe(const ellipse_spec& spec, cx loop_center, double loop_radius, int steps) {
  if (steps < 8) throw std::invalid_argument("monodromy_probe: too few steps");
  double c = spec.focal();
  for (cx focus : {cx(c, 0), cx(-c, 0)}) {
    double d = std::abs(std::abs(loop_center - focus) - loop_radius);
    if (d <= 1e-3)
      throw branch_point_error("monodromy_probe: loop passes within 1e-3 of a focus");
  }
  if (spec.is_circle()) {
    // single-valued S = a^2/z: continuation returns exactly; just guard the pole
    if (std::abs(std::abs(loop_center) - loop_radius) <= 1e-3)
      throw branch_point_error("monodromy_probe: loop passes within 1e-3 of the pole at 0");
    return 0.0;
  }

  auto point = [&](int k) {
    double th = 2.0 * std::numbers::pi * k / steps;
    return loop_center + std::polar(loop_radius, th);
  };
  cx start = focal_sqrt(point(0), c);
  cx cur = start;
  for (int k = 1; k <= steps; ++k) {
    cx z = point(k);
    cx cand = focal_sqrt(z, c);
    cx pick = (std::abs(cand - cur) <= std::abs(-cand - cur)) ? cand : -cand;
    double scale = std::max({std::abs(cur), std::abs(pick), 1e-6});
    if (std::abs(pick - cur) > 0.5 * scale)
      throw std::runtime_error("monodromy_probe: continuation step too coarse");
    cur = pick;
  }
  double a = spec.a, b = spec.b;
  cx z0 = point(0);
  cx num = c * c * z0 * z0 + 4.0 * a * a * b * b;
  cx s_start = num / ((a * a + b * b) * z0 + 2.0 * a * b * start);
  cx s_end = num / ((a * a + b * b) * z0 + 2.0 * a * b * cur);
  return std::abs(s_end - s_start);
}

double quadrature_data::act(const poly2q& h) const {
  poly2q hx = h.dx();
  poly2q hy = h.dy();
  double acc = 0;
  for (const quad_node& n : nodes) {
    acc += n.wh * h.eval(n.z.real(), n.z.imag());
    acc += n.wx * hx.eval(n.z.real(), n.z.imag());
    acc += n.wy * hy.eval(n.z.real(), n.z.imag());
  }
  return acc;
}

double pushforward_area_integral(const rational_map& phi, const poly2q& h, int nr, int nt) {
  rational_map dphi = phi.derivative();
  auto integrand = [&](cx zeta) {
    cx w = phi(zeta);
    double jac = std::norm(dphi(zeta));
    return h.eval(w.real(), w.imag()) * jac;
  };
  return integrate_disk(integrand, nr, nt);
}

double quadrature_residual(const rational_map& phi, const quadrature_data& data,
                           const std::vector<poly2q>& harmonics, int nr, int nt) {
  auto rep = conformal_check(phi);
  if (!rep.ok) throw std::invalid_argument("quadrature_residual: map fails conformal_check");
  double worst = 0;
  for (const poly2q& h : harmonics) {
    if (!h.laplacian().is_zero())
      throw std::invalid_argument("quadrature_residual: test function is not harmonic");
    double full = pushforward_area_integral(phi, h, nr, nt);
    double half = pushforward_area_integral(phi, h, nr / 2, nt);
    if (std::abs(full - half) > 1e-6)
      throw resolution_error("quadrature_residual: radial resolutions disagree beyond 1e-6");
    worst = std::max(worst, std::abs(full - data.act(h)));
  }
  return worst;
}

nlohmann::json meromorphy_info::to_json() const {
  nlohmann::json poles = nlohmann::json::array();
  for (std::size_t i = 0; i < pullback_poles.size(); ++i) {
    poles.push_back({{"zeta", {pullback_poles[i].location.real(), pullback_poles[i].location.imag()}},
                     {"order", pullback_poles[i].order},
                     {"z", {pushforward_poles[i].real(), pushforward_poles[i].imag()}}});
  }
  return {{"kind", kind}, {"poles", poles}, {"mismatch", mismatch}};
}

meromorphy_info meromorphy_report(const rational_map& phi) {
  auto rep = conformal_check(phi);
  if (!rep.ok) throw std::invalid_argument("meromorphy_report: map fails conformal_check");
  meromorphy_info info;
  info.kind = "meromorphic";
  info.pullback_poles = poles_in_disk(schwarz_pullback(phi));
  for (const auto& p : info.pullback_poles) info.pushforward_poles.push_back(phi(p.location));
  return info;
}

meromorphy_info meromorphy_report(const ellipse_spec& spec) {
  meromorphy_info info;
  if (spec.is_circle()) {
    info.kind = "meromorphic";
    info.pullback_poles = {{cx(0, 0), 1}};
    info.pushforward_poles = {cx(0, 0)};
    info.mismatch = monodromy_probe(spec, cx(0.45, 0), 0.3, 720);
    return info;
  }
  double c = spec.focal();
  double radius = std::min(0.5, c / 2);
  info.mismatch = monodromy_probe(spec, cx(c, 0), radius, 720);
  info.kind = info.mismatch > 1e-3 ? "branched" : "meromorphic";
  return info;
}

}  // namespace biflat
