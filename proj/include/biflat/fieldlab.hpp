#pragma once

#include <array>
#include <complex>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace biflat {

using cx = std::complex<double>;

struct stencil_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Real scalar field on a plane domain: a pure evaluation contract plus its
/// declared smoothness order and the finite set of points to stay away from.
/// Evaluation within 1e-6 of a singular point is refused.
struct scalar_field2 {
  std::function<double(double, double)> f;
  int smoothness = 6;
  std::vector<cx> singular;
  std::string name = "field";

  double operator()(double x, double y) const;
  double operator()(cx z) const { return (*this)(z.real(), z.imag()); }

  /// Distance from z to the declared singular set (infinity if empty).
  double singular_distance(cx z) const;
};

/// All partial derivatives d_x^a d_y^b u at a base point, a+b <= 4. Mixed
/// partials are stored once, indexed by (a, b), so their symmetry is exact.
struct jet2 {
  double x = 0, y = 0;
  int order = 0;
  std::array<double, 15> d{};  // index via jet_index(a, b)

  static int index(int a, int b);
  double partial(int a, int b) const;

  /// Wirtinger derivative dz^a dzbar^b via binomial expansion of
  /// ((dx - i dy)/2)^a ((dx + i dy)/2)^b.
  cx wirtinger(int a, int b) const;

  double laplacian() const { return partial(2, 0) + partial(0, 2); }
  double bilaplacian() const { return partial(4, 0) + 2 * partial(2, 2) + partial(0, 4); }
  double directional1(double nx, double ny) const;
  double directional2(double nx, double ny) const;
};

/// Central finite differences of 4th-order accuracy with one Richardson
/// extrapolation level (steps h and h/2). The stencil reaches 3*step from the
/// base point and must clear the singular set.
jet2 jet_at(const scalar_field2& u, double x, double y, int order, double step);

/// dz and dzbar of a first-order jet.
std::pair<cx, cx> wirtinger(const jet2& jet);

struct bilap_point {
  cx z;
  double value;
};

struct bilap_result {
  double max_abs = 0;
  std::vector<bilap_point> per_point;
};

/// Max |Delta^2 u| over a grid of points by 4th-order FD jets.
bilap_result bilaplacian_residual(const scalar_field2& u, std::span<const cx> grid, double step);

/// Boundary arc handed to flatness probes: parametrization on [0,1] plus the
/// inward unit normal at each parameter.
struct curve_arc {
  std::function<cx(double)> point;
  std::function<cx(double)> inward_normal;
  bool endpoints_excluded = true;
  std::string id = "arc";
};

struct decay_quantity {
  std::vector<double> values;  // sup over arc anchors, one entry per ladder t
  double exponent = 0;
  bool at_noise_floor = false;
  bool pass = false;
};

struct decay_report {
  std::vector<double> ladder;
  decay_quantity u, dnu, dn2u;
  std::string arc_id;
  int expected_order = 0;
  bool pass = false;

  std::string to_csv() const;
  nlohmann::json to_json() const;
};

struct flatness_options {
  std::vector<double> anchors = {0.1, 0.25, 0.4, 0.5, 0.6, 0.75, 0.9};  // arc parameters
  double fd_step = 1e-3;      // capped at t/4 so probe stencils stay inside
  double noise_floor = 1e-15;
  double margin = 0.2;        // exponent pass margin
};

/// Probe u, d_n u, d_n^2 u at arc(s) + t * inward_normal(s) over a geometric
/// ladder of t values (ratio 1/2, at least 6 rungs) and fit log-log decay
/// exponents. Pass thresholds: expected_order - margin - {0,1,2}.
decay_report flatness_decay(const scalar_field2& u, const curve_arc& arc,
                            std::span<const double> ladder, int expected_order,
                            const flatness_options& opt = {});

/// Convenience ladder t0, t0/2, ..., with n rungs.
std::vector<double> geometric_ladder(double t0, int n);

}  // namespace biflat
