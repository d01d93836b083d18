#include "biflat/fieldlab.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <numeric>
#include <sstream>

namespace biflat {

namespace {

// 7-point central difference rows, 4th-order accurate, offsets -3..3
constexpr double kD0[7] = {0, 0, 0, 1, 0, 0, 0};
constexpr double kD1[7] = {0, 1.0 / 12, -8.0 / 12, 0, 8.0 / 12, -1.0 / 12, 0};
constexpr double kD2[7] = {0, -1.0 / 12, 16.0 / 12, -30.0 / 12, 16.0 / 12, -1.0 / 12, 0};
constexpr double kD3[7] = {1.0 / 8, -8.0 / 8, 13.0 / 8, 0, -13.0 / 8, 8.0 / 8, -1.0 / 8};
constexpr double kD4[7] = {-1.0 / 6, 12.0 / 6, -39.0 / 6, 56.0 / 6, -39.0 / 6, 12.0 / 6, -1.0 / 6};

const double* diff_row(int k) {
  switch (k) {
    case 0: return kD0;
    case 1: return kD1;
    case 2: return kD2;
    case 3: return kD3;
    case 4: return kD4;
    default: throw std::invalid_argument("diff_row: derivative order out of range");
  }
}

int stencil_reach(int order) { return order <= 2 ? 2 : 3; }

jet2 raw_jet(const scalar_field2& u, double x, double y, int order, double h) {
  const int reach = stencil_reach(order);
  double samples[7][7]{};
  for (int i = -reach; i <= reach; ++i)
    for (int j = -reach; j <= reach; ++j) samples[i + 3][j + 3] = u(x + i * h, y + j * h);
  jet2 jet;
  jet.x = x;
  jet.y = y;
  jet.order = order;
  for (int a = 0; a <= order; ++a) {
    for (int b = 0; a + b <= order; ++b) {
      const double* ra = diff_row(a);
      const double* rb = diff_row(b);
      double acc = 0.0;
      for (int i = 0; i < 7; ++i) {
        if (ra[i] == 0.0) continue;
        for (int j = 0; j < 7; ++j) {
          if (rb[j] == 0.0) continue;
          acc += ra[i] * rb[j] * samples[i][j];
        }
      }
      jet.d[jet2::index(a, b)] = acc / (std::pow(h, a) * std::pow(h, b));
    }
  }
  return jet;
}

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

double scalar_field2::operator()(double x, double y) const {
  for (cx s : singular) {
    if (std::abs(cx(x, y) - s) < 1e-6)
      throw stencil_error(name + ": evaluation within 1e-6 of singular point");
  }
  return f(x, y);
}

double scalar_field2::singular_distance(cx z) const {
  double d = std::numeric_limits<double>::infinity();
  for (cx s : singular) d = std::min(d, std::abs(z - s));
  return d;
}

int jet2::index(int a, int b) {
  // (a+b) grouped: order o block starts at o(o+1)/2, offset b
  int o = a + b;
  return o * (o + 1) / 2 + b;
}

double jet2::partial(int a, int b) const {
  if (a < 0 || b < 0 || a + b > order)
    throw std::out_of_range("jet2::partial: derivative beyond stored order");
  return d[index(a, b)];
}

cx jet2::wirtinger(int a, int b) const {
  // (1/2^(a+b)) sum_{p<=a, q<=b} C(a,p) C(b,q) (-i)^(a-p) (i)^(b-q) d_x^{p+q} d_y^{a+b-p-q}
  cx acc = 0.0;
  const cx mi(0.0, -1.0), pi(0.0, 1.0);
  for (int p = 0; p <= a; ++p) {
    for (int q = 0; q <= b; ++q) {
      cx coef = binom(a, p) * binom(b, q) * std::pow(mi, a - p) * std::pow(pi, b - q);
      acc += coef * partial(p + q, (a - p) + (b - q));
    }
  }
  return acc / std::pow(2.0, a + b);
}

double jet2::directional1(double nx, double ny) const {
  return nx * partial(1, 0) + ny * partial(0, 1);
}

double jet2::directional2(double nx, double ny) const {
  return nx * nx * partial(2, 0) + 2 * nx * ny * partial(1, 1) + ny * ny * partial(0, 2);
}

jet2 jet_at(const scalar_field2& u, double x, double y, int order, double step) {
  if (order < 0 || order > 4) throw std::invalid_argument("jet_at: order must be in 0..4");
  if (step <= 0) throw std::invalid_argument("jet_at: step must be positive");
  double reach = stencil_reach(order) * step * std::sqrt(2.0) + 1e-6;
  if (u.singular_distance(cx(x, y)) <= reach)
    throw stencil_error(u.name + ": FD stencil touches the singular set near the base point");
  jet2 a = raw_jet(u, x, y, order, step);
  jet2 b = raw_jet(u, x, y, order, step / 2);
  jet2 out = b;
  for (int k = 0; k < 15; ++k) out.d[k] = b.d[k] + (b.d[k] - a.d[k]) / 15.0;
  return out;
}

std::pair<cx, cx> wirtinger(const jet2& jet) {
  return {jet.wirtinger(1, 0), jet.wirtinger(0, 1)};
}

bilap_result bilaplacian_residual(const scalar_field2& u, std::span<const cx> grid, double step) {
  bilap_result res;
  res.per_point.reserve(grid.size());
  for (cx z : grid) {
    jet2 jet = jet_at(u, z.real(), z.imag(), 4, step);
    double v = jet.bilaplacian();
    res.per_point.push_back({z, v});
    res.max_abs = std::max(res.max_abs, std::abs(v));
  }
  return res;
}

std::vector<double> geometric_ladder(double t0, int n) {
  std::vector<double> t(n);
  for (int i = 0; i < n; ++i) t[i] = t0 * std::pow(0.5, i);
  return t;
}

namespace {

// least squares slope of log|v| against log t, skipping noise-floor entries
void fit_exponent(decay_quantity& q, std::span<const double> ladder, double floor, double want) {
  std::vector<double> lt, lv;
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    if (q.values[i] > floor) {
      lt.push_back(std::log(ladder[i]));
      lv.push_back(std::log(q.values[i]));
    }
  }
  if (lt.size() < 2) {
    q.at_noise_floor = true;
    q.exponent = std::numeric_limits<double>::infinity();
    q.pass = true;  // everything measured at noise level: flat as measured
    return;
  }
  double mt = std::accumulate(lt.begin(), lt.end(), 0.0) / lt.size();
  double mv = std::accumulate(lv.begin(), lv.end(), 0.0) / lv.size();
  double num = 0, den = 0;
  for (std::size_t i = 0; i < lt.size(); ++i) {
    num += (lt[i] - mt) * (lv[i] - mv);
    den += (lt[i] - mt) * (lt[i] - mt);
  }
  q.exponent = num / den;
  q.pass = q.exponent >= want;
}

}  // namespace

decay_report flatness_decay(const scalar_field2& u, const curve_arc& arc,
                            std::span<const double> ladder, int expected_order,
                            const flatness_options& opt) {
  if (ladder.size() < 6)
    throw std::invalid_argument("flatness_decay: ladder needs at least 6 rungs");
  for (std::size_t i = 1; i < ladder.size(); ++i) {
    if (std::abs(ladder[i] / ladder[i - 1] - 0.5) > 1e-9)
      throw std::invalid_argument("flatness_decay: ladder ratio must be 1/2");
  }
  decay_report rep;
  rep.ladder.assign(ladder.begin(), ladder.end());
  rep.arc_id = arc.id;
  rep.expected_order = expected_order;
  rep.u.values.resize(ladder.size());
  rep.dnu.values.resize(ladder.size());
  rep.dn2u.values.resize(ladder.size());

  for (std::size_t i = 0; i < ladder.size(); ++i) {
    double t = ladder[i];
    double m0 = 0, m1 = 0, m2 = 0;
    for (double s : opt.anchors) {
      cx base = arc.point(s);
      cx n = arc.inward_normal(s);
      cx p = base + t * n;
      double h = std::min(opt.fd_step, t / 4);  // probes approach from inside only
      jet2 jet = jet_at(u, p.real(), p.imag(), 2, h);
      m0 = std::max(m0, std::abs(u(p)));
      m1 = std::max(m1, std::abs(jet.directional1(n.real(), n.imag())));
      m2 = std::max(m2, std::abs(jet.directional2(n.real(), n.imag())));
    }
    rep.u.values[i] = m0;
    rep.dnu.values[i] = m1;
    rep.dn2u.values[i] = m2;
  }

  fit_exponent(rep.u, ladder, opt.noise_floor, expected_order - opt.margin);
  fit_exponent(rep.dnu, ladder, opt.noise_floor, expected_order - 1 - opt.margin);
  fit_exponent(rep.dn2u, ladder, opt.noise_floor, expected_order - 2 - opt.margin);
  rep.pass = rep.u.pass && rep.dnu.pass && rep.dn2u.pass;
  return rep;
}

std::string decay_report::to_csv() const {
  std::ostringstream os;
  os.precision(16);
  os << "# t, abs_u, abs_dnu, abs_dn2u (arc " << arc_id << ", expected order " << expected_order
     << ")\n";
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    os << ladder[i] << "," << u.values[i] << "," << dnu.values[i] << "," << dn2u.values[i] << "\n";
  }
  return os.str();
}

nlohmann::json decay_report::to_json() const {
  auto q = [](const decay_quantity& d) {
    return nlohmann::json{{"exponent", d.exponent},
                          {"at_noise_floor", d.at_noise_floor},
                          {"pass", d.pass}};
  };
  return {{"arc_id", arc_id},
          {"expected_order", expected_order},
          {"exponents", {q(u), q(dnu), q(dn2u)}},
          {"verdicts", {u.pass, dnu.pass, dn2u.pass}},
          {"pass", pass}};
}

}  // namespace biflat
