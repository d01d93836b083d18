#include "biflat/ratmap.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <numbers>
#include <sstream>

namespace biflat {

namespace {

std::string cx_str(cx z) {
  std::ostringstream os;
  os << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
  return os.str();
}

}  // namespace

cx rational_map::operator()(cx z) const {
  cx d = den.eval(z);
  if (std::abs(d) < 1e-14) {
    throw pole_eval_error("rational_map: evaluation at denominator zero near " + cx_str(z));
  }
  return num.eval(z) / d;
}

rational_map rational_map::derivative() const {
  if (is_polynomial()) {
    cx lead = den[0];
    cpoly dn = num.derivative();
    std::vector<cx> scaled(dn.c);
    for (auto& v : scaled) v /= lead;
    return rational_map(cpoly(std::move(scaled)));
  }
  return reduce({num.derivative() * den - num * den.derivative(), den * den});
}

nlohmann::json rational_map::to_json() const {
  auto dump = [](const cpoly& p) {
    nlohmann::json arr = nlohmann::json::array();
    for (cx v : p.c) arr.push_back({v.real(), v.imag()});
    return arr;
  };
  return {{"num", dump(num)}, {"den", dump(den)}};
}

rational_map rational_map::from_json(const nlohmann::json& j) {
  auto load = [](const nlohmann::json& arr) {
    std::vector<cx> c;
    for (const auto& e : arr) {
      if (!e.is_array() || e.size() != 2)
        throw std::invalid_argument("rational_map: coefficient must be [re, im]");
      c.emplace_back(e[0].get<double>(), e[1].get<double>());
    }
    return cpoly(std::move(c));
  };
  if (!j.contains("num") || !j.contains("den"))
    throw std::invalid_argument("rational_map: JSON object needs \"num\" and \"den\"");
  return {load(j.at("num")), load(j.at("den"))};
}

rational_map reduce(rational_map f, double tol) {
  f.num.trim();
  f.den.trim();
  if (f.den.is_zero()) throw std::invalid_argument("reduce: zero denominator");
  if (f.num.is_zero()) return {cpoly{}, cpoly{cx(1.0, 0.0)}};
  if (f.num.degree() >= 1 && f.den.degree() >= 1) {
    auto nroots = poly_roots(f.num);
    auto droots = poly_roots(f.den);
    std::vector<bool> cancelled(nroots.size(), false);
    std::vector<cx> dkeep;
    for (cx dr : droots) {
      bool matched = false;
      for (std::size_t i = 0; i < nroots.size(); ++i) {
        if (!cancelled[i] && std::abs(nroots[i] - dr) <= tol) {
          cancelled[i] = true;
          matched = true;
          break;
        }
      }
      if (!matched) dkeep.push_back(dr);
    }
    cx nlead = f.num.c.back();
    cx dlead = f.den.c.back();
    cpoly n{nlead};
    for (std::size_t i = 0; i < nroots.size(); ++i)
      if (!cancelled[i]) n = n * cpoly{-nroots[i], cx(1.0, 0.0)};
    cpoly d{dlead};
    for (cx dr : dkeep) d = d * cpoly{-dr, cx(1.0, 0.0)};
    f = {std::move(n), std::move(d)};
  }
  cx lead = f.den.c.back();
  for (auto& v : f.num.c) v /= lead;
  for (auto& v : f.den.c) v /= lead;
  return f;
}

rational_map rmul(const rational_map& a, const rational_map& b) {
  return reduce({a.num * b.num, a.den * b.den});
}

rational_map rdiv(const rational_map& a, const rational_map& b) {
  if (b.num.is_zero()) throw std::invalid_argument("rdiv: division by the zero function");
  return reduce({a.num * b.den, a.den * b.num});
}

rational_map schwarz_pullback(const rational_map& f) {
  rational_map star = f.reflect();
  // star(1/zeta) = rev(num)(zeta) * zeta^(dd-dn) / rev(den)(zeta)
  int dn = star.num.degree();
  int dd = star.den.degree();
  if (dn < 0) return {cpoly{}, cpoly{cx(1.0, 0.0)}};
  cpoly n = star.num.reversed();
  cpoly d = star.den.reversed();
  if (dd > dn)
    n = n.shifted_up(dd - dn);
  else if (dn > dd)
    d = d.shifted_up(dn - dd);
  return reduce({std::move(n), std::move(d)});
}

rational_map reflection_coefficient(const rational_map& phi) {
  return rdiv(schwarz_pullback(phi), phi);
}

std::vector<pole_record> poles_in_disk(const rational_map& f, double cluster_tol) {
  std::vector<pole_record> out;
  if (f.den.degree() < 1) return out;
  auto clusters = cluster_roots(poly_roots(f.den), cluster_tol);
  for (const auto& [root, mult] : clusters)
    if (std::abs(root) < 1.0) out.push_back({root, mult});
  return out;
}

conformal_report conformal_check(const rational_map& phi, int samples) {
  conformal_report rep;
  if (samples < 64) throw std::invalid_argument("conformal_check: needs at least 64 samples");

  // radius 1+eps staying clear of phi's own poles
  double eps = 1e-2;
  if (phi.den.degree() >= 1) {
    double rmin = 2.0;
    for (cx r : poly_roots(phi.den)) rmin = std::min(rmin, std::abs(r));
    if (rmin <= 1.0) {
      rep.reason = "map has a pole in the closed unit disk";
      return rep;
    }
    eps = std::min(eps, (rmin - 1.0) / 2);
  }

  rational_map dnum = {phi.num.derivative() * phi.den - phi.num * phi.den.derivative(),
                       phi.den * phi.den};
  const int m = std::max(4096, 64 * (std::max(phi.num.degree(), phi.den.degree()) + 1));
  double total_arg = 0.0;
  cx prev = dnum.num.eval((1.0 + eps));
  for (int k = 1; k <= m; ++k) {
    double th = 2.0 * std::numbers::pi * k / m;
    cx z = (1.0 + eps) * std::polar(1.0, th);
    cx cur = dnum.num.eval(z);
    total_arg += std::arg(cur / prev);
    prev = cur;
  }
  // the contour radius is below every pole of phi', so the winding of the
  // numerator polynomial equals the zero count of phi' inside the contour
  rep.winding = static_cast<int>(std::lround(total_arg / (2.0 * std::numbers::pi)));

  rep.min_boundary_gap = std::numeric_limits<double>::infinity();
  std::vector<cx> boundary(samples);
  for (int k = 0; k < samples; ++k)
    boundary[k] = phi(std::polar(1.0, 2.0 * std::numbers::pi * k / samples));
  for (int i = 0; i < samples; ++i)
    for (int j = i + 1; j < samples; ++j)
      rep.min_boundary_gap = std::min(rep.min_boundary_gap, std::abs(boundary[i] - boundary[j]));
  rep.injective = rep.min_boundary_gap > 1e-9;

  rep.ok = (rep.winding == 0) && rep.injective;
  if (rep.winding != 0) rep.reason = "phi' has zeros in the closed unit disk";
  else if (!rep.injective) rep.reason = "boundary samples not injective";
  return rep;
}

void validate_conformal(const rational_map& phi, int samples) {
  if (std::abs(phi(cx(0.0, 0.0))) > 1e-12)
    throw std::invalid_argument("conformal map must satisfy phi(0) = 0");
  for (const auto& p : poles_in_disk(phi))
    throw std::invalid_argument("conformal map has pole inside the disk at " + cx_str(p.location));
  auto rep = conformal_check(phi, samples);
  if (!rep.ok) throw std::invalid_argument("conformal_check failed: " + rep.reason);
}

}  // namespace biflat
