#include "biflat/almansi2d.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <sstream>

namespace biflat {

poly2q poly2q::monomial(int a, int b, rational c) {
  poly2q p;
  p.add(a, b, c);
  return p;
}

void poly2q::add(int a, int b, const rational& c) {
  if (c == 0) return;
  auto key = std::make_pair(a, b);
  auto it = t.find(key);
  if (it == t.end()) {
    t.emplace(key, c);
  } else {
    it->second += c;
    if (it->second == 0) t.erase(it);
  }
}

int poly2q::degree() const {
  int d = -1;
  for (const auto& [k, v] : t) d = std::max(d, k.first + k.second);
  return d;
}

poly2q operator+(const poly2q& p, const poly2q& q) {
  poly2q r = p;
  for (const auto& [k, v] : q.t) r.add(k.first, k.second, v);
  return r;
}

poly2q operator-(const poly2q& p, const poly2q& q) {
  poly2q r = p;
  for (const auto& [k, v] : q.t) r.add(k.first, k.second, -v);
  return r;
}

poly2q operator*(const poly2q& p, const poly2q& q) {
  poly2q r;
  for (const auto& [kp, vp] : p.t)
    for (const auto& [kq, vq] : q.t) r.add(kp.first + kq.first, kp.second + kq.second, vp * vq);
  return r;
}

poly2q poly2q::scaled(const rational& s) const {
  poly2q r;
  for (const auto& [k, v] : t) r.add(k.first, k.second, v * s);
  return r;
}

poly2q poly2q::dx() const {
  poly2q r;
  for (const auto& [k, v] : t)
    if (k.first > 0) r.add(k.first - 1, k.second, v * k.first);
  return r;
}

poly2q poly2q::dy() const {
  poly2q r;
  for (const auto& [k, v] : t)
    if (k.second > 0) r.add(k.first, k.second - 1, v * k.second);
  return r;
}

poly2q poly2q::laplacian() const { return dx().dx() + dy().dy(); }

double poly2q::eval(double x, double y) const {
  double acc = 0;
  for (const auto& [k, v] : t) acc += to_double(v) * std::pow(x, k.first) * std::pow(y, k.second);
  return acc;
}

scalar_field2 poly2q::as_field(const std::string& name) const {
  poly2q copy = *this;
  return scalar_field2{[copy](double x, double y) { return copy.eval(x, y); }, 100, {}, name};
}

nlohmann::json poly2q::to_json() const {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [k, v] : t) {
    terms.push_back({{"a", k.first},
                     {"b", k.second},
                     {"num", static_cast<std::int64_t>(numerator(v))},
                     {"den", static_cast<std::int64_t>(denominator(v))}});
  }
  return {{"terms", terms}};
}

poly2q poly2q::from_json(const nlohmann::json& j) {
  poly2q p;
  for (const auto& e : j.at("terms")) {
    p.add(e.at("a").get<int>(), e.at("b").get<int>(),
          rational(e.at("num").get<std::int64_t>(), e.at("den").get<std::int64_t>()));
  }
  return p;
}

std::string poly2q::str() const {
  if (t.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, v] : t) {
    if (!first) os << " + ";
    first = false;
    os << "(" << v.str() << ")x^" << k.first << "y^" << k.second;
  }
  return os.str();
}

namespace {

/// Polynomial in the independent variables (z, w = zbar), Gaussian-rational
/// coefficients; the exact carrier of the Almansi triangular structure.
using zzpoly = std::map<std::pair<int, int>, gq>;

void zz_add(zzpoly& p, int m, int n, const gq& c) {
  if (c.is_zero()) return;
  auto key = std::make_pair(m, n);
  auto it = p.find(key);
  if (it == p.end()) {
    p.emplace(key, c);
  } else {
    it->second = it->second + c;
    if (it->second.is_zero()) p.erase(it);
  }
}

std::vector<rational> binomial_row(int n) {
  std::vector<rational> row(n + 1);
  row[0] = 1;
  for (int k = 1; k <= n; ++k) row[k] = row[k - 1] * rational(n - k + 1) / rational(k);
  return row;
}

gq i_power(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return gq{rational(1), rational(0)};
    case 1: return gq{rational(0), rational(1)};
    case 2: return gq{rational(-1), rational(0)};
    default: return gq{rational(0), rational(-1)};
  }
}

/// x^a y^b = ((z+w)/2)^a ((z-w)/(2i))^b expanded exactly.
zzpoly xy_to_zz(const poly2q& p) {
  zzpoly out;
  for (const auto& [k, coef] : p.t) {
    int a = k.first, b = k.second;
    auto rowa = binomial_row(a);
    auto rowb = binomial_row(b);
    // 1/(2i)^b = (-i)^b / 2^b
    gq scale = gq{coef} * i_power(-b);
    rational pow2 = 1;
    for (int i = 0; i < a + b; ++i) pow2 *= rational(1, 2);
    scale = scale * gq{pow2};
    for (int i = 0; i <= a; ++i) {
      for (int j = 0; j <= b; ++j) {
        // (z)^i (w)^(a-i) * (z)^j (-w)^(b-j)
        gq c = scale * gq{rowa[i] * rowb[j]} * (((b - j) % 2) ? gq{rational(-1)} : gq{rational(1)});
        zz_add(out, i + j, (a - i) + (b - j), c);
      }
    }
  }
  return out;
}

/// z^m w^n = (x+iy)^m (x-iy)^n back to real monomials; imaginary parts must
/// cancel for inputs coming from a real polynomial.
poly2q zz_to_xy(const zzpoly& p) {
  std::map<std::pair<int, int>, gq> acc;
  for (const auto& [k, coef] : p) {
    int m = k.first, n = k.second;
    auto rowm = binomial_row(m);
    auto rown = binomial_row(n);
    for (int i = 0; i <= m; ++i) {
      for (int j = 0; j <= n; ++j) {
        // x^(i+j) * (iy)^(m-i) * (-iy)^(n-j)
        gq c = coef * gq{rowm[i] * rown[j]} * i_power((m - i) - (n - j));
        auto key = std::make_pair(i + j, (m - i) + (n - j));
        auto it = acc.find(key);
        if (it == acc.end()) acc.emplace(key, c);
        else it->second = it->second + c;
      }
    }
  }
  poly2q out;
  for (const auto& [k, c] : acc) {
    if (!(c.im == 0))
      throw std::logic_error("zz_to_xy: nonreal coefficient from a real polynomial");
    out.add(k.first, k.second, c.re);
  }
  return out;
}

}  // namespace

harmonic_stack almansi_decompose(const poly2q& u, int N) {
  if (N < 1) throw std::invalid_argument("almansi_decompose: N must be >= 1");
  poly2q lap = u;
  for (int j = 0; j < N; ++j) lap = lap.laplacian();
  if (!lap.is_zero())
    throw not_nharmonic_error("almansi_decompose: Delta^" + std::to_string(N) +
                              " u is nonzero: " + lap.str());

  zzpoly zz = xy_to_zz(u);
  harmonic_stack stack;
  stack.u.resize(N);
  for (int j = 1; j <= N; ++j) {
    zzpoly uj;
    for (const auto& [k, c] : zz) {
      int m = k.first, n = k.second;
      if (std::min(m, n) != j - 1) continue;
      zz_add(uj, m - (j - 1), n - (j - 1), c);
    }
    stack.u[j - 1] = zz_to_xy(uj);
    if (!stack.u[j - 1].laplacian().is_zero())
      throw std::logic_error("almansi_decompose: coefficient function not harmonic");
  }
  return stack;
}

poly2q almansi_reconstruct(const harmonic_stack& stack) {
  poly2q r2 = poly2q::monomial(2, 0, 1) + poly2q::monomial(0, 2, 1);
  poly2q acc;
  poly2q weight = poly2q::monomial(0, 0, 1);
  for (std::size_t j = 0; j < stack.u.size(); ++j) {
    acc = acc + weight * stack.u[j];
    weight = weight * r2;
  }
  return acc;
}

poly2q re_zk(int k) {
  // Re (x+iy)^k = sum_{j even} C(k,j) x^(k-j) y^j (-1)^(j/2)
  poly2q p;
  auto row = binomial_row(k);
  for (int j = 0; j <= k; j += 2) p.add(k - j, j, row[j] * ((j / 2) % 2 ? -1 : 1));
  return p;
}

poly2q im_zk(int k) {
  poly2q p;
  auto row = binomial_row(k);
  for (int j = 1; j <= k; j += 2) p.add(k - j, j, row[j] * (((j - 1) / 2) % 2 ? -1 : 1));
  return p;
}

poly2q random_harmonic2(std::mt19937_64& rng, int maxdeg) {
  std::uniform_int_distribution<int> coef(-9, 9);
  poly2q p = poly2q::monomial(0, 0, coef(rng));
  for (int k = 1; k <= maxdeg; ++k) {
    p = p + re_zk(k).scaled(coef(rng)) + im_zk(k).scaled(coef(rng));
  }
  return p;
}

wirtinger_provider wirtinger_of_complex_field(std::function<cx(cx)> U, double step) {
  scalar_field2 re{[U](double x, double y) { return U(cx(x, y)).real(); }, 6, {}, "Re U"};
  scalar_field2 im{[U](double x, double y) { return U(cx(x, y)).imag(); }, 6, {}, "Im U"};
  return [re, im, step](cx z, int a, int b) -> cx {
    int order = a + b;
    jet2 jr = jet_at(re, z.real(), z.imag(), order, step);
    jet2 ji = jet_at(im, z.real(), z.imag(), order, step);
    return jr.wirtinger(a, b) + cx(0, 1) * ji.wirtinger(a, b);
  };
}

wirtinger_provider wirtinger_of_dzN(const scalar_field2& u, int N, double step) {
  if (N < 1 || N > 2) throw std::invalid_argument("wirtinger_of_dzN: N must be 1 or 2");
  scalar_field2 field = u;
  return [field, N, step](cx z, int a, int b) -> cx {
    if (a + b + N > 4) throw std::invalid_argument("wirtinger_of_dzN: derivative beyond jet order");
    jet2 jet = jet_at(field, z.real(), z.imag(), 4, step);
    return jet.wirtinger(a + N, b);
  };
}

cx U_from_u(const scalar_field2& u, int N, cx z, double step) {
  if (N < 1 || N > 2) throw std::invalid_argument("U_from_u: N must be 1 or 2 numerically");
  jet2 jet = jet_at(u, z.real(), z.imag(), 2 * N, step);
  return jet.wirtinger(N, 0);
}

split_result polyanalytic_split(const wirtinger_provider& U, int N, std::span<const cx> probes,
                                double resid_tol) {
  if (N < 1) throw std::invalid_argument("polyanalytic_split: N must be >= 1");
  split_result res;
  res.N = N;
  res.probes.assign(probes.begin(), probes.end());
  res.Uk.assign(N, std::vector<cx>(probes.size()));

  auto factorial = [](int n) {
    double f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
  };

  for (std::size_t i = 0; i < probes.size(); ++i) {
    cx z = probes[i];
    cx zb = std::conj(z);
    std::vector<cx> db(N + 1);
    for (int j = 0; j <= N; ++j) db[j] = U(z, 0, j);
    res.max_dbar_residual = std::max(res.max_dbar_residual, std::abs(db[N]));

    // triangular peel: dzbar^(j-1) U = sum_{k=j..N} (k-1)!/(k-j)! zbar^(k-j) U_k
    std::vector<cx> uk(N + 1);
    for (int j = N; j >= 1; --j) {
      cx rhs = db[j - 1];
      for (int k = j + 1; k <= N; ++k)
        rhs -= factorial(k - 1) / factorial(k - j) * std::pow(zb, k - j) * uk[k];
      uk[j] = rhs / factorial(j - 1);
    }
    for (int k = 1; k <= N; ++k) res.Uk[k - 1][i] = uk[k];

    cx recon = 0;
    for (int k = 1; k <= N; ++k) recon += std::pow(zb, k - 1) * uk[k];
    res.max_reconstruction = std::max(res.max_reconstruction, std::abs(recon - db[0]));
  }
  if (res.max_dbar_residual > resid_tol)
    throw not_nharmonic_error("polyanalytic_split: dzbar^N U residual " +
                              std::to_string(res.max_dbar_residual) + " exceeds tolerance");
  return res;
}

root_check_report psi_root_check(const split_result& stack, const std::function<cx(cx)>& schwarz_fn,
                                 int depth, double rel_tol) {
  root_check_report rep;
  const int N = stack.N;
  // top nontrivial index J
  double overall = 0;
  std::vector<double> knorm(N, 0.0);
  for (int k = 0; k < N; ++k) {
    for (cx v : stack.Uk[k]) knorm[k] = std::max(knorm[k], std::abs(v));
    overall = std::max(overall, knorm[k]);
  }
  rep.top_index = 0;
  for (int k = 0; k < N; ++k)
    if (knorm[k] > 1e-12 * std::max(overall, 1.0)) rep.top_index = k + 1;

  auto factorial = [](int n) {
    double f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
  };

  for (std::size_t i = 0; i < stack.probes.size(); ++i) {
    cx w = schwarz_fn(stack.probes[i]);
    for (int j = 1; j <= depth; ++j) {
      cx acc = 0;
      for (int k = j; k <= N; ++k)
        acc += factorial(k - 1) / factorial(k - j) * stack.Uk[k - 1][i] * std::pow(w, k - j);
      rep.max_abs = std::max(rep.max_abs, std::abs(acc));
    }
  }
  rep.scale = std::max(rep.top_index >= 1 ? knorm[rep.top_index - 1] : 0.0, 1e-12);
  rep.relative = rep.max_abs / rep.scale;
  rep.pass = rep.relative < rel_tol;
  return rep;
}

}  // namespace biflat
