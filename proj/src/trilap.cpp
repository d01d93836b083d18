#include "biflat/trilap.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace biflat {

poly3q poly3q::monomial(int a, int b, int c, rational coef) {
  poly3q p;
  p.add({a, b, c}, coef);
  return p;
}

void poly3q::add(const exp3& e, const rational& c) {
  if (c == 0) return;
  auto it = t.find(e);
  if (it == t.end()) {
    t.emplace(e, c);
  } else {
    it->second += c;
    if (it->second == 0) t.erase(it);
  }
}

int poly3q::degree() const {
  int d = -1;
  for (const auto& [e, v] : t) d = std::max(d, e[0] + e[1] + e[2]);
  return d;
}

poly3q operator+(const poly3q& p, const poly3q& q) {
  poly3q r = p;
  for (const auto& [e, v] : q.t) r.add(e, v);
  return r;
}

poly3q operator-(const poly3q& p, const poly3q& q) {
  poly3q r = p;
  for (const auto& [e, v] : q.t) r.add(e, -v);
  return r;
}

poly3q operator*(const poly3q& p, const poly3q& q) {
  poly3q r;
  for (const auto& [ep, vp] : p.t)
    for (const auto& [eq, vq] : q.t)
      r.add({ep[0] + eq[0], ep[1] + eq[1], ep[2] + eq[2]}, vp * vq);
  return r;
}

poly3q poly3q::scaled(const rational& s) const {
  poly3q r;
  for (const auto& [e, v] : t) r.add(e, v * s);
  return r;
}

poly3q poly3q::d(int axis) const {
  poly3q r;
  for (const auto& [e, v] : t) {
    if (e[axis] == 0) continue;
    exp3 f = e;
    f[axis] -= 1;
    r.add(f, v * e[axis]);
  }
  return r;
}

poly3q poly3q::laplacian() const { return d(0).d(0) + d(1).d(1) + d(2).d(2); }

poly3q poly3q::substitute_x1_zero() const {
  poly3q r;
  for (const auto& [e, v] : t)
    if (e[0] == 0) r.add(e, v);
  return r;
}

double poly3q::eval(double x1, double x2, double x3) const {
  double acc = 0;
  for (const auto& [e, v] : t)
    acc += to_double(v) * std::pow(x1, e[0]) * std::pow(x2, e[1]) * std::pow(x3, e[2]);
  return acc;
}

nlohmann::json poly3q::to_json() const {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [e, v] : t) {
    terms.push_back({{"a", e[0]},
                     {"b", e[1]},
                     {"c", e[2]},
                     {"num", static_cast<std::int64_t>(numerator(v))},
                     {"den", static_cast<std::int64_t>(denominator(v))}});
  }
  return {{"terms", terms}};
}

poly3q poly3q::from_json(const nlohmann::json& j) {
  poly3q p;
  for (const auto& e : j.at("terms")) {
    p.add({e.at("a").get<int>(), e.at("b").get<int>(), e.at("c").get<int>()},
          rational(e.at("num").get<std::int64_t>(), e.at("den").get<std::int64_t>()));
  }
  return p;
}

std::string poly3q::str() const {
  if (t.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, v] : t) {
    if (!first) os << " + ";
    first = false;
    os << "(" << v.str() << ")x1^" << e[0] << "x2^" << e[1] << "x3^" << e[2];
  }
  return os.str();
}

poly3q dop_apply(const poly3q& op, const poly3q& f) {
  poly3q out;
  for (const auto& [oe, oc] : op.t) {
    for (const auto& [fe, fc] : f.t) {
      rational factor = 1;
      exp3 res = fe;
      bool dead = false;
      for (int axis = 0; axis < 3 && !dead; ++axis) {
        for (int k = 0; k < oe[axis]; ++k) {
          if (res[axis] == 0) {
            dead = true;
            break;
          }
          factor *= res[axis];
          res[axis] -= 1;
        }
      }
      if (!dead) out.add(res, oc * fc * factor);
    }
  }
  return out;
}

op_matrix3 operator+(const op_matrix3& A, const op_matrix3& B) {
  op_matrix3 R;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) R.e[i][j] = A.e[i][j] + B.e[i][j];
  return R;
}

op_matrix3 operator-(const op_matrix3& A, const op_matrix3& B) {
  op_matrix3 R;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) R.e[i][j] = A.e[i][j] - B.e[i][j];
  return R;
}

bool operator==(const op_matrix3& A, const op_matrix3& B) {
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (!(A.e[i][j] == B.e[i][j])) return false;
  return true;
}

nlohmann::json op_matrix3::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < 3; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < 3; ++j) row.push_back(e[i][j].to_json());
    rows.push_back(row);
  }
  return rows;
}

op_matrix3 op_mul(const op_matrix3& A, const op_matrix3& B) {
  op_matrix3 R;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) R.e[i][j] = R.e[i][j] + A.e[i][k] * B.e[k][j];
  return R;
}

std::array<poly3q, 3> op_apply(const op_matrix3& A, const std::array<poly3q, 3>& f) {
  std::array<poly3q, 3> out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out[i] = out[i] + dop_apply(A.e[i][j], f[j]);
  return out;
}

namespace {

poly3q mono(int a, int b, int c, std::int64_t k = 1) { return poly3q::monomial(a, b, c, k); }

}  // namespace

poly3q lap_op() { return mono(2, 0, 0) + mono(0, 2, 0) + mono(0, 0, 2); }

op_matrix3 op_L() {
  op_matrix3 M;
  M.e[0][0] = mono(2, 0, 0) - mono(0, 2, 0) - mono(0, 0, 2);
  M.e[0][1] = mono(1, 1, 0, 2);
  M.e[0][2] = mono(1, 0, 1, 2);
  M.e[1][0] = mono(1, 1, 0, -2);
  M.e[1][1] = mono(2, 0, 0) - mono(0, 2, 0) + mono(0, 0, 2);
  M.e[1][2] = mono(0, 1, 1, -2);
  M.e[2][0] = mono(1, 0, 1, -2);
  M.e[2][1] = mono(0, 1, 1, -2);
  M.e[2][2] = mono(2, 0, 0) + mono(0, 2, 0) - mono(0, 0, 2);
  return M;
}

op_matrix3 op_Lprime() {
  op_matrix3 M = op_L();
  // L' is L after x1 -> -x1: negate entries with odd d1-degree
  M.e[0][1] = mono(1, 1, 0, -2);
  M.e[0][2] = mono(1, 0, 1, -2);
  M.e[1][0] = mono(1, 1, 0, 2);
  M.e[2][0] = mono(1, 0, 1, 2);
  return M;
}

op_matrix3 op_R() {
  op_matrix3 M;
  M.e[0][0] = mono(2, 0, 0);
  M.e[0][1] = mono(1, 1, 0, -1);
  M.e[0][2] = mono(1, 0, 1, -1);
  M.e[1][0] = mono(1, 1, 0);
  M.e[1][1] = mono(0, 2, 0, -1);
  M.e[1][2] = mono(0, 1, 1, -1);
  M.e[2][0] = mono(1, 0, 1);
  M.e[2][1] = mono(0, 1, 1, -1);
  M.e[2][2] = mono(0, 0, 2, -1);
  return M;
}

op_matrix3 op_D() {
  op_matrix3 M;
  M.e[0][0] = mono(1, 0, 0);
  M.e[0][1] = mono(0, 1, 0, -1);
  M.e[0][2] = mono(0, 0, 1, -1);
  M.e[1][0] = mono(0, 1, 0);
  M.e[1][1] = mono(1, 0, 0);
  M.e[2][0] = mono(0, 0, 1);
  M.e[2][2] = mono(1, 0, 0);
  return M;
}

op_matrix3 op_B() {
  op_matrix3 M;
  M.e[0][0] = mono(1, 0, 0, -1);
  M.e[0][1] = mono(0, 1, 0, -1);
  M.e[0][2] = mono(0, 0, 1, -1);
  M.e[1][0] = mono(0, 1, 0, -1);
  M.e[1][1] = mono(1, 0, 0);
  M.e[2][0] = mono(0, 0, 1, -1);
  M.e[2][2] = mono(1, 0, 0);
  return M;
}

op_matrix3 op_B_printed() {
  op_matrix3 M = op_B();
  for (int i = 0; i < 3; ++i)
    for (int j = 1; j < 3; ++j) M.e[i][j] = M.e[i][j].scaled(-1);
  return M;
}

op_matrix3 op_hessian() {
  op_matrix3 M;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      exp3 e{0, 0, 0};
      e[i] += 1;
      e[j] += 1;
      M.e[i][j] = poly3q::monomial(e[0], e[1], e[2], 1);
    }
  return M;
}

op_matrix3 op_identity() {
  op_matrix3 M;
  for (int i = 0; i < 3; ++i) M.e[i][i] = mono(0, 0, 0);
  return M;
}

op_matrix3 op_diag(const poly3q& a, const poly3q& b, const poly3q& c) {
  op_matrix3 M;
  M.e[0][0] = a;
  M.e[1][1] = b;
  M.e[2][2] = c;
  return M;
}

std::array<poly3q, 3> lift(const poly3q& u, int slot) {
  if (slot < 1 || slot > 3) throw std::invalid_argument("lift: slot must be 1..3");
  std::array<poly3q, 3> v;
  v[slot - 1] = u;
  return v;
}

namespace {

bool swap_symmetric_23(const poly3q& q) {
  for (const auto& [e, v] : q.t) {
    auto it = q.t.find(exp3{e[0], e[2], e[1]});
    if (it == q.t.end() || !(it->second == v)) return false;
  }
  return true;
}

poly3q swap_23(const poly3q& q) {
  poly3q r;
  for (const auto& [e, v] : q.t) r.add({e[0], e[2], e[1]}, v);
  return r;
}

}  // namespace

poly3q poisson_profile(const poly3q& q) {
  for (const auto& [e, v] : q.t)
    if (e[0] != 0) throw std::invalid_argument("poisson_profile: q must not involve x1");
  poly3q P;
  poly3q residual = q;
  while (!residual.is_zero()) {
    poly3q T;
    for (const auto& [e, v] : residual.t) {
      // x2-double-antiderivative of each monomial
      T.add({0, e[1] + 2, e[2]}, v / rational((e[1] + 1) * (e[1] + 2)));
    }
    P = P + T;
    residual = residual - (T.d(1).d(1) + T.d(2).d(2));
    // each pass lowers the top x3-degree of the residual by 2
  }
  if (swap_symmetric_23(q)) P = (P + swap_23(P)).scaled(rational(1, 2));
  return P;
}

std::pair<poly3q, poly3q> almansi3(const poly3q& u) {
  poly3q bilap = u.laplacian().laplacian();
  if (!bilap.is_zero())
    throw non_biharmonic_error("almansi3: Delta^2 u nonzero: " + bilap.str());

  poly3q h = u.laplacian();
  // int_0^{x1} h(t, x') dt
  poly3q integral;
  for (const auto& [e, v] : h.t) integral.add({e[0] + 1, e[1], e[2]}, v / rational(e[0] + 1));
  poly3q q = h.d(0).substitute_x1_zero();
  poly3q P = poisson_profile(q);
  poly3q w = (integral - P).scaled(rational(1, 2));
  poly3q v = u - poly3q::monomial(1, 0, 0, 1) * w;
  if (!w.laplacian().is_zero() || !v.laplacian().is_zero())
    throw std::logic_error("almansi3: produced non-harmonic split");
  return {v, w};
}

bool flat3_check(const poly3q& u) {
  for (const auto& [e, v] : u.t)
    if (e[0] < 3) return false;
  return true;
}

namespace {

struct poly_mat3 {
  poly3q e[3][3];
};

poly_mat3 apply_entrywise(const op_matrix3& op, const poly3q& f) {
  poly_mat3 M;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) M.e[i][j] = dop_apply(op.e[i][j], f);
  return M;
}

poly3q det3(const poly_mat3& M) {
  return M.e[0][0] * (M.e[1][1] * M.e[2][2] - M.e[1][2] * M.e[2][1]) -
         M.e[0][1] * (M.e[1][0] * M.e[2][2] - M.e[1][2] * M.e[2][0]) +
         M.e[0][2] * (M.e[1][0] * M.e[2][1] - M.e[1][1] * M.e[2][0]);
}

poly_mat3 adj3(const poly_mat3& M) {
  poly_mat3 A;
  auto minor = [&](int r0, int r1, int c0, int c1) {
    return M.e[r0][c0] * M.e[r1][c1] - M.e[r0][c1] * M.e[r1][c0];
  };
  A.e[0][0] = minor(1, 2, 1, 2);
  A.e[0][1] = minor(0, 2, 2, 1);
  A.e[0][2] = minor(0, 1, 1, 2);
  A.e[1][0] = minor(1, 2, 2, 0);
  A.e[1][1] = minor(0, 2, 0, 2);
  A.e[1][2] = minor(0, 1, 2, 0);
  A.e[2][0] = minor(1, 2, 0, 1);
  A.e[2][1] = minor(0, 2, 1, 0);
  A.e[2][2] = minor(0, 1, 0, 1);
  return A;
}

int poly_rank3(const poly_mat3& M) {
  if (!det3(M).is_zero()) return 3;
  for (int i0 = 0; i0 < 3; ++i0)
    for (int i1 = i0 + 1; i1 < 3; ++i1)
      for (int j0 = 0; j0 < 3; ++j0)
        for (int j1 = j0 + 1; j1 < 3; ++j1)
          if (!(M.e[i0][j0] * M.e[i1][j1] - M.e[i0][j1] * M.e[i1][j0]).is_zero()) return 2;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (!M.e[i][j].is_zero()) return 1;
  return 0;
}

}  // namespace

std::array<std::array<double, 3>, 3> mat_field3::eval(double x1, double x2, double x3) const {
  double dv = den.eval(x1, x2, x3);
  if (std::abs(dv) < 1e-14)
    throw std::domain_error("mat_field3: denominator vanishes at the evaluation point");
  std::array<std::array<double, 3>, 3> out{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out[i][j] = num[i][j].eval(x1, x2, x3) / dv;
  return out;
}

bool mat_field3::numerator_vanishes_on_patch() const {
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (!num[i][j].substitute_x1_zero().is_zero()) return false;
  return true;
}

mat_field3 x1_field(const poly3q& u) {
  auto [v, w] = almansi3(u);
  poly_mat3 Hw = apply_entrywise(op_hessian(), w);
  poly_mat3 Hv = apply_entrywise(op_hessian(), v);
  poly_mat3 Bw = apply_entrywise(op_B(), w);
  poly_mat3 rhs;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) rhs.e[i][j] = Bw.e[i][j] - Hv.e[i][j];

  mat_field3 out;
  out.den = det3(Hw);
  if (out.den.is_zero()) {
    out.degenerate = true;
    out.rank = poly_rank3(Hw);
    return out;
  }
  out.rank = 3;
  poly_mat3 adj = adj3(Hw);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      poly3q acc;
      for (int k = 0; k < 3; ++k) acc = acc + adj.e[i][k] * rhs.e[k][j];
      out.num[i][j] = acc;
    }
  return out;
}

reduction_report harmonic_reduction_check(unsigned seed, int count, int maxdeg) {
  reduction_report rep;
  op_matrix3 diff = op_Lprime() - op_R() - op_R();
  op_matrix3 expect = op_diag(lap_op().scaled(-1), lap_op(), lap_op());
  rep.symbolic_ok = (diff == expect);

  std::mt19937_64 rng(seed);
  rep.field_ok = true;
  poly3q x1 = poly3q::monomial(1, 0, 0, 1);
  for (int n = 0; n < count && rep.field_ok; ++n) {
    poly3q h = random_harmonic3(rng, maxdeg);
    for (int slot = 1; slot <= 3; ++slot) {
      auto hl = lift(h, slot);
      auto x1hl = lift(x1 * h, slot);
      auto lhs0 = op_apply(op_Lprime(), hl);
      auto rhs0 = op_apply(op_R(), hl);
      auto lhs1 = op_apply(op_Lprime(), x1hl);
      auto d1 = op_apply(op_D(), hl);
      auto r1 = op_apply(op_R(), hl);
      for (int i = 0; i < 3; ++i) {
        bool ok0 = (lhs0[i] - rhs0[i].scaled(2)).is_zero();
        bool ok1 = (lhs1[i] - d1[i].scaled(2) - (x1 * r1[i]).scaled(2)).is_zero();
        if (!ok0 || !ok1) {
          rep.field_ok = false;
          rep.counterexample = h.str();
          break;
        }
      }
      if (!rep.field_ok) break;
    }
    ++rep.checked;
  }
  return rep;
}

poly3q harmonic_projection3(const poly3q& p) {
  // split into homogeneous parts and take the Fischer harmonic component
  std::map<int, poly3q> parts;
  for (const auto& [e, v] : p.t) parts[e[0] + e[1] + e[2]].add(e, v);
  poly3q r2 = mono(2, 0, 0) + mono(0, 2, 0) + mono(0, 0, 2);
  poly3q out;
  for (auto& [s, g] : parts) {
    // peel g = sum_m |x|^(2m) h_m, h_m harmonic homogeneous of degree s-2m
    poly3q residual = g;
    for (int m = s / 2; m >= 1; --m) {
      poly3q top = residual;
      for (int k = 0; k < m; ++k) top = top.laplacian();
      if (top.is_zero()) continue;
      int tdeg = s - 2 * m;
      rational A = 1;
      for (int j = 1; j <= m; ++j) A *= rational(2 * j) * rational(2 * j + 1 + 2 * tdeg);
      poly3q hm = top.scaled(1 / A);
      poly3q weight = mono(0, 0, 0);
      for (int k = 0; k < m; ++k) weight = weight * r2;
      residual = residual - weight * hm;
    }
    out = out + residual;  // the m = 0 (harmonic) component
  }
  if (!out.laplacian().is_zero())
    throw std::logic_error("harmonic_projection3: projection is not harmonic");
  return out;
}

poly3q random_poly3(std::mt19937_64& rng, int maxdeg) {
  std::uniform_int_distribution<int> coef(-9, 9);
  poly3q p;
  for (int a = 0; a <= maxdeg; ++a)
    for (int b = 0; a + b <= maxdeg; ++b)
      for (int c = 0; a + b + c <= maxdeg; ++c) p.add({a, b, c}, coef(rng));
  return p;
}

poly3q random_harmonic3(std::mt19937_64& rng, int maxdeg) {
  for (int attempt = 0; attempt < 32; ++attempt) {
    poly3q h = harmonic_projection3(random_poly3(rng, maxdeg));
    if (!h.is_zero()) return h;
  }
  throw std::logic_error("random_harmonic3: projection kept vanishing");
}

poly3q random_biharmonic3(std::mt19937_64& rng, int maxdeg) {
  poly3q v = random_harmonic3(rng, maxdeg);
  poly3q w = random_harmonic3(rng, maxdeg > 0 ? maxdeg - 1 : 0);
  return v + poly3q::monomial(1, 0, 0, 1) * w;
}

}  // namespace biflat
