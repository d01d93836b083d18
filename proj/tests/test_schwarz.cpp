#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <nlohmann/json.hpp>

#include <numbers>

#include "biflat/schwarz.hpp"

using namespace biflat;

namespace {

constexpr double kPi = std::numbers::pi;

poly2q mono(int a, int b, std::int64_t c) { return poly2q::monomial(a, b, c); }

std::vector<poly2q> harmonic_basis5() {
  return {mono(0, 0, 1), mono(1, 0, 1), mono(0, 1, 1), mono(2, 0, 1) - mono(0, 2, 1),
          mono(1, 1, 1)};
}

rational_map cardioid(double c) { return rational_map(cpoly{cx(0), cx(1), cx(c)}); }

}  // namespace

TEST_CASE("ellipse schwarz function") {
  SUBCASE("circle: S(z) = 1/z") {
    ellipse_spec circ(1.0, 1.0);
    for (int k = 0; k < 8; ++k) {
      cx z = std::polar(1.0, 2 * kPi * k / 8);
      CHECK(std::abs(schwarz_ellipse(circ, z).value - std::conj(z)) < 1e-14);
    }
    CHECK_THROWS_AS(schwarz_ellipse(circ, cx(0, 0)), branch_point_error);
  }
  SUBCASE("(2,1) ellipse: boundary identity at 256 samples") {
    ellipse_spec e(2.0, 1.0);
    double worst = 0;
    for (int k = 0; k < 256; ++k) {
      cx z = e.boundary(2 * kPi * k / 256);
      worst = std::max(worst, std::abs(schwarz_ellipse(e, z).value - std::conj(z)));
    }
    CHECK(worst < 1e-10);
  }
  SUBCASE("focus is a branch point") {
    ellipse_spec e(2.0, 1.0);
    CHECK_THROWS_AS(schwarz_ellipse(e, cx(e.focal(), 0)), branch_point_error);
  }
  SUBCASE("circle degeneration: a=b closed forms coincide in the limit") {
    // compare a nearly-circular ellipse against a^2/z at sampled points
    ellipse_spec near_circ(1.0 + 1e-9, 1.0);
    for (cx z : {cx(0.9, 0.3), cx(-0.5, 0.8), cx(0.1, -1.2)}) {
      CHECK(std::abs(schwarz_ellipse(near_circ, z).value - 1.0 / z) < 1e-4);
    }
  }
}

TEST_CASE("monodromy probe") {
  ellipse_spec e(2.0, 1.0);
  double c = e.focal();
  SUBCASE("loop around a focus flips the sheet") {
    CHECK(monodromy_probe(e, cx(c, 0), 0.5, 720) > 0.1);
  }
  SUBCASE("loop around the origin encircles neither focus") {
    CHECK(monodromy_probe(e, cx(0, 0), 0.5, 720) < 1e-9);
  }
  SUBCASE("circle: any admissible loop returns exactly") {
    CHECK(monodromy_probe(ellipse_spec(1, 1), cx(0.4, 0), 0.2, 720) < 1e-12);
  }
  SUBCASE("loop too close to a focus is refused") {
    CHECK_THROWS_AS(monodromy_probe(e, cx(c, 0), 1e-4, 720), branch_point_error);
  }
  SUBCASE("dichotomy over the family a in {1, 1.1, 1.5, 2}") {
    for (double a : {1.0, 1.1, 1.5, 2.0}) {
      ellipse_spec spec(a, 1.0);
      double f = spec.focal();
      double mism = a == 1.0 ? monodromy_probe(spec, cx(0.45, 0), 0.3, 720)
                             : monodromy_probe(spec, cx(f, 0), std::min(0.5, f / 2), 720);
      if (a == 1.0) {
        CHECK(mism < 1e-9);
      } else {
        CHECK(mism > 0.1);
      }
    }
  }
}

TEST_CASE("quadrature identities") {
  SUBCASE("disk mean value: node 0 with weight pi") {
    rational_map disk(cpoly{cx(0), cx(1)});
    quadrature_data data;
    data.nodes.push_back({cx(0, 0), kPi, 0, 0});
    CHECK(quadrature_residual(disk, data, harmonic_basis5()) < 1e-8);
  }
  SUBCASE("deliberately wrong weight fails by about pi/2") {
    rational_map disk(cpoly{cx(0), cx(1)});
    quadrature_data data;
    data.nodes.push_back({cx(0, 0), kPi / 2, 0, 0});
    double r = quadrature_residual(disk, data, {mono(0, 0, 1)});
    CHECK(r == doctest::Approx(kPi / 2).epsilon(1e-9));
  }
  SUBCASE("cardioid map c=0.3: fitted node weights match the closed form") {
    double c = 0.3;
    rational_map phi = cardioid(c);
    // fit (wh, wx, wy) on the five-function basis: the area integrals are
    // the oracle, computed by the quadrature itself
    auto basis = harmonic_basis5();
    double I1 = pushforward_area_integral(phi, basis[0]);
    double Ix = pushforward_area_integral(phi, basis[1]);
    double Iy = pushforward_area_integral(phi, basis[2]);
    // h(0)=  {1, 0, 0, 0, 0}, hx(0) = {0,1,0,0,0}, hy(0) = {0,0,1,0,0}:
    // the system is diagonal at the node z=0
    quadrature_data fitted;
    fitted.nodes.push_back({cx(0, 0), I1, Ix, Iy});
    CHECK(std::abs(I1 - kPi * (1 + 2 * c * c)) < 1e-9);
    CHECK(std::abs(Ix - kPi * c) < 1e-9);
    CHECK(std::abs(Iy) < 1e-9);
    // verify on independent harmonic test functions vs the doubled-resolution oracle
    std::vector<poly2q> checks = {mono(3, 0, 1) - mono(1, 2, 3),   // Re z^3
                                  mono(2, 1, 3) - mono(0, 3, 1)};  // Im z^3
    for (const auto& h : checks) {
      double oracle = pushforward_area_integral(phi, h, 512, 512);
      CHECK(std::abs(oracle - fitted.act(h)) < 1e-6);
    }
    CHECK(quadrature_residual(phi, fitted, harmonic_basis5()) < 1e-6);
  }
  SUBCASE("rotation invariance of the disk identity") {
    rational_map disk(cpoly{cx(0), cx(1)});
    quadrature_data data;
    data.nodes.push_back({cx(0, 0), kPi, 0, 0});
    // h = x rotated by 30 degrees: cos t x + sin t y
    double t = kPi / 6;
    poly2q rot = mono(1, 0, 1).scaled(rational(866025403784439LL, 1000000000000000LL)) +
                 mono(0, 1, 1).scaled(rational(1, 2));
    double r0 = quadrature_residual(disk, data, {mono(1, 0, 1)});
    double r1 = quadrature_residual(disk, data, {rot});
    CHECK(std::abs(r0 - r1) < 1e-10);
    (void)t;
  }
  SUBCASE("non-harmonic test function is rejected") {
    rational_map disk(cpoly{cx(0), cx(1)});
    quadrature_data data;
    data.nodes.push_back({cx(0, 0), kPi, 0, 0});
    CHECK_THROWS(quadrature_residual(disk, data, {mono(2, 0, 1)}));
  }
}

TEST_CASE("meromorphy report") {
  SUBCASE("identity map: S(z) = 1/z with one pole at 0") {
    auto info = meromorphy_report(rational_map(cpoly{cx(0), cx(1)}));
    CHECK(info.kind == "meromorphic");
    REQUIRE(info.pullback_poles.size() == 1);
    CHECK(std::abs(info.pullback_poles[0].location) < 1e-12);
    CHECK(info.pushforward_poles[0] == cx(0, 0));
  }
  SUBCASE("cardioid 0.3: pullback pole of order 2 at 0") {
    auto info = meromorphy_report(cardioid(0.3));
    REQUIRE(info.pullback_poles.size() == 1);
    CHECK(info.pullback_poles[0].order == 2);
    CHECK(info.kind == "meromorphic");
  }
  SUBCASE("non-circular ellipse routes to the monodromy probe") {
    auto info = meromorphy_report(ellipse_spec(2.0, 1.0));
    CHECK(info.kind == "branched");
    CHECK(info.mismatch > 1e-3);
    nlohmann::json j = info.to_json();
    CHECK(j.at("kind") == "branched");
  }
}
