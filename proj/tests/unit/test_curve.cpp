#include <doctest.h>

#include <cmath>
#include <random>

#include "cubic/curve.hpp"

using namespace cubic;

namespace {

PlaneCubic disc() { return new_weierstrass(-1, RealPair{0, 1}); }
PlaneCubic conn() { return new_weierstrass(0, ComplexPair{0, 1}); }

// chord slope and Vieta, written against the monic cubic x^3 + A x^2 + B x + C directly
std::pair<double, double> vieta_add(double A, double x1, double y1, double x2, double y2, double B) {
  const double lam = x1 == x2 ? (3 * x1 * x1 + 2 * A * x1 + B) / (2 * y1) : (y2 - y1) / (x2 - x1);
  const double x3 = lam * lam - A - x1 - x2;
  return {x3, -(y1 + lam * (x3 - x1))};
}

}  // namespace

TEST_CASE("coefficients of the monic cubic") {
  const auto d = disc().data();
  CHECK(d.A == doctest::Approx(0));
  CHECK(d.B == doctest::Approx(-1));
  CHECK(d.C == doctest::Approx(0));
  const auto c = conn().data();
  CHECK(c.B == doctest::Approx(1));
  CHECK(c.f(2.0) == doctest::Approx(10));
}

TEST_CASE("root validation") {
  CHECK_THROWS_AS(new_weierstrass(0, RealPair{0, 1}), Error);
  CHECK_THROWS_AS(new_weierstrass(1, RealPair{0, 2}), Error);
  CHECK_THROWS_AS(new_weierstrass(0, ComplexPair{1, 0}), Error);
  try {
    new_weierstrass(2, RealPair{0, 1});
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::OrderViolation);
  }
}

TEST_CASE("topology") {
  CHECK(topology(disc()).kind == TopologyKind::TwoComponents);
  CHECK(topology(disc()).components.size() == 2);
  CHECK(topology(conn()).kind == TopologyKind::Connected);
}

TEST_CASE("addition agrees with the Vieta oracle") {
  for (const auto& c : {disc(), conn()}) {
    const auto pts = sample_real_locus(c, 40, std::nullopt, true, 11);
    for (size_t i = 0; i + 1 < pts.size(); i += 2) {
      const auto& P = pts[i];
      const auto& Q = pts[i + 1];
      if (std::abs(P.x() - Q.x()) < 1e-3) continue;
      const auto [x3, y3] = vieta_add(c.data().A, P.x(), P.y(), Q.x(), Q.y(), c.data().B);
      const auto R = add(c, P, Q);
      CHECK(R.x() == doctest::Approx(x3).epsilon(1e-9));
      CHECK(R.y() == doctest::Approx(y3).epsilon(1e-9));
      // doubling
      if (std::abs(P.y()) > 1e-3) {
        const auto [xd, yd] = vieta_add(c.data().A, P.x(), P.y(), P.x(), P.y(), c.data().B);
        const auto D = add(c, P, P);
        CHECK(D.x() == doctest::Approx(xd).epsilon(1e-9));
        CHECK(D.y() == doctest::Approx(yd).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("identity and inverse are exact") {
  const auto c = disc();
  const auto O = c.identity();
  for (const auto& P : sample_real_locus(c, 10, std::nullopt, true, 3)) {
    const auto R = add(c, P, O);
    CHECK(R.x() == P.x());
    CHECK(R.y() == P.y());
    CHECK(add(c, P, neg(c, P)).is_identity());
  }
  CHECK(add(c, O, O).is_identity());
}

TEST_CASE("two-torsion") {
  const auto c = disc();
  const auto T1 = c.point(-1, 0), T2 = c.point(0, 0), T3 = c.point(1, 0);
  CHECK(same_point(add(c, T1, T2), T3));
  CHECK(add(c, T2, T2).is_identity());
  const auto tt = two_torsion(c);
  CHECK(tt.all_real.size() == 4);
  REQUIRE(tt.positive.size() == 2);
  CHECK(tt.positive[0].is_identity());
  CHECK(same_point(tt.positive[1], T1));
  CHECK(classify_torsion(c, T3) == TorsionClass::T3);
  CHECK(classify_torsion(c, c.point(2, std::sqrt(6.0))) == TorsionClass::NonTorsion);

  const auto k = conn();
  const auto tk = two_torsion(k);
  CHECK(tk.all_real.size() == 2);
  CHECK(tk.positive.size() == 2);
  CHECK(classify_torsion(k, k.point(0, 0)) == TorsionClass::T1);
}

TEST_CASE("associativity on random triples") {
  for (const auto& c : {disc(), conn()}) {
    const auto pts = sample_real_locus(c, 60, std::nullopt, true, 5);
    for (size_t i = 0; i + 2 < pts.size(); i += 3) {
      const auto L = add(c, add(c, pts[i], pts[i + 1]), pts[i + 2]);
      const auto R = add(c, pts[i], add(c, pts[i + 1], pts[i + 2]));
      CHECK(same_point(L, R, 1e-7));
    }
  }
}

TEST_CASE("sampling respects components") {
  const auto c = disc();
  for (const auto& P : sample_real_locus(c, 50, "oval", true, 9)) {
    CHECK(P.x() >= -1 - 1e-12);
    CHECK(P.x() <= 0 + 1e-12);
    CHECK(c.component_of(P) == Component::Oval);
  }
  for (const auto& P : sample_real_locus(c, 50, "unbounded", true, 9)) CHECK(P.x() >= 1 - 1e-12);
  CHECK_THROWS_AS(sample_real_locus(conn(), 3, "oval", true, 1), Error);
  CHECK_THROWS_AS(sample_real_locus(c, 3, "nonsense", true, 1), Error);
}

TEST_CASE("parametrization round trip") {
  const auto c = disc();
  for (auto comp : {Component::Oval, Component::Unbounded}) {
    for (double t : {0.3, 1.1, 2.0}) {
      Eigen::Vector3d dl;
      const Eigen::Vector3d l = c.lift(comp, t, &dl);
      const auto P = c.from_weierstrass(l);
      CHECK(c.component_of(P) == comp);
      const double h = 1e-6;
      const Eigen::Vector3d fd = (c.lift(comp, t + h) - c.lift(comp, t - h)) / (2 * h);
      CHECK((fd - dl).norm() < 1e-5 * (1 + dl.norm()));
    }
  }
}

TEST_CASE("points at infinity") {
  const auto c = conn();
  const auto inf = points_at_infinity(c);
  REQUIRE(inf.size() == 1);
  CHECK(inf[0].point.is_identity());
  CHECK(inf[0].multiplicity == 3);

  const auto P = c.point(1, std::sqrt(2.0)), Q = c.point(2, std::sqrt(10.0));
  const auto t = transform_line_to_infinity(c, P, Q);
  CHECK(std::abs(t.from_weierstrass(P.weierstrass()).working()[0]) < 1e-12);
  CHECK(std::abs(t.from_weierstrass(Q.weierstrass()).working()[0]) < 1e-12);
  int real = 0;
  for (const auto& ip : points_at_infinity(t)) real += ip.multiplicity;
  CHECK(real == 3);
  CHECK_THROWS_AS(transform_line_to_infinity(c, P, P), Error);
}

TEST_CASE("off-curve input") {
  CHECK_THROWS_AS(disc().point(0.5, 0.5), Error);
  const auto c = disc();
  const auto P = c.project(2.0, 2.4);
  CHECK(c.residual(P.x(), P.y()) < 1e-12);
}
