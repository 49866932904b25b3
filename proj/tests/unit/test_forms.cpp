#include <doctest.h>

#include <cmath>

#include "cubic/forms.hpp"

using namespace cubic;

namespace {

PlaneCubic disc() { return new_weierstrass(-1, RealPair{0, 1}); }
PlaneCubic conn() { return new_weierstrass(0, ComplexPair{0, 1}); }

// q at a point along with its derivative along the curve, by central differences on the parametrization
std::pair<double, double> value_and_slope(const PlaneCubic& c, const TernaryForm& q, const CurvePoint& P) {
  const Component comp = c.component_of(P);
  const double t = c.parameter_of(comp, P), h = 1e-5;
  auto at = [&](double s) {
    const Eigen::Vector3d w = c.transform() * c.lift(comp, s);
    return q(Eigen::Vector3d(w.normalized()));
  };
  return {at(t), (at(t + h) - at(t - h)) / (2 * h)};
}

std::vector<CurvePoint> closing(const PlaneCubic& c, const CurvePoint& target, std::uint64_t seed) {
  for (std::uint64_t s = seed;; ++s) {
    auto pts = sample_real_locus(c, 2, std::nullopt, true, s);
    const auto last = add(c, target, neg(c, sum_points(c, pts)));
    if (last.is_identity() || same_point(last, pts[0], 1e-3) || same_point(last, pts[1], 1e-3) ||
        same_point(pts[0], pts[1], 1e-3))
      continue;
    pts.push_back(last);
    return pts;
  }
}

}  // namespace

TEST_CASE("form spaces have dimension 3k") {
  const auto c = disc();
  for (int k = 1; k <= 6; ++k) {
    CHECK(static_cast<int>(cubic_form_space(c, k).basis.size()) == 3 * k);
    CHECK(static_cast<int>(curve_form_space(c.working_equation(), k).basis.size()) == 3 * k);
  }
}

TEST_CASE("extreme quadric vanishes doubly at its atoms") {
  const auto c = disc();
  const auto tt = two_torsion(c);
  for (int cls = 0; cls < 4; ++cls) {
    const auto atoms = closing(c, tt.all_real[cls], 40 + cls);
    const auto eq = extreme_quadric(c, atoms, 1);
    CHECK(eq.form.norm() == doctest::Approx(1));
    for (const auto& a : atoms) {
      const auto [v, dv] = value_and_slope(c, eq.form, a);
      CHECK(std::abs(v) < 1e-9);
      CHECK(std::abs(dv) < 1e-5);
    }
    CHECK(eq.nonnegative == (cls < 2));
    // brute-force sampling on both components agrees with the sign verdict
    double lo = 1e300;
    for (auto comp : {Component::Oval, Component::Unbounded})
      for (int i = 0; i < 2000; ++i) lo = std::min(lo, value_on_component(c, eq.form, comp, c.period(comp) * i / 2000.0));
    CHECK((lo > -1e-9) == (cls < 2));
  }
}

TEST_CASE("generic atoms admit no extreme quadric") {
  const auto c = conn();
  const auto pts = sample_real_locus(c, 3, std::nullopt, true, 4);
  CHECK_THROWS_AS(extreme_quadric(c, pts, 1), Error);
}

TEST_CASE("nonnegativity check") {
  const auto c = disc();
  const TernaryForm x0 = TernaryForm::linear(Eigen::Vector3d(1, 0, 0));
  const TernaryForm x1 = TernaryForm::linear(Eigen::Vector3d(0, 1, 0));
  auto r = nonnegativity_check(c, x0 * x0);
  CHECK(r.nonneg);
  CHECK(r.even_multiplicities);
  r = nonnegativity_check(c, x0 * x1);
  CHECK_FALSE(r.nonneg);
  REQUIRE(r.witness.has_value());
  CHECK((x0 * x1)(*r.witness) < 0);
  // x1 + x0 is x + 1, nonnegative on y^2 = x^3 - x since x >= -1 there
  r = nonnegativity_check(c, x0 * (x0 + x1));
  CHECK(r.nonneg);
}

TEST_CASE("Artin certificate holds at independent samples") {
  for (const auto& c : {disc(), conn()}) {
    const auto T1 = c.point(c.data().a1, 0);
    for (std::uint64_t s = 1; s <= 5; ++s) {
      const auto atoms = closing(c, T1, 100 * s);
      const auto cert = artin_certificate(c, atoms, s);
      CHECK(cert.residual < 1e-7);
      CHECK(cert.alpha > 0);
      CHECK(cert.manifestly_nonnegative);
      CHECK(std::abs(cert.l_a1a2.dot(cert.atoms[0].working())) < 1e-9);
      CHECK(std::abs(cert.l_a1a2.dot(cert.atoms[1].working())) < 1e-9);
      for (const auto& P : sample_real_locus(c, 50, std::nullopt, false, 999 + s)) {
        const Eigen::Vector3d& x = P.working();
        const double l12 = cert.l_a1a2.dot(x), ls = cert.l_sum_a3.dot(x), lv = cert.l_vertical.dot(x),
                     lt = cert.l_t1.dot(x);
        const double lhs = cert.q(x) * lv * lv * lt * lt * cert.aux_denominator(x);
        const double rhs = cert.alpha * l12 * l12 * ls * ls * cert.aux_numerator(x);
        CHECK(std::abs(lhs - rhs) <= 1e-7 * (1 + std::abs(lhs)));
      }
    }
  }
  const auto c = disc();
  CHECK_THROWS_AS(artin_certificate(c, closing(c, c.point(0, 0), 7), 1), Error);
}

TEST_CASE("separating quadric") {
  const auto c = disc();
  const auto B = sample_real_locus(c, 2, "oval", true, 8);
  const auto s = separating_quadric(c, B);
  CHECK(s.delta > 0);
  for (const auto& b : B) CHECK(std::abs(s.form(b.working())) < 1e-9);
  CHECK_THROWS_AS(separating_quadric(conn(), B), Error);
}
