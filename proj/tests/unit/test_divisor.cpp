#include <doctest.h>

#include <cmath>

#include "cubic/forms.hpp"

using namespace cubic;

namespace {

PlaneCubic disc() { return new_weierstrass(-1, RealPair{0, 1}); }
PlaneCubic conn() { return new_weierstrass(0, ComplexPair{0, 1}); }

bool contains(const Divisor& D, const CurvePoint& P, int mult) {
  for (const auto& e : D.entries())
    if (e.real && (e.point.real() - P.working()).norm() < 1e-7 && e.mult == mult) return true;
  return false;
}

}  // namespace

TEST_CASE("secant line meets the curve in P, Q and -(P+Q)") {
  for (const auto& c : {disc(), conn()}) {
    const auto pts = sample_real_locus(c, 8, std::nullopt, true, 21);
    for (size_t i = 0; i + 1 < pts.size(); i += 2) {
      const auto& P = pts[i];
      const auto& Q = pts[i + 1];
      // a nearly vertical secant sends the third point towards O, where the group law loses accuracy
      if (std::abs(neg(c, add(c, P, Q)).working()[0]) < 1e-2) continue;
      const auto D = intersection_divisor(c.working_equation(), TernaryForm::linear(line_through(c, P, Q)));
      CHECK(D.degree() == 3);
      CHECK(D.totally_real());
      CHECK(contains(D, P, 1));
      CHECK(contains(D, Q, 1));
      CHECK(contains(D, neg(c, add(c, P, Q)), 1));
      CHECK(divisor_sum(c, D).is_identity());
    }
  }
}

TEST_CASE("tangent multiplicities") {
  const auto c = disc();
  // the line at infinity is the inflectional tangent at O
  const auto D = intersection_divisor(c.working_equation(), TernaryForm::linear(Eigen::Vector3d(1, 0, 0)));
  REQUIRE(D.entries().size() == 1);
  CHECK(D.entries()[0].mult == 3);
  CHECK(contains(D, c.identity(), 3));
  // x = 0 is tangent at T2 and passes through O
  const auto V = intersection_divisor(c.working_equation(), TernaryForm::linear(Eigen::Vector3d(0, 1, 0)));
  CHECK(contains(V, c.point(0, 0), 2));
  CHECK(contains(V, c.identity(), 1));
}

TEST_CASE("conic with non-real intersections") {
  const auto c = disc();
  TernaryForm circle(2);
  circle.coeffs()[monomial_index({2, 0, 0})] = -4;
  circle.coeffs()[monomial_index({0, 2, 0})] = 1;
  circle.coeffs()[monomial_index({0, 0, 2})] = 1;
  const auto D = intersection_divisor(c.working_equation(), circle);
  CHECK(D.degree() == 6);
  int complex_entries = 0;
  for (const auto& e : D.entries()) {
    const Eigen::Vector3cd p = e.point;
    CHECK(std::abs(c.working_equation()(p)) < 1e-8);
    CHECK(std::abs(circle(p)) < 1e-8);
    if (!e.real) ++complex_entries;
  }
  CHECK(complex_entries > 0);
  CHECK_FALSE(D.totally_real());
  CHECK(real_part(D).degree() == 6 - complex_entries);
}

TEST_CASE("common component is rejected") {
  const auto c = disc();
  TernaryForm multiple = c.working_equation();
  CHECK_THROWS_AS(intersection_divisor(c.working_equation(), multiple), Error);
}

TEST_CASE("face divisor classification") {
  const auto c = disc();
  const auto P = c.point(2, std::sqrt(6.0));
  const auto Q = c.point(-0.5, std::sqrt(0.375));
  Divisor two;
  two.add(P);
  two.add(Q);
  auto r = face_divisor_check(c, two, 1);
  CHECK(r.is_face_divisor);
  CHECK(r.face_dim == 2);

  Divisor t2;
  t2.add(c.point(0, 0), 3);
  r = face_divisor_check(c, t2, 1);
  CHECK_FALSE(r.is_face_divisor);
  CHECK(r.quadric_exists);
  CHECK(r.torsion_class == TorsionClass::T2);

  // closing P + Q to T1
  Divisor t1 = two;
  t1.add(add(c, c.point(-1, 0), neg(c, add(c, P, Q))));
  r = face_divisor_check(c, t1, 1);
  CHECK(r.is_face_divisor);
  CHECK(r.face_dim == 1);
  CHECK_FALSE(r.is_square);

  Divisor generic = two;
  generic.add(c.point(3, std::sqrt(24.0)));
  r = face_divisor_check(c, generic, 1);
  CHECK_FALSE(r.is_face_divisor);
  CHECK_FALSE(r.quadric_exists);
}

TEST_CASE("the quadric for 3 T2 has a sixfold zero at T2") {
  const auto c = disc();
  Divisor D;
  D.add(c.point(0, 0), 3);
  const auto ker = interpolate_double_vanishing(c, D, 2);
  REQUIRE(ker.size() == 1);
  // along x = -y^2 + O(y^6) near T2, q must scale like y^6
  auto q_near = [&](double y) {
    const auto P = c.project(-y * y, y);
    return std::abs(ker[0](P.working()));
  };
  const double r = q_near(0.1) / q_near(0.05);
  CHECK(r == doctest::Approx(64).epsilon(0.1));
  CHECK(nonnegativity_check(c, ker[0]).nonneg == false);
}

TEST_CASE("face dimension formula") {
  CHECK(face_dimension(FaceKind::Cubic, 1, 2) == 2);
  CHECK(face_dimension(FaceKind::Cubic, 2, 1) == 10);
  CHECK(face_dimension(FaceKind::Rational, 3, 1) == 5);
  CHECK_THROWS_AS(face_dimension(FaceKind::Cubic, 1, 3), Error);
}
