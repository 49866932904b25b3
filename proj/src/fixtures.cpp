#include "cubic/fixtures.hpp"

#include <cmath>

namespace cubic {

namespace {

TernaryForm var(int i) { return TernaryForm::linear(Eigen::Vector3d::Unit(i)); }
TernaryForm sq(const TernaryForm& f) { return f * f; }

double nearest(const std::vector<Eigen::Vector2d>& pts, const Eigen::Vector2d& p) {
  double m = 1e300;
  for (const auto& q : pts) m = std::min(m, (p - q).norm());
  return m;
}

// largest distance from a vector of one span to the other span (both orthonormal)
double span_gap(const std::vector<Eigen::VectorXd>& a, const std::vector<Eigen::VectorXd>& b) {
  if (a.empty() || b.empty()) return a.size() == b.size() ? 0.0 : 1.0;
  Eigen::MatrixXd B(b[0].size(), b.size());
  for (size_t i = 0; i < b.size(); ++i) B.col(i) = b[i];
  double g = 0;
  for (const auto& v : a) g = std::max(g, (v - B * (B.transpose() * v)).norm());
  return g;
}

}  // namespace

TernaryForm four_oval_quartic() {
  const TernaryForm x0 = var(0), x1 = var(1), x2 = var(2);
  return 2.0 * ((sq(x0) - sq(x1) - 2.0 * sq(x2)) * (sq(x0) - 2.0 * sq(x1) - sq(x2))) -
         (4.0 * sq(x1) - sq(x0)) * (4.0 * sq(x2) - sq(x0));
}

TernaryForm quartic_tangent_quadric() {
  const double a2 = 1 - std::sqrt(112.0) / 14;
  return a2 * sq(var(0)) - sq(var(1));
}

TernaryForm tv_screen_sextic() {
  const TernaryForm x0 = var(0), x1 = var(1), x2 = var(2);
  return sq(x1) * sq(x1) * sq(x1) + sq(x2) * sq(x2) * sq(x2) - sq(x0) * sq(x0) * sq(x0);
}

TernaryForm unit_circle() { return sq(var(1)) + sq(var(2)) - sq(var(0)); }

NoLowerSetReport reproduce_nolowerset() {
  NoLowerSetReport r;
  const TernaryForm F = four_oval_quartic(), q = quartic_tangent_quadric();
  r.divisor = intersection_divisor(F, q);
  const double a = std::sqrt(1 - std::sqrt(112.0) / 14), b = std::sqrt(1 - 3 * std::sqrt(7.0) / 14);
  for (double s : {1.0, -1.0})
    for (double t : {1.0, -1.0}) r.expected.emplace_back(s * a, t * b);
  r.all_double = r.divisor.entries().size() == 4;
  Divisor first_three;
  for (const auto& e : r.divisor.entries()) {
    r.all_double = r.all_double && e.real && e.mult == 2;
    const Eigen::Vector3d p = e.point.real();
    r.tangencies.emplace_back(p[1] / p[0], p[2] / p[0]);
    r.max_point_error = std::max(r.max_point_error, nearest(r.expected, r.tangencies.back()));
    if (first_three.degree() < 3) first_three.add(e.point, 1, true);
  }
  // the printed quadric is nonpositive on the ovals (they lie in |x1| >= a); its negative is the
  // nonnegative form with the same zero divisor
  r.printed_nonneg = nonnegativity_check(F, q);
  r.nonneg = nonnegativity_check(F, -1.0 * q);
  Divisor all_four;
  for (const auto& e : r.divisor.entries()) all_four.add(e.point, 1, e.real);
  const FormSpace space = curve_form_space(F, 2);
  auto points = [](const Divisor& D) {
    std::vector<std::pair<Eigen::Vector3d, int>> p;
    for (const auto& e : D.entries()) p.emplace_back(e.point.real(), e.mult);
    return p;
  };
  const auto k3 = double_vanishing_kernel(F, space, points(first_three));
  const auto k4 = double_vanishing_kernel(F, space, points(all_four));
  r.kernel_dim_three = static_cast<int>(k3.size());
  r.kernel_dim_four = static_cast<int>(k4.size());
  r.kernel_gap = std::max(span_gap(k3, k4), span_gap(k4, k3));
  r.same_kernel = k3.size() == k4.size() && r.kernel_gap < 1e-6;
  // every nonnegative quadric doubly vanishing at three tangencies also vanishes at the fourth
  r.lower_set_violated = r.all_double && r.nonneg.nonneg && r.same_kernel;
  return r;
}

SexticReport reproduce_sextic() {
  SexticReport r;
  const TernaryForm h = tv_screen_sextic(), q = unit_circle();
  r.divisor = intersection_divisor(h, q);
  r.real_divisor = real_part(r.divisor);
  r.expected = {{1, 0, 1}, {1, 0, -1}, {1, 1, 0}, {1, -1, 0}};
  for (auto& e : r.expected) e.normalize();
  r.real_part_doubled = r.real_divisor.entries().size() == 4;
  for (const auto& e : r.divisor.entries()) {
    if (e.real) {
      r.real_part_doubled = r.real_part_doubled && e.mult == 2;
      const Eigen::Vector3d p = normalize_projective(e.point.real());
      r.real_points.push_back(p);
      double m = 1e300;
      for (const auto& x : r.expected) m = std::min(m, projective_distance(p, x));
      r.max_point_error = std::max(r.max_point_error, m);
    } else {
      r.complex_points.push_back(e.point);
    }
  }
  // one conjugate pair (0 : 1 : ±i), each point double
  if (r.complex_points.size() == 2) {
    const Eigen::Vector3cd target(0, 1, std::complex<double>(0, 1));
    const Eigen::Vector3cd conj = target.conjugate();
    const auto& ents = r.divisor.entries();
    bool doubled = true;
    for (const auto& e : ents)
      if (!e.real) doubled = doubled && e.mult == 2;
    const double d0 = std::min(complex_point_distance(r.complex_points[0], normalize_complex_point(target)),
                               complex_point_distance(r.complex_points[0], normalize_complex_point(conj)));
    const double d1 = std::min(complex_point_distance(r.complex_points[1], normalize_complex_point(target)),
                               complex_point_distance(r.complex_points[1], normalize_complex_point(conj)));
    r.complex_pair = doubled && d0 < 1e-6 && d1 < 1e-6;
  }
  r.nonneg = nonnegativity_check(h, q);
  const FormSpace space = curve_form_space(h, 2);
  std::vector<std::pair<Eigen::Vector3d, int>> pts;
  for (const auto& p : r.real_points) pts.emplace_back(p, 1);
  r.kernel_dim = static_cast<int>(double_vanishing_kernel(h, space, pts).size());
  r.extreme_ray = r.nonneg.nonneg && r.kernel_dim == 1;
  return r;
}

}  // namespace cubic
