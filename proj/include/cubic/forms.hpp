#pragma once

#include <optional>

#include "cubic/curve.hpp"
#include "cubic/divisor.hpp"
#include "cubic/poly.hpp"

namespace cubic {

// even-degree form in working coordinates, unit coefficient norm
class QForm : public TernaryForm {
 public:
  QForm() = default;
  explicit QForm(const TernaryForm& f, bool fix_sign = true);
};

// a basis of forms of a fixed degree modulo the curve equation
struct FormSpace {
  int degree = 0;
  std::vector<TernaryForm> basis;
  TernaryForm combine(const Eigen::VectorXd& coords) const;
};

// Weierstrass monomials x0^a x1^b x2^c with b <= 2, pushed to working coordinates
FormSpace cubic_form_space(const PlaneCubic& c, int degree);
// monomials not divisible by x_k^n, where x_k^n has the largest coefficient in the curve
FormSpace curve_form_space(const TernaryForm& curve_eq, int degree);

// first `order` Taylor coefficients of each basis form along a local curve parametrization at p
Eigen::MatrixXd jet_matrix(const TernaryForm& curve_eq, const FormSpace& space, const Eigen::Vector3d& p, int order);

// kernel of the double-vanishing conditions, orthonormal in the coordinates of `space`
std::vector<Eigen::VectorXd> double_vanishing_kernel(const TernaryForm& curve_eq, const FormSpace& space,
                                                     const std::vector<std::pair<Eigen::Vector3d, int>>& points,
                                                     double rank_tol = 1e-7);

std::vector<QForm> interpolate_double_vanishing(const PlaneCubic& c, const Divisor& D, int twod);
std::vector<QForm> interpolate_double_vanishing(const TernaryForm& curve_eq, const Divisor& D, int twod);

struct ExtremeQuadric {
  QForm form;
  bool nonnegative = false;
  TorsionClass torsion_class = TorsionClass::NotApplicable;
};

ExtremeQuadric extreme_quadric(const PlaneCubic& c, const std::vector<CurvePoint>& atoms, int d);

// q at the unit-norm working lift of a parameter value on a component
double value_on_component(const PlaneCubic& c, const TernaryForm& q, Component comp, double t);

struct NonnegReport {
  bool nonneg = false;
  bool even_multiplicities = false;
  Divisor real_zero_divisor;
  std::optional<Eigen::Vector3d> witness;  // working coordinates
  double min_sampled_value = 0;
  double max_sampled_value = 0;
  int samples = 0;
};

NonnegReport nonnegativity_check(const PlaneCubic& c, const TernaryForm& q);
NonnegReport nonnegativity_check(const TernaryForm& curve_eq, const TernaryForm& q);

struct Certificate {
  std::vector<CurvePoint> atoms;  // in the order used by the construction
  Eigen::Vector3d l_a1a2, l_sum_a3, l_vertical, l_t1, l_o;  // working coordinates
  TernaryForm aux_numerator;                                // x2^2 lO^2 + (a2+a3-2a1) lO^2 lT1^2
  TernaryForm aux_denominator;                              // lT1^2 + (a2-a1)(a3-a1) lO^2
  double p_plus_r = 0, p_times_r = 0;
  bool manifestly_nonnegative = false;  // both auxiliary coefficients nonnegative
  QForm q;
  double alpha = 0;
  double residual = 0;
  int samples_used = 0;
};

Certificate artin_certificate(const PlaneCubic& c, const std::vector<CurvePoint>& atoms, std::uint64_t seed = 17);
// q*den - alpha*num at a working point
double certificate_identity_error(const Certificate& cert, const Eigen::Vector3d& w, double* scale = nullptr);

struct SeparatingQuadric {
  QForm form;
  double delta = 0;
  QForm q2, q3;
  CurvePoint a2, a3;
};

SeparatingQuadric separating_quadric(const PlaneCubic& c, const std::vector<CurvePoint>& B);

}  // namespace cubic
