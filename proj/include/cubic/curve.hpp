#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cubic/error.hpp"
#include "cubic/poly.hpp"

namespace cubic {

struct RealPair {
  double a2, a3;
};
struct ComplexPair {
  double re, im;
};
using RootPair = std::variant<RealPair, ComplexPair>;

struct WeierstrassData {
  double a1 = 0;
  RootPair pair = RealPair{0, 0};
  double A = 0, B = 0, C = 0;

  static WeierstrassData make(double a1, const RootPair& pair);
  bool real_pair() const { return std::holds_alternative<RealPair>(pair); }
  std::complex<double> a2() const;
  std::complex<double> a3() const;
  double f(double x) const { return ((x + A) * x + B) * x + C; }
  double df(double x) const { return (3 * x + 2 * A) * x + B; }
  // a2+a3-2a1 and (a2-a1)(a3-a1), real in both cases
  double p_plus_r() const;
  double p_times_r() const;
};

enum class TopologyKind { Connected, TwoComponents };
enum class Component { Oval, Unbounded, Whole };

const char* component_name(Component c);
std::optional<Component> parse_component(const std::string& label);

struct Topology {
  TopologyKind kind;
  std::vector<Component> components;
  // x-interval of each component, upper bound +inf when it contains O
  std::vector<std::pair<double, double>> intervals;
};

class CurvePoint {
 public:
  CurvePoint() = default;
  static CurvePoint identity(const Eigen::Matrix3d& M);
  static CurvePoint affine(double x, double y, const Eigen::Matrix3d& M);

  bool is_identity() const { return at_infinity_; }
  double x() const { return x_; }
  double y() const { return y_; }
  const Eigen::Vector3d& working() const { return working_; }
  // (1 : x : y), or (0 : 0 : 1) for O
  Eigen::Vector3d weierstrass() const;

 private:
  bool at_infinity_ = true;
  double x_ = 0, y_ = 0;
  Eigen::Vector3d working_ = Eigen::Vector3d::UnitZ();
};

bool same_point(const CurvePoint& p, const CurvePoint& q, double tol = 1e-8);

struct TorsionSet {
  std::vector<CurvePoint> all_real;
  std::vector<CurvePoint> positive;
};

enum class TorsionClass { NotApplicable, O, T1, T2, T3, NonTorsion };
const char* torsion_name(TorsionClass t);

struct InfinityPoint {
  CurvePoint point;
  int multiplicity;
};

class PlaneCubic {
 public:
  PlaneCubic() = default;
  PlaneCubic(const WeierstrassData& w, const Eigen::Matrix3d& transform);

  const WeierstrassData& data() const { return w_; }
  const Eigen::Matrix3d& transform() const { return M_; }
  const Eigen::Matrix3d& inverse_transform() const { return Minv_; }
  // normalized to unit coefficient norm
  const TernaryForm& working_equation() const { return h_work_; }
  TernaryForm weierstrass_equation() const;
  // a form in Weierstrass coordinates pushed to working coordinates
  TernaryForm to_working(const TernaryForm& f) const { return f.substitute(Minv_); }

  // on-curve residual |y^2 - f(x)| / (1 + |x|^3)
  double residual(double x, double y) const;
  CurvePoint point(double x, double y, double tol = 1e-6) const;
  CurvePoint identity() const { return CurvePoint::identity(M_); }
  CurvePoint from_weierstrass(const Eigen::Vector3d& p, double tol = 1e-6) const;
  CurvePoint from_working(const Eigen::Vector3d& w, double tol = 1e-6) const;
  // snaps a nearby point onto the curve by Newton steps along the gradient
  CurvePoint project(double x, double y) const;

  bool same_model(const PlaneCubic& o, double tol = 1e-12) const;

  // smooth periodic parametrizations of the real components in Weierstrass
  // projective coordinates; period 2*pi for the oval and pi otherwise
  Eigen::Vector3d lift(Component comp, double t, Eigen::Vector3d* dlift = nullptr) const;
  double period(Component comp) const;
  double parameter_of(Component comp, const CurvePoint& p) const;
  Component component_of(const CurvePoint& p) const;

 private:
  WeierstrassData w_;
  Eigen::Matrix3d M_ = Eigen::Matrix3d::Identity();
  Eigen::Matrix3d Minv_ = Eigen::Matrix3d::Identity();
  TernaryForm h_work_;
};

PlaneCubic new_weierstrass(double a1, const RootPair& pair,
                           const Eigen::Matrix3d& transform = Eigen::Matrix3d::Identity());
Topology topology(const PlaneCubic& c);

CurvePoint add(const PlaneCubic& c, const CurvePoint& P, const CurvePoint& Q);
CurvePoint neg(const PlaneCubic& c, const CurvePoint& P);
CurvePoint sum_points(const PlaneCubic& c, const std::vector<CurvePoint>& pts);
TorsionSet two_torsion(const PlaneCubic& c);
TorsionClass classify_torsion(const PlaneCubic& c, const CurvePoint& s, double tol = 1e-7);

std::vector<CurvePoint> sample_real_locus(const PlaneCubic& c, int n, std::optional<Component> component,
                                          bool affine_only, std::uint64_t seed);
std::vector<CurvePoint> sample_real_locus(const PlaneCubic& c, int n, const std::string& component_label,
                                          bool affine_only, std::uint64_t seed);

PlaneCubic transform_line_to_infinity(const PlaneCubic& c, const CurvePoint& P, const CurvePoint& Q);
std::vector<InfinityPoint> points_at_infinity(const PlaneCubic& c);

// the line through two distinct points, or the tangent at P when P == Q,
// as coefficients in working coordinates
Eigen::Vector3d line_through(const PlaneCubic& c, const CurvePoint& P, const CurvePoint& Q);

}  // namespace cubic
