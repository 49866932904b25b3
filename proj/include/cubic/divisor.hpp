#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "cubic/curve.hpp"
#include "cubic/poly.hpp"

namespace cubic {

struct DivisorEntry {
  Eigen::Vector3cd point;  // projective, normalized
  int mult = 1;
  bool real = true;
};

class Divisor {
 public:
  Divisor() = default;
  static Divisor from_points(const std::vector<CurvePoint>& pts);

  // merges with an existing entry within 1e-8
  void add(const Eigen::Vector3cd& p, int mult, bool real);
  void add(const CurvePoint& p, int mult = 1);

  const std::vector<DivisorEntry>& entries() const { return entries_; }
  int degree() const;
  bool totally_real() const;
  std::vector<Eigen::Vector3d> real_support() const;

 private:
  std::vector<DivisorEntry> entries_;
};

Eigen::Vector3cd normalize_complex_point(const Eigen::Vector3cd& p);
double complex_point_distance(const Eigen::Vector3cd& p, const Eigen::Vector3cd& q);

Divisor real_part(const Divisor& D);
bool divisor_equal(const Divisor& a, const Divisor& b, double tol = 1e-8);

struct IntersectionOptions {
  std::uint64_t seed = 0x5eed;
  int max_rotations = 8;
  double cluster_radius = 1e-6;
  double residual_tol = 1e-6;
};

Divisor intersection_divisor(const TernaryForm& curve_eq, const TernaryForm& q, const IntersectionOptions& opts = {});

struct FaceReport {
  bool is_face_divisor = false;
  int face_dim = 0;
  TorsionClass torsion_class = TorsionClass::NotApplicable;
  bool quadric_exists = false;
  bool is_square = false;
};

FaceReport face_divisor_check(const PlaneCubic& c, const Divisor& D, int d);

enum class FaceKind { Rational, Cubic };
int face_dimension(FaceKind kind, int d, int degD);

// real support of a totally real divisor as curve points (NotTotallyReal otherwise)
std::vector<std::pair<CurvePoint, int>> curve_support(const PlaneCubic& c, const Divisor& D);
CurvePoint divisor_sum(const PlaneCubic& c, const Divisor& D);

}  // namespace cubic
