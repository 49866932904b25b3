#pragma once

#include <vector>

#include "cubic/forms.hpp"

namespace cubic {

// 2(x0^2 - x1^2 - 2x2^2)(x0^2 - 2x1^2 - x2^2) - (4x1^2 - x0^2)(4x2^2 - x0^2), four ovals
TernaryForm four_oval_quartic();
// a^2 x0^2 - x1^2 with a^2 = 1 - sqrt(112)/14
TernaryForm quartic_tangent_quadric();
// x1^6 + x2^6 - x0^6
TernaryForm tv_screen_sextic();
// x1^2 + x2^2 - x0^2
TernaryForm unit_circle();

struct NoLowerSetReport {
  Divisor divisor;                          // of the tangent quadric on the quartic
  std::vector<Eigen::Vector2d> tangencies;  // affine (x1, x2)
  std::vector<Eigen::Vector2d> expected;    // (±a, ±sqrt(1 - 3 sqrt7 / 14))
  double max_point_error = 0;
  bool all_double = false;
  NonnegReport printed_nonneg;  // a^2 x0^2 - x1^2 as printed
  NonnegReport nonneg;          // x1^2 - a^2 x0^2
  int kernel_dim_three = 0;
  int kernel_dim_four = 0;
  double kernel_gap = 0;  // distance between the two kernels
  bool same_kernel = false;
  bool lower_set_violated = false;
};

NoLowerSetReport reproduce_nolowerset();

struct SexticReport {
  Divisor divisor;
  Divisor real_divisor;
  std::vector<Eigen::Vector3d> real_points;
  std::vector<Eigen::Vector3d> expected;
  double max_point_error = 0;
  bool real_part_doubled = false;
  bool complex_pair = false;
  std::vector<Eigen::Vector3cd> complex_points;
  NonnegReport nonneg;
  int kernel_dim = 0;
  bool extreme_ray = false;
};

SexticReport reproduce_sextic();

}  // namespace cubic
