#pragma once

#include <cstdint>
#include <vector>

#include "cubic/decompose.hpp"

namespace cubic {

struct AtomicFunctional {
  MomentFunctional L;
  std::vector<CurvePoint> atoms;
  std::vector<double> weights;
};

// n affine atoms drawn uniformly in parameter over all components, weights in [0.5, 1.5]
AtomicFunctional random_atomic_functional(const PlaneCubic& c, int d, int n, std::uint64_t seed);
// 3d distinct atoms whose sum is not 2-torsion (an interior point of the moment cone);
// with sep > 0 the atoms also keep pairwise projective distance >= sep and |w0| >= sep
AtomicFunctional random_interior_functional(const PlaneCubic& c, int d, std::uint64_t seed, double sep = 0);

struct CounterexampleReport {
  MomentFunctional L;
  std::vector<CurvePoint> atoms;  // on the oval, summing to T2
  QForm q;                        // nonnegative on the oval
  CurvePoint B;                   // on the unbounded branch, q(B) < 0
  double eps = 0;
  double q_at_B = 0;
  double certificate_value = 0;  // L(q) = eps q(B)
  bool degenerate = false;       // eps == 0
  int halvings = 0;
  DecomposeResult k_short;  // budget 3d
  DecomposeResult k_long;   // budget 3d + 1
  bool passes(double fail_threshold = 1e-3) const;
};

CounterexampleReport caratheodory_counterexample(const PlaneCubic& c, int d = 1, std::uint64_t seed = 1,
                                                 double eps = 1e-2, const DecomposeOptions& opts = {});

struct EscapeReport {
  PlaneCubic original;
  PlaneCubic transformed;
  MomentFunctional L;             // on the original curve
  MomentFunctional L_transformed; // re-expressed on the transformed curve
  std::vector<CurvePoint> atoms_a, atoms_b;
  std::vector<double> weights_a;
  std::vector<InfinityPoint> infinity;
  int real_points_at_infinity = 0;
  double margin = 0;  // infinity margin used for both budgets
  int redraws = 0;
  DecomposeResult k_short, k_long;
  bool passes(double fail_threshold = 1e-3) const;
};

const std::vector<double>& default_escape_margins();
// Both budgets run on the transformed curve at the largest margin from `margins` for which
// the 4-atom fit succeeds; an empty list means opts.infinity_margin.
EscapeReport infinity_escape_example(const PlaneCubic& c, std::uint64_t seed, const DecomposeOptions& opts = {},
                                     const std::vector<double>& margins = default_escape_margins());

}  // namespace cubic
