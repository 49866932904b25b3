#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cubic/forms.hpp"
#include "cubic/moments.hpp"

namespace cubic {

struct DecomposeOptions {
  int starts = 64;
  std::uint64_t seed = 1;
  double tol = 1e-8;  // on the relative residual ||sum - L|| / (1 + ||L||)
  int max_iterations = 400;
  // atoms must keep |w0| >= margin in unit-norm working coordinates
  double infinity_margin = 1e-6;
  std::vector<CurvePoint> exclude;
  double exclude_radius = 1e-3;
  double disjoint_radius = 1e-4;
  int threads = 0;  // 0: OpenMP default
  int batch = 16;
  bool stop_at_first_success = true;
  bool keep_successes = false;
};

struct DecomposeResult {
  bool success = false;
  Decomposition best;
  int best_start = -1;
  int starts_run = 0;
  std::vector<std::uint64_t> seeds;
  std::vector<double> start_residuals;
  std::vector<Decomposition> successes;  // filled when keep_successes is set
};

// multistart fit with k atoms; starts run in parallel batches
DecomposeResult decompose(const PlaneCubic& c, const MomentFunctional& L, int k, const DecomposeOptions& opts = {});
// same starts executed one after another
DecomposeResult decompose_serial(const PlaneCubic& c, const MomentFunctional& L, int k,
                                 const DecomposeOptions& opts = {});

// local refinement of a given measure (no margin)
Decomposition refine_decomposition(const MomentFunctional& L, const Decomposition& start, int iterations = 60);

std::uint64_t start_seed(std::uint64_t seed, int index);

// groups decompositions with the same positive-weight atom set
std::vector<Decomposition> distinct_representations(const std::vector<Decomposition>& decs, double tol = 1e-6);
bool same_representation(const Decomposition& a, const Decomposition& b, double tol = 1e-6);

enum class ExtensionKind { Flat, AlmostFlat, None };
const char* extension_name(ExtensionKind k);

struct MembershipOptions {
  DecomposeOptions decompose;
  MomentTolerances tol;
};

struct MembershipReport {
  bool member = false;
  bool psd = false;
  int rank = 0;
  double min_eig = 0;
  std::optional<Decomposition> decomposition;
  ExtensionKind extension_kind = ExtensionKind::None;
  std::optional<QForm> certificate;  // L(q) < 0
  double certificate_value = 0;
  std::vector<std::pair<int, double>> budget_trace;  // (k, best residual)
};

MembershipReport membership(const PlaneCubic& c, const MomentFunctional& L, const MembershipOptions& opts = {});

Decomposition second_representation(const PlaneCubic& c, const MomentFunctional& L,
                                    const std::vector<CurvePoint>& atomsA, const DecomposeOptions& opts = {});

}  // namespace cubic
