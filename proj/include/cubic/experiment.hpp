#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cubic/decompose.hpp"

namespace cubic {

struct ExperimentConfig {
  int d = 1;
  int trials = 200;
  std::uint64_t seed = 7;
  int starts = 64;
  int atoms_per_trial = 0;  // 0: 3d + 2 random atoms
  MomentTolerances tol;
  double fit_tol = 1e-8;
  int threads = 0;
};

struct TrialRecord {
  int atoms = -1;  // smallest budget that reproduced L, -1 if none up to 3d + 1
  double residual = 0;
  int rank = 0;
  double seconds = 0;
};

struct ExperimentReport {
  TopologyKind topology = TopologyKind::Connected;
  int predicted = 0;  // Caratheodory number 3d or 3d + 1
  std::vector<TrialRecord> records;
  std::map<int, int> histogram;
  int unresolved = 0;
  bool pass = false;
};

// minimal atom counts of random moment functionals, compared against the predicted number
ExperimentReport caratheodory_experiment(const PlaneCubic& c, const ExperimentConfig& cfg);

// "atoms,count" lines for k = 1 .. predicted, then unresolved
std::string histogram_csv(const ExperimentReport& r);

}  // namespace cubic
