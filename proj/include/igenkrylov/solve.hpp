#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "igenkrylov/bidiag.hpp"
#include "igenkrylov/linop.hpp"
#include "igenkrylov/prior.hpp"
#include "igenkrylov/projected.hpp"
#include "igenkrylov/regparam.hpp"

namespace igenkrylov {

struct SolveConfig {
  int max_iter = 50;
  RegRule rule;
  /// Enables relative errors and the optimal rule.
  std::optional<Vector> s_true;
  /// Iterations at which s_k is kept; the final iterate is always kept.
  std::vector<int> checkpoints;
};

/// Wall-clock seconds per phase.
struct PhaseTimings {
  double decomposition = 0.0;
  double projected_solve = 0.0;
  double parameter_selection = 0.0;
  double recovery = 0.0;
};

/// Per-iteration history of one hybrid solve. All arrays have one entry per
/// completed iteration (index 0 is iteration 1).
struct ReconRecord {
  std::vector<double> relerr;  ///< empty when no s_true was given
  std::vector<double> lambda;
  std::vector<double> proj_residual;
  std::vector<double> omega;  ///< WGCV weight, NaN for other rules
  Vector final_solution;
  std::map<int, Vector> snapshots;
  std::string stop_reason;
  PhaseTimings timings;

  int iterations() const noexcept { return static_cast<int>(lambda.size()); }
  /// 1-based iteration of the smallest relative error.
  int argmin_iter() const;
  double min_relerr() const;
  double final_relerr() const;
};

/// Runs the decomposition for up to max_iter steps and, at every step, solves
/// the projected Tikhonov problem with the parameter picked by config.rule.
/// The data d is shifted to b = d - A mu with the exact operator. Breakdown
/// ends the run early with the reason recorded.
ReconRecord run_iterative_solve(DecompositionMode mode, const InexactOperator& a,
                                const PriorModel& prior, const NoiseModel& noise, const Vector& d,
                                const SolveConfig& config);

/// Several parameter rules over one shared decomposition. config.rule is
/// ignored; one record is returned per entry of rules.
std::vector<ReconRecord> run_iterative_solve(DecompositionMode mode, const InexactOperator& a,
                                             const PriorModel& prior, const NoiseModel& noise,
                                             const Vector& d, const SolveConfig& config,
                                             const std::vector<RegRule>& rules);

}  // namespace igenkrylov
