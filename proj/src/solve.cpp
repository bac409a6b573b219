#include "igenkrylov/solve.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "igenkrylov/errors.hpp"

namespace igenkrylov {

namespace {

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

struct RuleRun {
  RegRule rule;
  ReconRecord record;
  std::vector<double> omega_history;
};

}  // namespace

int ReconRecord::argmin_iter() const {
  if (relerr.empty()) return 0;
  return static_cast<int>(std::min_element(relerr.begin(), relerr.end()) - relerr.begin()) + 1;
}

double ReconRecord::min_relerr() const {
  if (relerr.empty()) return std::numeric_limits<double>::quiet_NaN();
  return *std::min_element(relerr.begin(), relerr.end());
}

double ReconRecord::final_relerr() const {
  if (relerr.empty()) return std::numeric_limits<double>::quiet_NaN();
  return relerr.back();
}

std::vector<ReconRecord> run_iterative_solve(DecompositionMode mode, const InexactOperator& a,
                                             const PriorModel& prior, const NoiseModel& noise,
                                             const Vector& d, const SolveConfig& config,
                                             const std::vector<RegRule>& rules) {
  if (config.max_iter < 1) throw ConfigError("max_iter must be at least 1");
  if (rules.empty()) throw ConfigError("at least one regularization rule is required");
  if (d.size() != a.rows()) throw DimensionError("run_iterative_solve: data length mismatch");
  if (prior.size() != a.cols()) throw DimensionError("run_iterative_solve: prior size mismatch");
  for (const auto& r : rules) {
    r.validate();
    if (r.kind == RegRule::Kind::optimal && !config.s_true) {
      throw ConfigError("the optimal rule needs the true solution");
    }
  }
  const bool track_error = config.s_true.has_value();
  double s_true_norm = 0.0;
  if (track_error) {
    if (config.s_true->size() != a.cols()) throw DimensionError("s_true length mismatch");
    s_true_norm = config.s_true->norm();
    if (!(s_true_norm > 0.0)) throw DegenerateInputError("s_true is zero");
  }

  std::vector<RuleRun> runs;
  runs.reserve(rules.size());
  for (const auto& r : rules) runs.push_back({r, {}, {}});

  Vector b = d;
  if (!prior.mu.isZero(0.0)) b -= a.exact().apply(prior.mu);

  Stopwatch init_clock;
  BidiagState state = igenGK_init(mode, a, prior.Q(), noise, b, config.max_iter);
  double decomposition_time = init_clock.seconds();

  std::string stop_reason = "max_iter";
  for (int it = 1; it <= config.max_iter; ++it) {
    const int k_before = state.k();
    Stopwatch step_clock;
    const StepStatus status = igenGK_step(state, a, prior.Q(), noise);
    decomposition_time += step_clock.seconds();
    if (state.k() == k_before) {
      stop_reason = state.stop_reason();
      break;
    }

    const ProjectedProblem prob(Matrix(state.M()), state.beta1());
    for (auto& run : runs) {
      auto& rec = run.record;
      Stopwatch select_clock;
      LambdaChoice choice;
      choice.omega = std::numeric_limits<double>::quiet_NaN();
      switch (run.rule.kind) {
        case RegRule::Kind::none:
          choice.lambda = 0.0;
          break;
        case RegRule::Kind::fixed:
          choice.lambda = *run.rule.lambda_fixed;
          break;
        case RegRule::Kind::optimal:
          choice = select_lambda_optimal(prob, state.QVk(), prior.mu, *config.s_true);
          break;
        case RegRule::Kind::dp:
          choice = select_lambda_dp(prob, run.rule);
          break;
        case RegRule::Kind::wgcv:
          choice = select_lambda_wgcv(prob, run.rule, &run.omega_history);
          break;
      }
      rec.timings.parameter_selection += select_clock.seconds();

      Stopwatch solve_clock;
      const SolveOutcome outcome = projected_tikhonov(prob, choice.lambda);
      rec.timings.projected_solve += solve_clock.seconds();

      Stopwatch recover_clock;
      Vector s = recover_solution(prior, state.Vk(), outcome.y);
      rec.timings.recovery += recover_clock.seconds();
      if (!s.allFinite()) throw NumericalError("recovered solution is not finite");

      rec.lambda.push_back(outcome.lambda_used);
      rec.proj_residual.push_back(outcome.projected_residual_norm);
      rec.omega.push_back(choice.omega);
      if (track_error) rec.relerr.push_back((s - *config.s_true).norm() / s_true_norm);
      if (std::find(config.checkpoints.begin(), config.checkpoints.end(), it) !=
          config.checkpoints.end()) {
        rec.snapshots[it] = s;
      }
      rec.final_solution = std::move(s);
    }
    if (status == StepStatus::breakdown) {
      stop_reason = state.stop_reason();
      break;
    }
  }

  std::vector<ReconRecord> out;
  out.reserve(runs.size());
  for (auto& run : runs) {
    run.record.stop_reason = stop_reason;
    run.record.timings.decomposition = decomposition_time;
    if (run.record.iterations() > 0) {
      run.record.snapshots[run.record.iterations()] = run.record.final_solution;
    } else {
      run.record.final_solution = prior.mu;
    }
    out.push_back(std::move(run.record));
  }
  return out;
}

ReconRecord run_iterative_solve(DecompositionMode mode, const InexactOperator& a,
                                const PriorModel& prior, const NoiseModel& noise, const Vector& d,
                                const SolveConfig& config) {
  return std::move(run_iterative_solve(mode, a, prior, noise, d, config, {config.rule}).front());
}

}  // namespace igenkrylov
