#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "igenkrylov/bidiag.hpp"
#include "igenkrylov/prior.hpp"
#include "igenkrylov/regparam.hpp"
#include "igenkrylov/solve.hpp"
#include "igenkrylov/tomo.hpp"

namespace igenkrylov {

inline constexpr int kSchemaVersion = 1;

/// Everything one experiment needs. Serialized as JSON with these sections:
/// problem {n, angles, nrays}, prior {nu, ell, variance, backend},
/// inexactness {beta, betas, angle_schedules, angle_iters},
/// reg_rule {kind, lambda, nu_dp, omega, omega_mode}.
struct ExperimentConfig {
  int schema_version = kSchemaVersion;
  std::string experiment = "reconstruct";

  Index n = 64;
  std::vector<double> angles = CTGeometry::default_angles();
  Index nrays = 0;  ///< 0 picks the default for n

  double prior_nu = 1.5;
  double prior_ell = 0.01;
  double prior_variance = 1.0;
  std::string prior_backend = "fft";  ///< fft | dense | identity

  double noise_level = 0.04;

  double beta = 0.0;
  std::vector<double> betas{1e-2, 1e-4, 1e-6};
  std::vector<std::pair<double, double>> angle_schedules{{1e-1, 1e-6}, {1e0, 1e-6}};
  int angle_iters = 0;  ///< 0 means max_iter

  std::string mode = "igengk";

  std::string reg = "none";
  std::optional<double> reg_lambda;
  double nu_dp = 1.0;
  double omega = 1.0;
  std::string omega_mode = "fixed";

  int max_iter = 50;
  std::uint64_t seed = 0;
  std::string output_dir = "out";

  /// Throws ConfigError on the first invalid field.
  void validate() const;
  CTGeometry geometry() const;
};

/// desk (n = 64), paper (n = 128) or paper-long (n = 128, 100 iterations).
ExperimentConfig make_preset(const std::string& name);
/// Overlays preset values onto cfg for the fields a preset controls.
void apply_preset(ExperimentConfig& cfg, const std::string& name);

/// Parses a JSON document. Missing keys keep their defaults; unknown keys and
/// wrong types are rejected.
ExperimentConfig config_from_json(const std::string& text);
std::string config_to_json(const ExperimentConfig& cfg, int indent = 2);

/// The assembled CT test problem.
struct CtProblem {
  CTGeometry geometry;
  std::shared_ptr<const RadonOperator> radon;
  Vector s_true;
  Observation obs;
  std::shared_ptr<const CovarianceOperator> cov;
  double sigma = 1.0;  ///< noise standard deviation, R = sigma^2 I
};
CtProblem build_problem(const ExperimentConfig& cfg);

/// Prior, noise model and rule for a mode: gk and igk use Q = I and R = I.
struct ModeSetup {
  PriorModel prior;
  NoiseModel noise;
  RegRule rule;
  bool inexact = false;
};
ModeSetup mode_setup(const ExperimentConfig& cfg, const CtProblem& prob, DecompositionMode mode,
                     const std::string& reg_kind);

/// Runs fn(0..count-1) on at most `workers` threads; exceptions propagate.
void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& fn);
/// Worker cap from IGENKRYLOV_THREADS, default hardware concurrency.
unsigned worker_limit();

struct RelationRow {
  double beta = 0.0;
  RelationReport report;
};
struct ScalingRow {
  double beta_hi = 0.0;
  double beta_lo = 0.0;
  std::string metric;
  double ratio = 0.0;
  double expected = 0.0;
  double rel_dev = 0.0;
};
struct VerifyResult {
  std::vector<RelationRow> rows;
  std::vector<ScalingRow> scaling;
  bool orthogonality_ok = false;
  bool scaling_ok = false;
};
inline constexpr double kOrthTol = 1e-10;
inline constexpr double kScalingTol = 0.10;

VerifyResult run_verify_relations(const ExperimentConfig& cfg, const CtProblem& prob);

ReconRecord run_reconstruct(const ExperimentConfig& cfg, const CtProblem& prob);

struct CompareResult {
  std::vector<std::string> rules;
  std::vector<ReconRecord> records;
};
CompareResult run_compare_reg(const ExperimentConfig& cfg, const CtProblem& prob);

struct AngleResult {
  ReconRecord baseline;
  std::vector<ReconRecord> runs;  ///< one per schedule, in config order
};
AngleResult run_inexact_angles(const ExperimentConfig& cfg, const CtProblem& prob);

/// Runs a command end to end, writing its files under cfg.output_dir.
/// Returns the process exit code (0 ok, 1 threshold failure).
int run_command(const ExperimentConfig& cfg);

}  // namespace igenkrylov
