#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "igenkrylov/projected.hpp"
#include "igenkrylov/prior.hpp"
#include "igenkrylov/types.hpp"

namespace igenkrylov {

/// How the Tikhonov parameter of the projected problem is chosen each iteration.
struct RegRule {
  enum class Kind { none, fixed, optimal, dp, wgcv };
  enum class OmegaMode { fixed, adaptive };

  Kind kind = Kind::none;
  std::optional<double> lambda_fixed;
  double nu_dp = 1.0;
  /// Noise norm in the units of the projected residual, i.e. ||eps||_{R^-1}.
  std::optional<double> noise_norm;
  double omega = 1.0;
  OmegaMode omega_mode = OmegaMode::fixed;

  static RegRule none() { return {}; }
  static RegRule fixed(double lambda);
  static RegRule optimal();
  static RegRule dp(double noise_norm, double nu = 1.0);
  static RegRule wgcv(double omega = 1.0, OmegaMode mode = OmegaMode::fixed);

  void validate() const;
};

std::string_view to_string(RegRule::Kind kind);
RegRule::Kind parse_reg_kind(std::string_view name);

struct LambdaChoice {
  double lambda = 0.0;
  Vector y;
  /// WGCV weight actually used (NaN for the other rules).
  double omega = 0.0;
  /// Non-empty when the rule hit a boundary of its search range.
  std::string note;
};

inline constexpr int kLambdaGridPoints = 50;
inline constexpr double kLambdaFloor = 1e-12;    // times sigma_1(M)
inline constexpr double kLambdaCeiling = 10.0;   // times sigma_1(M)
inline constexpr double kGoldenRelWidth = 1e-4;
inline constexpr double kDpRelTol = 1e-6;

/// Logarithmic grid on [1e-12 sigma_1, 10 sigma_1].
std::vector<double> lambda_grid(double sigma_max, int points = kLambdaGridPoints);

/// lambda minimizing ||s(lambda) - s_true||_2 with s(lambda) = mu + QV y(lambda).
/// qv is Q V_k (the decomposition keeps it cached, so probes need no covariance
/// products).
LambdaChoice select_lambda_optimal(const ProjectedProblem& prob, const Eigen::Ref<const Matrix>& qv,
                                   const Vector& mu, const Vector& s_true);
/// Same, forming Q V_k from the basis.
LambdaChoice select_lambda_optimal(const ProjectedProblem& prob, const Eigen::Ref<const Matrix>& v,
                                   const PriorModel& prior, const Vector& s_true);

/// Discrepancy principle: ||M y(lambda) - beta1 e1|| = nu_dp * noise_norm,
/// solved by bisection on log(lambda).
LambdaChoice select_lambda_dp(const ProjectedProblem& prob, const RegRule& rule);

/// Weighted GCV objective
///   ||M y - beta1 e1||^2 / trace(I_{k+1} - omega M (M^T M + lambda^2 I)^{-1} M^T)^2.
double wgcv_objective(const ProjectedProblem& prob, double lambda, double omega);

/// Weight for adaptive WGCV at one iteration: the omega for which the WGCV
/// derivative vanishes at lambda = smallest nonzero singular value, capped at 1.
double adaptive_omega_estimate(const ProjectedProblem& prob);

/// WGCV minimizer. In adaptive mode the per-iteration estimates are appended to
/// omega_history and their mean is used as the weight.
LambdaChoice select_lambda_wgcv(const ProjectedProblem& prob, const RegRule& rule,
                                std::vector<double>* omega_history = nullptr);

/// Minimizes f over the grid, then refines by golden section on log(lambda)
/// in the cell around the best grid point. Never returns a point worse than
/// the best grid point.
template <class F>
double minimize_on_grid(const std::vector<double>& grid, F&& f);

}  // namespace igenkrylov

#include "igenkrylov/regparam_impl.hpp"
