#include "igenkrylov/regparam.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "igenkrylov/errors.hpp"

namespace igenkrylov {

RegRule RegRule::fixed(double lambda) {
  RegRule r;
  r.kind = Kind::fixed;
  r.lambda_fixed = lambda;
  r.validate();
  return r;
}

RegRule RegRule::optimal() {
  RegRule r;
  r.kind = Kind::optimal;
  return r;
}

RegRule RegRule::dp(double noise_norm, double nu) {
  RegRule r;
  r.kind = Kind::dp;
  r.noise_norm = noise_norm;
  r.nu_dp = nu;
  r.validate();
  return r;
}

RegRule RegRule::wgcv(double omega, OmegaMode mode) {
  RegRule r;
  r.kind = Kind::wgcv;
  r.omega = omega;
  r.omega_mode = mode;
  r.validate();
  return r;
}

void RegRule::validate() const {
  switch (kind) {
    case Kind::fixed:
      if (!lambda_fixed) throw ConfigError("fixed regularization needs lambda_fixed");
      if (!(*lambda_fixed >= 0.0) || !std::isfinite(*lambda_fixed)) {
        throw ConfigError("lambda_fixed must be finite and nonnegative");
      }
      break;
    case Kind::dp:
      if (!noise_norm) throw ConfigError("discrepancy principle needs noise_norm");
      if (!(*noise_norm >= 0.0) || !std::isfinite(*noise_norm)) {
        throw ConfigError("noise_norm must be finite and nonnegative");
      }
      if (!(nu_dp > 0.0)) throw ConfigError("nu_dp must be positive");
      break;
    case Kind::wgcv:
      if (!(omega > 0.0 && omega <= 1.0)) throw ConfigError("WGCV omega must lie in (0, 1]");
      break;
    case Kind::none:
    case Kind::optimal:
      break;
  }
}

std::string_view to_string(RegRule::Kind kind) {
  switch (kind) {
    case RegRule::Kind::none: return "none";
    case RegRule::Kind::fixed: return "fixed";
    case RegRule::Kind::optimal: return "opt";
    case RegRule::Kind::dp: return "dp";
    case RegRule::Kind::wgcv: return "wgcv";
  }
  return "unknown";
}

RegRule::Kind parse_reg_kind(std::string_view name) {
  if (name == "none") return RegRule::Kind::none;
  if (name == "fixed") return RegRule::Kind::fixed;
  if (name == "opt" || name == "optimal") return RegRule::Kind::optimal;
  if (name == "dp") return RegRule::Kind::dp;
  if (name == "wgcv") return RegRule::Kind::wgcv;
  throw ConfigError("unknown regularization rule '" + std::string(name) + "'");
}

std::vector<double> lambda_grid(double sigma_max, int points) {
  if (!(sigma_max > 0.0)) throw NumericalError("lambda grid needs a positive sigma_1");
  if (points < 2) throw InvalidParameterError("lambda grid needs at least two points");
  const double lo = std::log(kLambdaFloor * sigma_max);
  const double hi = std::log(kLambdaCeiling * sigma_max);
  std::vector<double> grid(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    grid[static_cast<std::size_t>(i)] = std::exp(lo + (hi - lo) * i / (points - 1));
  }
  grid.front() = kLambdaFloor * sigma_max;
  grid.back() = kLambdaCeiling * sigma_max;
  return grid;
}

LambdaChoice select_lambda_optimal(const ProjectedProblem& prob, const Eigen::Ref<const Matrix>& qv,
                                   const Vector& mu, const Vector& s_true) {
  if (s_true.size() == 0) throw ConfigError("optimal rule needs the true solution");
  if (qv.cols() != prob.k() || qv.rows() != s_true.size() || mu.size() != s_true.size()) {
    throw DimensionError("select_lambda_optimal: dimension mismatch");
  }
  const Vector offset = mu - s_true;
  auto f = [&](double lambda) { return (qv * prob.solve(lambda) + offset).squaredNorm(); };

  LambdaChoice out;
  out.omega = std::numeric_limits<double>::quiet_NaN();
  out.lambda = minimize_on_grid(lambda_grid(prob.sigma_max()), f);
  out.y = prob.solve(out.lambda);
  return out;
}

LambdaChoice select_lambda_optimal(const ProjectedProblem& prob, const Eigen::Ref<const Matrix>& v,
                                   const PriorModel& prior, const Vector& s_true) {
  if (v.rows() != prior.size()) throw DimensionError("select_lambda_optimal: basis/prior mismatch");
  Matrix qv(v.rows(), v.cols());
  for (Index j = 0; j < v.cols(); ++j) qv.col(j) = prior.Q().apply(v.col(j));
  return select_lambda_optimal(prob, qv, prior.mu, s_true);
}

LambdaChoice select_lambda_dp(const ProjectedProblem& prob, const RegRule& rule) {
  if (rule.kind != RegRule::Kind::dp) throw ConfigError("select_lambda_dp needs a dp rule");
  rule.validate();
  const double target = rule.nu_dp * *rule.noise_norm;

  LambdaChoice out;
  out.omega = std::numeric_limits<double>::quiet_NaN();
  const auto grid = lambda_grid(prob.sigma_max());
  double lo = grid.front();
  double hi = grid.back();

  const double r0 = prob.residual_norm(0.0);
  if (r0 > target * (1.0 + kDpRelTol)) {
    out.lambda = 0.0;
    out.note = "dp: residual at lambda=0 already exceeds the target";
  } else if (prob.residual_norm(lo) >= target) {
    out.lambda = lo;
  } else if (prob.residual_norm(hi) <= target) {
    out.lambda = hi;
    out.note = "dp: target not reached inside the search range";
  } else {
    double a = std::log(lo);
    double b = std::log(hi);
    double mid = 0.5 * (a + b);
    for (int it = 0; it < 400; ++it) {
      mid = 0.5 * (a + b);
      const double r = prob.residual_norm(std::exp(mid));
      if (std::abs(r - target) <= kDpRelTol * target) break;
      if (r < target) {
        a = mid;
      } else {
        b = mid;
      }
      if (b - a < 1e-15) break;
    }
    out.lambda = std::exp(mid);
  }
  out.y = prob.solve(out.lambda);
  return out;
}

double wgcv_objective(const ProjectedProblem& prob, double lambda, double omega) {
  const double tol = prob.rank_tolerance();
  const double lam2 = lambda * lambda;
  const auto& s = prob.singular_values();
  double filt = 0.0;
  for (Index i = 0; i < s.size(); ++i) {
    if (s[i] <= tol) continue;
    filt += s[i] * s[i] / (s[i] * s[i] + lam2);
  }
  const double trace = static_cast<double>(prob.k() + 1) - omega * filt;
  const double r = prob.residual_norm(lambda);
  return r * r / (trace * trace);
}

double adaptive_omega_estimate(const ProjectedProblem& prob) {
  const auto& s = prob.singular_values();
  const auto& bhat = prob.projected_rhs();
  const double tol = prob.rank_tolerance();
  double smin = 0.0;
  for (Index i = s.size() - 1; i >= 0; --i) {
    if (s[i] > tol) {
      smin = s[i];
      break;
    }
  }
  if (!(smin > 0.0)) return 1.0;

  const double a2 = smin * smin;
  double t1 = 0.0;  // sum s^2 / (s^2 + a^2)
  double s3 = 0.0;  // sum s^2 b^2 / (s^2 + a^2)^3
  double s4 = 0.0;  // sum s^2 / (s^2 + a^2)^2
  for (Index i = 0; i < s.size(); ++i) {
    if (s[i] <= tol) continue;
    const double si2 = s[i] * s[i];
    const double tt = 1.0 / (si2 + a2);
    t1 += si2 * tt;
    s3 += si2 * bhat[i] * bhat[i] * tt * tt * tt;
    s4 += si2 * tt * tt;
  }
  const double r = prob.residual_norm(smin);
  const double m = static_cast<double>(prob.k() + 1);
  const double omega = m * a2 * s3 / (t1 * a2 * s3 + s4 * r * r);
  if (!std::isfinite(omega) || !(omega > 0.0)) return 1.0;
  return std::min(1.0, omega);
}

LambdaChoice select_lambda_wgcv(const ProjectedProblem& prob, const RegRule& rule,
                                std::vector<double>* omega_history) {
  if (rule.kind != RegRule::Kind::wgcv) throw ConfigError("select_lambda_wgcv needs a wgcv rule");
  rule.validate();
  double omega = rule.omega;
  if (rule.omega_mode == RegRule::OmegaMode::adaptive) {
    const double est = adaptive_omega_estimate(prob);
    if (omega_history) {
      omega_history->push_back(est);
      omega = std::accumulate(omega_history->begin(), omega_history->end(), 0.0) /
              static_cast<double>(omega_history->size());
    } else {
      omega = est;
    }
  }
  LambdaChoice out;
  out.omega = omega;
  out.lambda = minimize_on_grid(lambda_grid(prob.sigma_max()),
                                [&](double lambda) { return wgcv_objective(prob, lambda, omega); });
  out.y = prob.solve(out.lambda);
  return out;
}

}  // namespace igenkrylov
