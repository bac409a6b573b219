#include "igenkrylov/projected.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <utility>

#include "igenkrylov/errors.hpp"

namespace igenkrylov {

ProjectedProblem::ProjectedProblem(Matrix m, double beta1) : m_(std::move(m)), beta1_(beta1) {
  if (m_.cols() < 1 || m_.rows() != m_.cols() + 1) {
    throw DimensionError("projected problem needs a (k+1) x k matrix with k >= 1");
  }
  if (!m_.allFinite() || !std::isfinite(beta1_)) {
    throw NumericalError("projected problem has non-finite entries");
  }
  if (!(beta1_ >= 0.0)) throw InvalidInputError("beta1 must be nonnegative");

  Eigen::JacobiSVD<Matrix> svd(m_, Eigen::ComputeFullU | Eigen::ComputeFullV);
  sigma_ = svd.singularValues();
  p_ = svd.matrixU();
  w_ = svd.matrixV();
  bhat_ = beta1_ * p_.row(0).transpose();
}

Vector ProjectedProblem::solve(double lambda) const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw InvalidParameterError("regularization parameter must be finite and nonnegative");
  }
  const double tol = rank_tolerance();
  const double lam2 = lambda * lambda;
  Vector coeff = Vector::Zero(k());
  for (Index i = 0; i < k(); ++i) {
    const double s = sigma_[i];
    if (s <= tol) continue;
    coeff[i] = s / (s * s + lam2) * bhat_[i];
  }
  return w_ * coeff;
}

double ProjectedProblem::residual_norm(double lambda) const {
  const double tol = rank_tolerance();
  const double lam2 = lambda * lambda;
  double acc = 0.0;
  for (Index i = 0; i < k(); ++i) {
    const double s = sigma_[i];
    const double f = s <= tol ? 1.0 : lam2 / (s * s + lam2);
    acc += f * f * bhat_[i] * bhat_[i];
  }
  const double tail = bhat_[k()];
  return std::sqrt(acc + tail * tail);
}

double ProjectedProblem::solution_norm(double lambda) const {
  const double tol = rank_tolerance();
  const double lam2 = lambda * lambda;
  double acc = 0.0;
  for (Index i = 0; i < k(); ++i) {
    const double s = sigma_[i];
    if (s <= tol) continue;
    const double c = s / (s * s + lam2) * bhat_[i];
    acc += c * c;
  }
  return std::sqrt(acc);
}

double projected_residual(const Matrix& m, double beta1, const Vector& y) {
  Vector r = m * y;
  r[0] -= beta1;
  return r.norm();
}

SolveOutcome projected_tikhonov(const ProjectedProblem& prob, double lambda) {
  SolveOutcome out;
  out.y = prob.solve(lambda);
  out.lambda_used = lambda;
  out.projected_residual_norm = projected_residual(prob.M(), prob.beta1(), out.y);
  return out;
}

Vector recover_solution(const PriorModel& prior, const Eigen::Ref<const Matrix>& v,
                        const Vector& y) {
  if (v.cols() != y.size()) throw DimensionError("recover_solution: basis/coefficient mismatch");
  if (v.rows() != prior.size()) throw DimensionError("recover_solution: basis/prior mismatch");
  if (y.size() == 0) return prior.mu;
  return prior.mu + prior.Q().apply(v * y);
}

}  // namespace igenkrylov
