#pragma once

#include "igenkrylov/prior.hpp"
#include "igenkrylov/types.hpp"

namespace igenkrylov {

/// min_y ||M y - beta1 e1||^2 + lambda^2 ||y||^2 for a (k+1) x k matrix M,
/// with the SVD M = P diag(sigma) W^T computed once at construction.
class ProjectedProblem {
 public:
  ProjectedProblem(Matrix m, double beta1);

  Index k() const noexcept { return m_.cols(); }
  const Matrix& M() const noexcept { return m_; }
  double beta1() const noexcept { return beta1_; }

  const Vector& singular_values() const noexcept { return sigma_; }
  double sigma_max() const noexcept { return sigma_.size() ? sigma_[0] : 0.0; }
  /// Left singular factor applied to beta1 e1: the first k entries are the
  /// coefficients on the singular directions, the last one is the part of
  /// beta1 e1 outside range(M).
  const Vector& projected_rhs() const noexcept { return bhat_; }
  const Matrix& right_factor() const noexcept { return w_; }
  const Matrix& left_factor() const noexcept { return p_; }
  /// Singular values at or below this are treated as zero (minimum-norm solutions).
  double rank_tolerance() const noexcept { return 1e-12 * sigma_max(); }

  /// Tikhonov solution y(lambda) through the SVD filter factors.
  Vector solve(double lambda) const;
  /// ||M y(lambda) - beta1 e1||_2 from the SVD, no explicit product.
  double residual_norm(double lambda) const;
  double solution_norm(double lambda) const;

 private:
  Matrix m_;
  double beta1_;
  Vector sigma_;
  Matrix p_;
  Matrix w_;
  Vector bhat_;
};

struct SolveOutcome {
  Vector y;
  double lambda_used = 0.0;
  double projected_residual_norm = 0.0;  ///< ||M y - beta1 e1||_2
};

SolveOutcome projected_tikhonov(const ProjectedProblem& prob, double lambda);

/// ||M y - beta1 e1||_2 by explicit product.
double projected_residual(const Matrix& m, double beta1, const Vector& y);

/// s = mu + Q (V y), with a single covariance product.
Vector recover_solution(const PriorModel& prior, const Eigen::Ref<const Matrix>& v,
                        const Vector& y);

}  // namespace igenkrylov
