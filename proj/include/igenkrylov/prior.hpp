#pragma once

#include <memory>

#include "igenkrylov/types.hpp"

namespace igenkrylov {

/// Matérn covariance C(r) = variance * 2^(1-nu)/Gamma(nu) * (sqrt(2 nu) alpha r)^nu
///                          * K_nu(sqrt(2 nu) alpha r).
///
/// alpha is an inverse length: a correlation length ell maps to alpha = 1/ell.
struct MaternKernel {
  double nu = 1.5;
  double alpha = 1.0;
  double variance = 1.0;

  static MaternKernel from_length(double nu, double ell, double variance = 1.0);
  void validate() const;
};

/// Kernel value at distance r >= 0. Uses closed forms for nu in {1/2, 3/2, 5/2}
/// and the modified Bessel function of the second kind otherwise.
double matern_eval(const MaternKernel& kernel, double r);

/// Same as matern_eval but always through the Bessel-function route.
double matern_eval_bessel(const MaternKernel& kernel, double r);

/// Regular n1 x n2 grid of cell centres on [0,1]^2 (n2 == 1 gives a 1D grid
/// on [0,1]). Point (i, j) has coordinates ((i+0.5)/n1, (j+0.5)/n2) and linear
/// index i + j*n1, i.e. the column-major stacking used for images.
struct Grid {
  Index n1 = 1;
  Index n2 = 1;

  static Grid square(Index n) { return {n, n}; }
  static Grid line(Index n) { return {n, 1}; }

  Index size() const noexcept { return n1 * n2; }
  double h1() const noexcept { return 1.0 / static_cast<double>(n1); }
  double h2() const noexcept { return n2 > 1 ? 1.0 / static_cast<double>(n2) : 0.0; }
  void validate() const;
};

inline constexpr Index kDefaultDenseLimit = 4096;

/// Dense covariance matrix Q_ij = C(|x_i - x_j|) over the grid points.
Matrix build_dense_cov(const Grid& grid, const MaternKernel& kernel,
                       Index dense_limit = kDefaultDenseLimit);

/// Symmetric positive (semi)definite covariance operator Q, accessed through
/// products only.
class CovarianceOperator {
 public:
  enum class Backend { identity, dense, fft_bttb };

  explicit CovarianceOperator(Index n);
  virtual ~CovarianceOperator() = default;

  Index size() const noexcept { return n_; }
  virtual Backend backend() const noexcept = 0;

  /// Q x. Checks length and finiteness.
  Vector apply(const Vector& x) const;

 protected:
  virtual Vector do_apply(const Vector& x) const = 0;

 private:
  Index n_;
};

using CovariancePtr = std::shared_ptr<const CovarianceOperator>;

class IdentityCovariance final : public CovarianceOperator {
 public:
  explicit IdentityCovariance(Index n) : CovarianceOperator(n) {}
  Backend backend() const noexcept override { return Backend::identity; }

 protected:
  Vector do_apply(const Vector& x) const override { return x; }
};

/// Explicit symmetric matrix (grid kernel matrix or any user-supplied SPD matrix).
class DenseCovariance final : public CovarianceOperator {
 public:
  explicit DenseCovariance(Matrix q);
  DenseCovariance(const Grid& grid, const MaternKernel& kernel,
                  Index dense_limit = kDefaultDenseLimit);

  Backend backend() const noexcept override { return Backend::dense; }
  const Matrix& matrix() const noexcept { return q_; }

 protected:
  Vector do_apply(const Vector& x) const override { return q_ * x; }

 private:
  Matrix q_;
};

/// Stationary-kernel covariance on a regular grid. The block-Toeplitz matrix is
/// embedded in a (2 n1 - 1) x (2 n2 - 1) block-circulant matrix whose spectrum
/// is computed once with a 2D real FFT; each product costs two FFTs.
class FftCovariance final : public CovarianceOperator {
 public:
  FftCovariance(const Grid& grid, const MaternKernel& kernel);
  ~FftCovariance() override;
  FftCovariance(const FftCovariance&) = delete;
  FftCovariance& operator=(const FftCovariance&) = delete;

  Backend backend() const noexcept override { return Backend::fft_bttb; }
  const Grid& grid() const noexcept { return grid_; }

  /// Eigenvalues of the embedding (diagnostics only; may hold tiny negatives).
  const Vector& embedding_spectrum() const noexcept { return symbol_; }

 protected:
  Vector do_apply(const Vector& x) const override;

 private:
  struct Plans;

  Grid grid_;
  Index e1_;
  Index e2_;
  Vector symbol_;
  std::unique_ptr<Plans> plans_;
};

/// One-shot FFT covariance product.
Vector fft_cov_apply(const Grid& grid, const MaternKernel& kernel, const Vector& x);

/// Gaussian noise with covariance R = sigma^2 I.
class NoiseModel {
 public:
  NoiseModel(double sigma, Index m);

  double sigma() const noexcept { return sigma_; }
  Index size() const noexcept { return m_; }

  Vector apply_Rinv(const Vector& x) const;
  Vector apply_R(const Vector& x) const;
  /// u^T R^{-1} v.
  double inner(const Vector& u, const Vector& v) const;

 private:
  double sigma_;
  double inv_var_;
  Index m_;
};

/// sqrt(x^T W x) for a symmetric positive definite weight W.
/// Throws NumericalError when the quadratic form is below -1e-10 ||x||^2.
double weighted_norm(const Vector& x, const CovarianceOperator& q);
double weighted_norm(const Vector& x, const NoiseModel& noise);  // R^{-1} weight
double weighted_norm(const Vector& x, const Matrix& w);

/// Prior s ~ N(mu, lambda^-2 Q).
struct PriorModel {
  Vector mu;
  CovariancePtr cov;
  double lambda_scale = 1.0;

  PriorModel(Vector mean, CovariancePtr q, double lambda = 1.0);
  static PriorModel identity(Index n);

  Index size() const noexcept { return mu.size(); }
  const CovarianceOperator& Q() const { return *cov; }
};

}  // namespace igenkrylov
