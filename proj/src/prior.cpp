#include "igenkrylov/prior.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "igenkrylov/errors.hpp"

namespace igenkrylov {

namespace {

// FFTW planning is not thread safe; execution with new-array functions is.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

double scaled_distance(double dx, double dy) { return std::hypot(dx, dy); }

}  // namespace

MaternKernel MaternKernel::from_length(double nu, double ell, double variance) {
  if (!(ell > 0.0)) throw InvalidParameterError("correlation length must be positive");
  MaternKernel k{nu, 1.0 / ell, variance};
  k.validate();
  return k;
}

void MaternKernel::validate() const {
  if (!(nu > 0.0) || !std::isfinite(nu)) throw InvalidParameterError("Matern nu must be positive");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw InvalidParameterError("Matern alpha must be positive");
  }
  if (!(variance > 0.0) || !std::isfinite(variance)) {
    throw InvalidParameterError("Matern variance must be positive");
  }
}

double matern_eval_bessel(const MaternKernel& kernel, double r) {
  kernel.validate();
  if (!(r >= 0.0)) throw InvalidParameterError("distance must be nonnegative");
  const double x = std::sqrt(2.0 * kernel.nu) * kernel.alpha * r;
  // x^nu K_nu(x) -> 2^(nu-1) Gamma(nu) as x -> 0.
  if (x < 1e-12) return kernel.variance;
  if (x > 700.0) return 0.0;
  const double log_pref = (1.0 - kernel.nu) * std::log(2.0) - std::lgamma(kernel.nu);
  const double kv = std::cyl_bessel_k(kernel.nu, x);
  return kernel.variance * std::exp(log_pref + kernel.nu * std::log(x)) * kv;
}

double matern_eval(const MaternKernel& kernel, double r) {
  kernel.validate();
  if (!(r >= 0.0)) throw InvalidParameterError("distance must be nonnegative");
  if (kernel.nu == 0.5) {
    return kernel.variance * std::exp(-kernel.alpha * r);
  }
  if (kernel.nu == 1.5) {
    const double x = std::sqrt(3.0) * kernel.alpha * r;
    return kernel.variance * (1.0 + x) * std::exp(-x);
  }
  if (kernel.nu == 2.5) {
    const double x = std::sqrt(5.0) * kernel.alpha * r;
    return kernel.variance * (1.0 + x + x * x / 3.0) * std::exp(-x);
  }
  return matern_eval_bessel(kernel, r);
}

void Grid::validate() const {
  if (n1 < 1 || n2 < 1) throw InvalidParameterError("grid dimensions must be positive");
}

Matrix build_dense_cov(const Grid& grid, const MaternKernel& kernel, Index dense_limit) {
  grid.validate();
  kernel.validate();
  const Index n = grid.size();
  if (n > dense_limit) {
    throw CapacityError("dense covariance with " + std::to_string(n) +
                        " points exceeds the limit of " + std::to_string(dense_limit));
  }
  Matrix q(n, n);
  for (Index b = 0; b < n; ++b) {
    const Index ib = b % grid.n1;
    const Index jb = b / grid.n1;
    for (Index a = b; a < n; ++a) {
      const Index ia = a % grid.n1;
      const Index ja = a / grid.n1;
      const double r = scaled_distance(static_cast<double>(ia - ib) * grid.h1(),
                                       static_cast<double>(ja - jb) * grid.h2());
      const double v = matern_eval(kernel, r);
      q(a, b) = v;
      q(b, a) = v;
    }
  }
  return q;
}

// ---------------------------------------------------------------------------

CovarianceOperator::CovarianceOperator(Index n) : n_(n) {
  if (n <= 0) throw InvalidParameterError("covariance size must be positive");
}

Vector CovarianceOperator::apply(const Vector& x) const {
  if (x.size() != n_) {
    throw DimensionError("covariance apply: expected length " + std::to_string(n_) + ", got " +
                         std::to_string(x.size()));
  }
  if (!x.allFinite()) throw InvalidInputError("covariance apply: non-finite entry");
  return do_apply(x);
}

DenseCovariance::DenseCovariance(Matrix q) : CovarianceOperator(q.rows()), q_(std::move(q)) {
  if (q_.rows() != q_.cols()) throw DimensionError("covariance matrix must be square");
  if (!q_.allFinite()) throw InvalidInputError("covariance matrix has non-finite entries");
  const double asym = (q_ - q_.transpose()).norm();
  if (asym > 1e-12 * std::max(1.0, q_.norm())) {
    throw InvalidInputError("covariance matrix is not symmetric");
  }
}

DenseCovariance::DenseCovariance(const Grid& grid, const MaternKernel& kernel, Index dense_limit)
    : DenseCovariance(build_dense_cov(grid, kernel, dense_limit)) {}

struct FftCovariance::Plans {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;

  ~Plans() {
    std::lock_guard lock(fftw_planner_mutex());
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
  }
};

FftCovariance::FftCovariance(const Grid& grid, const MaternKernel& kernel)
    : CovarianceOperator(grid.size()),
      grid_(grid),
      e1_(2 * grid.n1 - 1),
      e2_(2 * grid.n2 - 1),
      plans_(std::make_unique<Plans>()) {
  grid.validate();
  kernel.validate();

  // The embedded array is stored with index i + j*e1 (i fast), i.e. a
  // row-major [e2][e1] array from FFTW's point of view.
  const Index total = e1_ * e2_;
  const Index half = e1_ / 2 + 1;
  std::vector<double> real(static_cast<std::size_t>(total));
  std::vector<fftw_complex> spec(static_cast<std::size_t>(e2_ * half));

  {
    std::lock_guard lock(fftw_planner_mutex());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    plans_->forward = fftw_plan_dft_r2c_2d(static_cast<int>(e2_), static_cast<int>(e1_),
                                           real.data(), spec.data(), flags);
    plans_->backward = fftw_plan_dft_c2r_2d(static_cast<int>(e2_), static_cast<int>(e1_),
                                            spec.data(), real.data(), flags);
  }
  if (!plans_->forward || !plans_->backward) throw NumericalError("FFTW planning failed");

  // First column of the circulant embedding: kernel at wrapped offsets.
  for (Index j = 0; j < e2_; ++j) {
    const Index dj = j < grid.n2 ? j : j - e2_;
    for (Index i = 0; i < e1_; ++i) {
      const Index di = i < grid.n1 ? i : i - e1_;
      const double r = scaled_distance(static_cast<double>(di) * grid.h1(),
                                       static_cast<double>(dj) * grid.h2());
      real[static_cast<std::size_t>(i + j * e1_)] = matern_eval(kernel, r);
    }
  }
  fftw_execute_dft_r2c(plans_->forward, real.data(), spec.data());

  // The embedded column is symmetric under index negation, so its DFT is real.
  symbol_.resize(e2_ * half);
  for (Index t = 0; t < e2_ * half; ++t) symbol_[t] = spec[static_cast<std::size_t>(t)][0];
}

FftCovariance::~FftCovariance() = default;

Vector FftCovariance::do_apply(const Vector& x) const {
  const Index total = e1_ * e2_;
  const Index half = e1_ / 2 + 1;
  std::vector<double> real(static_cast<std::size_t>(total), 0.0);
  std::vector<fftw_complex> spec(static_cast<std::size_t>(e2_ * half));

  for (Index j = 0; j < grid_.n2; ++j) {
    for (Index i = 0; i < grid_.n1; ++i) {
      real[static_cast<std::size_t>(i + j * e1_)] = x[i + j * grid_.n1];
    }
  }
  fftw_execute_dft_r2c(plans_->forward, real.data(), spec.data());
  for (Index t = 0; t < e2_ * half; ++t) {
    spec[static_cast<std::size_t>(t)][0] *= symbol_[t];
    spec[static_cast<std::size_t>(t)][1] *= symbol_[t];
  }
  fftw_execute_dft_c2r(plans_->backward, spec.data(), real.data());

  const double inv = 1.0 / static_cast<double>(total);
  Vector y(grid_.size());
  for (Index j = 0; j < grid_.n2; ++j) {
    for (Index i = 0; i < grid_.n1; ++i) {
      y[i + j * grid_.n1] = real[static_cast<std::size_t>(i + j * e1_)] * inv;
    }
  }
  return y;
}

Vector fft_cov_apply(const Grid& grid, const MaternKernel& kernel, const Vector& x) {
  return FftCovariance(grid, kernel).apply(x);
}

// ---------------------------------------------------------------------------

NoiseModel::NoiseModel(double sigma, Index m) : sigma_(sigma), inv_var_(0.0), m_(m) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw InvalidParameterError("noise sigma must be positive");
  }
  if (m <= 0) throw InvalidParameterError("noise dimension must be positive");
  inv_var_ = 1.0 / (sigma * sigma);
}

Vector NoiseModel::apply_Rinv(const Vector& x) const {
  if (x.size() != m_) throw DimensionError("noise apply: length mismatch");
  // x / sigma^2 rather than x * (1/sigma^2) so sigma = 2 divides exactly.
  return x / (sigma_ * sigma_);
}

Vector NoiseModel::apply_R(const Vector& x) const {
  if (x.size() != m_) throw DimensionError("noise apply: length mismatch");
  return (sigma_ * sigma_) * x;
}

double NoiseModel::inner(const Vector& u, const Vector& v) const {
  if (u.size() != m_ || v.size() != m_) throw DimensionError("noise inner: length mismatch");
  return u.dot(v) * inv_var_;
}

namespace {

double checked_sqrt(double quad, double xnorm2) {
  if (quad < -1e-10 * xnorm2) {
    throw NumericalError("weighted norm: quadratic form is negative (" + std::to_string(quad) +
                         "), weight is not positive definite");
  }
  return std::sqrt(std::max(quad, 0.0));
}

}  // namespace

double weighted_norm(const Vector& x, const CovarianceOperator& q) {
  if (x.size() == 0 || x.isZero(0.0)) return 0.0;
  return checked_sqrt(x.dot(q.apply(x)), x.squaredNorm());
}

double weighted_norm(const Vector& x, const NoiseModel& noise) {
  if (x.size() != noise.size()) throw DimensionError("weighted norm: length mismatch");
  return x.norm() / noise.sigma();
}

double weighted_norm(const Vector& x, const Matrix& w) {
  if (w.rows() != x.size() || w.cols() != x.size()) {
    throw DimensionError("weighted norm: weight shape mismatch");
  }
  if (x.isZero(0.0)) return 0.0;
  return checked_sqrt(x.dot(w * x), x.squaredNorm());
}

PriorModel::PriorModel(Vector mean, CovariancePtr q, double lambda)
    : mu(std::move(mean)), cov(std::move(q)), lambda_scale(lambda) {
  if (!cov) throw InvalidInputError("prior needs a covariance operator");
  if (cov->size() != mu.size()) throw DimensionError("prior mean and covariance sizes differ");
  if (!(lambda_scale > 0.0)) throw InvalidParameterError("prior precision scale must be positive");
}

PriorModel PriorModel::identity(Index n) {
  return PriorModel(Vector::Zero(n), std::make_shared<IdentityCovariance>(n));
}

}  // namespace igenkrylov
