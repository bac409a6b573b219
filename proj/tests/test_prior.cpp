#include <gtest/gtest.h>

#include <cmath>

#include <Eigen/Eigenvalues>

#include "igenkrylov/errors.hpp"
#include "igenkrylov/prior.hpp"
#include "test_util.hpp"

using namespace igenkrylov;
using namespace testutil;

namespace {

// K_nu(x) = int_0^inf exp(-x cosh t) cosh(nu t) dt, composite Simpson.
double bessel_k_quadrature(double nu, double x) {
  const double upper = std::acosh(std::max(1.0, 800.0 / x)) + 2.0;
  const int steps = 20000;
  const double h = upper / steps;
  double sum = 0.0;
  for (int i = 0; i <= steps; ++i) {
    const double t = i * h;
    const double w = (i == 0 || i == steps) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    sum += w * std::exp(-x * std::cosh(t)) * std::cosh(nu * t);
  }
  return sum * h / 3.0;
}

double matern_oracle(double nu, double alpha, double r) {
  const double x = std::sqrt(2.0 * nu) * alpha * r;
  return std::pow(2.0, 1.0 - nu) / std::tgamma(nu) * std::pow(x, nu) *
         bessel_k_quadrature(nu, x);
}

}  // namespace

TEST(Matern, UnitVarianceAtZero) {
  for (double nu : {0.5, 1.5, 2.5, 0.8, 3.3}) {
    EXPECT_DOUBLE_EQ(matern_eval({nu, 7.0, 1.0}, 0.0), 1.0);
  }
}

TEST(Matern, HalfIsExponential) {
  const MaternKernel k{0.5, 2.0, 1.0};
  for (double r : {0.1, 1.0, 3.0}) EXPECT_NEAR(matern_eval(k, r), std::exp(-2.0 * r), 1e-12);
}

TEST(Matern, ThreeHalvesClosedForm) {
  const double x = std::sqrt(3.0) * 0.5;
  EXPECT_NEAR(matern_eval({1.5, 1.0, 1.0}, 0.5), (1.0 + x) * std::exp(-x), 1e-14);
  EXPECT_NEAR(matern_eval({1.5, 1.0, 1.0}, 0.5), matern_oracle(1.5, 1.0, 0.5), 1e-9);
}

TEST(Matern, BesselRouteMatchesQuadrature) {
  for (double nu : {0.5, 0.8, 1.5, 2.2, 2.5}) {
    for (double r : {0.05, 0.3, 1.0, 2.0}) {
      const MaternKernel k{nu, 1.7, 1.0};
      EXPECT_NEAR(matern_eval_bessel(k, r), matern_oracle(nu, 1.7, r), 1e-9)
          << "nu=" << nu << " r=" << r;
      EXPECT_NEAR(matern_eval(k, r), matern_eval_bessel(k, r), 1e-12);
    }
  }
}

TEST(Matern, NonincreasingInDistance) {
  for (double nu : {0.5, 1.5, 2.5, 1.2}) {
    const MaternKernel k{nu, 3.0, 1.0};
    double prev = matern_eval(k, 0.0);
    for (int i = 1; i < 100; ++i) {
      const double v = matern_eval(k, i / 99.0);  // r up to 3 / alpha
      EXPECT_LE(v, prev + 1e-15);
      prev = v;
    }
  }
}

TEST(Matern, LengthScaleMapsToInverseAlpha) {
  const auto k = MaternKernel::from_length(1.5, 0.01);
  EXPECT_DOUBLE_EQ(k.alpha, 100.0);
  EXPECT_THROW(MaternKernel::from_length(1.5, 0.0), InvalidParameterError);
  EXPECT_THROW((MaternKernel{-1.0, 1.0, 1.0}.validate()), InvalidParameterError);
}

TEST(DenseCov, SmallCases) {
  const MaternKernel k{1.5, 2.0, 1.0};
  const Matrix one = build_dense_cov(Grid::square(1), k);
  ASSERT_EQ(one.rows(), 1);
  EXPECT_DOUBLE_EQ(one(0, 0), 1.0);
  const Matrix two = build_dense_cov(Grid::line(2), k);
  EXPECT_NEAR(two(0, 1), matern_eval(k, 0.5), 1e-15);
  EXPECT_EQ(two(0, 1), two(1, 0));
}

TEST(DenseCov, PositiveSemidefinite) {
  const Matrix q = build_dense_cov(Grid::square(8), MaternKernel::from_length(1.5, 0.01));
  Eigen::SelfAdjointEigenSolver<Matrix> es(q);
  EXPECT_GE(es.eigenvalues().minCoeff(), -1e-10);
}

TEST(DenseCov, CapacityLimit) {
  EXPECT_THROW(build_dense_cov(Grid::square(65), MaternKernel{}), CapacityError);
}

TEST(FftCov, FirstColumnOnSmallGrid) {
  const Grid g = Grid::square(4);
  const MaternKernel k = MaternKernel::from_length(1.5, 0.3);
  FftCovariance q(g, k);
  const Matrix dense = build_dense_cov(g, k);
  Vector e1 = Vector::Zero(16);
  e1[0] = 1.0;
  EXPECT_LE((q.apply(e1) - dense.col(0)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(FftCov, MatchesDenseOnManyGrids) {
  for (const Grid g : {Grid::square(16), Grid{5, 7}, Grid::line(33), Grid::square(32)}) {
    const MaternKernel k = MaternKernel::from_length(1.5, 0.1);
    FftCovariance fft(g, k);
    DenseCovariance dense(g, k);
    for (unsigned s = 0; s < 50; ++s) {
      const Vector x = random_vector(g.size(), 100 + s);
      EXPECT_LE(rel_diff(fft.apply(x), dense.apply(x)), 1e-10);
    }
  }
}

TEST(FftCov, Symmetric) {
  FftCovariance q(Grid::square(20), MaternKernel::from_length(2.5, 0.2));
  const Vector x = random_vector(400, 1);
  const Vector y = random_vector(400, 2);
  EXPECT_LE(std::abs(x.dot(q.apply(y)) - q.apply(x).dot(y)), 1e-10 * x.norm() * y.norm());
}

TEST(FftCov, TinyLengthGivesIdentity) {
  FftCovariance q(Grid::square(12), MaternKernel{1.5, 1e6, 1.0});
  const Vector x = random_vector(144, 3);
  EXPECT_LE((q.apply(x) - x).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(FftCov, FreeFunctionAndChecks) {
  const Grid g = Grid::square(6);
  const MaternKernel k = MaternKernel::from_length(0.5, 0.2);
  const Vector x = random_vector(36, 4);
  EXPECT_LE(rel_diff(fft_cov_apply(g, k, x), build_dense_cov(g, k) * x), 1e-12);
  FftCovariance q(g, k);
  EXPECT_THROW(q.apply(Vector::Zero(35)), DimensionError);
}

TEST(NoiseModel, Products) {
  NoiseModel r1(1.0, 2);
  EXPECT_EQ(r1.apply_Rinv((Vector(2) << 2, 3).finished()), (Vector(2) << 2, 3).finished());
  NoiseModel r2(2.0, 2);
  EXPECT_EQ(r2.apply_Rinv((Vector(2) << 4, 8).finished()), (Vector(2) << 1, 2).finished());
  const Vector x = random_vector(2, 5);
  EXPECT_NEAR(r2.inner(x, x), x.squaredNorm() / 4.0, 1e-15);
  EXPECT_LE(rel_diff(r2.apply_R(r2.apply_Rinv(x)), x), 1e-15);
  EXPECT_THROW(NoiseModel(0.0, 3), InvalidParameterError);
}

TEST(WeightedNorm, Cases) {
  const Vector x = random_vector(5, 6);
  EXPECT_NEAR(weighted_norm(x, IdentityCovariance(5)), x.norm(), 1e-15);
  EXPECT_NEAR(weighted_norm(x, NoiseModel(3.0, 5)), x.norm() / 3.0, 1e-15);
  const Matrix w = random_spd(5, 7);
  double quad = 0.0;
  for (Index i = 0; i < 5; ++i)
    for (Index j = 0; j < 5; ++j) quad += x[i] * w(i, j) * x[j];
  EXPECT_NEAR(weighted_norm(x, w), std::sqrt(quad), 1e-12);
}
