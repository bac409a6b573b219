#include <gtest/gtest.h>

#include <cmath>
#include <memory>

#include "igenkrylov/errors.hpp"
#include "igenkrylov/linop.hpp"
#include "test_util.hpp"

using namespace igenkrylov;
using namespace testutil;

TEST(DenseOperator, IdentityAndSmallProducts) {
  IdentityOperator id(3);
  EXPECT_EQ(id.apply(Vector::LinSpaced(3, 1, 3)), Vector::LinSpaced(3, 1, 3));
  IdentityOperator id2(2);
  EXPECT_EQ(id2.apply_adjoint((Vector(2) << 4, 5).finished()), (Vector(2) << 4, 5).finished());

  Matrix a(2, 2);
  a << 1, 2, 3, 4;
  DenseOperator op(a);
  EXPECT_EQ(op.apply(Vector::Ones(2)), (Vector(2) << 3, 7).finished());
  EXPECT_EQ(op.apply_adjoint((Vector(2) << 1, 0).finished()), (Vector(2) << 1, 2).finished());
}

TEST(DenseOperator, AdjointMatchesNaiveOracle) {
  const Matrix a = random_matrix(7, 5, 1);
  DenseOperator op(a);
  const Vector u = random_vector(7, 2);
  const Vector v = random_vector(5, 3);
  const double lhs = naive_dot(u, naive_matvec(a, v));
  const double rhs = naive_dot(naive_matvec_t(a, u), v);
  EXPECT_NEAR(u.dot(op.apply(v)), lhs, 1e-12 * std::abs(lhs));
  EXPECT_NEAR(op.apply_adjoint(u).dot(v), rhs, 1e-12 * std::abs(rhs));
}

TEST(DenseOperator, Linearity) {
  DenseOperator op(random_matrix(9, 6, 4));
  const Vector x = random_vector(6, 5);
  const Vector y = random_vector(6, 6);
  const Vector lhs = op.apply(2.5 * x - 0.75 * y);
  const Vector rhs = 2.5 * op.apply(x) - 0.75 * op.apply(y);
  EXPECT_LE(rel_diff(lhs, rhs), 1e-12);
}

TEST(LinearOperator, RejectsBadOperands) {
  DenseOperator op(random_matrix(4, 3, 7));
  EXPECT_THROW(op.apply(Vector::Zero(4)), DimensionError);
  EXPECT_THROW(op.apply_adjoint(Vector::Zero(3)), DimensionError);
  Vector bad = Vector::Zero(3);
  bad[1] = std::nan("");
  EXPECT_THROW(op.apply(bad), InvalidInputError);
}

TEST(ComposedOperator, MatchesProductAndAdjoint) {
  const Matrix a = random_matrix(5, 4, 8);
  const Matrix b = random_matrix(4, 6, 9);
  ComposedOperator c(std::make_shared<DenseOperator>(a), std::make_shared<DenseOperator>(b));
  const Vector x = random_vector(6, 10);
  const Vector y = random_vector(5, 11);
  EXPECT_LE(rel_diff(c.apply(x), naive_matvec(a, naive_matvec(b, x))), 1e-12);
  EXPECT_NEAR(y.dot(c.apply(x)), c.apply_adjoint(y).dot(x), 1e-10 * std::abs(y.dot(c.apply(x))));
}

TEST(ScaledIdentity, AdjointConsistent) {
  ScaledIdentityOperator op(5, 3.0);
  const Vector x = random_vector(5, 12);
  EXPECT_LE(rel_diff(op.apply(x), 3.0 * x), 1e-15);
  EXPECT_LE(rel_diff(op.apply_adjoint(x), 3.0 * x), 1e-15);
}

TEST(PerturbedApply, ZeroBetaIsExact) {
  DenseOperator op(random_matrix(6, 4, 13));
  const Vector x = random_vector(4, 14);
  const Vector y = random_vector(6, 15);
  const auto model = InexactnessModel::exact();
  EXPECT_EQ(perturbed_apply(op, model, 3, x), op.apply(x));
  EXPECT_EQ(perturbed_apply_adjoint(op, model, 3, y), op.apply_adjoint(y));
  auto g0 = InexactnessModel::gaussian(0.0, 5);
  EXPECT_EQ(perturbed_apply(op, g0, 3, x), op.apply(x));
}

TEST(PerturbedApply, DeterministicPerSeedAndStep) {
  DenseOperator op(random_matrix(30, 20, 16));
  const Vector x = random_vector(20, 17);
  const auto model = InexactnessModel::gaussian(1e-2, 42);
  const Vector a1 = perturbed_apply(op, model, 4, x);
  const Vector a2 = perturbed_apply(op, model, 4, x);
  EXPECT_EQ(a1, a2);
  EXPECT_NE(a1, perturbed_apply(op, model, 5, x));
  EXPECT_NE(a1, perturbed_apply(op, InexactnessModel::gaussian(1e-2, 43), 4, x));
}

TEST(PerturbedApply, StreamedErrorMatchesMaterializedMatrix) {
  const Index m = 23;
  const Index n = 17;
  const auto model = InexactnessModel::gaussian(0.3, 99);
  const Vector x = random_vector(n, 18);
  const Vector y = random_vector(m, 19);
  const Matrix e = materialize_error(model, 2, Direction::forward, m, n);
  const Matrix f = materialize_error(model, 2, Direction::adjoint, m, n);
  EXPECT_LE(rel_diff(error_apply(model, 2, Direction::forward, m, n, x), naive_matvec(e, x)),
            1e-13);
  EXPECT_LE(rel_diff(error_apply(model, 2, Direction::adjoint, m, n, y), naive_matvec_t(f, y)),
            1e-13);
}

TEST(PerturbedApply, ErrorNormConcentratesAroundBetaSqrtM) {
  // ||E_k x|| for unit x is beta times a chi variable with 100 degrees of freedom.
  const Index m = 100;
  Vector x = Vector::Zero(m);
  x[0] = 1.0;
  int inside = 0;
  const int trials = 1000;
  for (int s = 0; s < trials; ++s) {
    const auto model = InexactnessModel::gaussian(1e-2, static_cast<std::uint64_t>(s));
    const Matrix e = materialize_error(model, 1, Direction::forward, m, m);
    const double r = (e * x).norm() / (1e-2 * std::sqrt(100.0));
    if (r >= 0.5 && r <= 1.5) ++inside;
  }
  EXPECT_GE(inside, static_cast<int>(0.99 * trials));
}

TEST(PerturbedApply, ForwardAndAdjointStreamsAreUncorrelated) {
  const auto model = InexactnessModel::gaussian(1.0, 7);
  const Matrix e = materialize_error(model, 3, Direction::forward, 100, 100);
  const Matrix f = materialize_error(model, 3, Direction::adjoint, 100, 100);
  const double ce = e.mean();
  const double cf = f.mean();
  const double cov = ((e.array() - ce) * (f.array() - cf)).mean();
  const double corr =
      cov / std::sqrt((e.array() - ce).square().mean() * (f.array() - cf).square().mean());
  EXPECT_LT(std::abs(corr), 0.05);
}

TEST(PerturbedApply, ErrorIsExactlyLinearInBeta) {
  DenseOperator op(random_matrix(40, 30, 20));
  const Vector x = random_vector(30, 21);
  const Vector ex = op.apply(x);
  const double e2 = (perturbed_apply(op, InexactnessModel::gaussian(1e-2, 5), 1, x) - ex).norm();
  const double e4 = (perturbed_apply(op, InexactnessModel::gaussian(1e-4, 5), 1, x) - ex).norm();
  EXPECT_NEAR(e4 / e2, 1e-2, 1e-3);
}

TEST(PerturbedOperator, FrozenViewMatchesIteration) {
  auto base = std::make_shared<DenseOperator>(random_matrix(12, 9, 22));
  PerturbedOperator p(base, InexactnessModel::gaussian(1e-1, 3));
  const Vector x = random_vector(9, 23);
  const Vector y = random_vector(12, 24);
  auto frozen = p.at(4);
  EXPECT_EQ(frozen->apply(x), p.forward(4, x));
  EXPECT_EQ(frozen->apply_adjoint(y), p.adjoint(4, y));
  EXPECT_EQ(&p.exact(), base.get());
}

TEST(InexactnessModel, ScheduleAndValidation) {
  InexactnessModel m = InexactnessModel::gaussian(2.0, 1);
  EXPECT_DOUBLE_EQ(m.scale_at(7), 2.0);
  m.schedule = {1.0, 0.5, 0.25};
  EXPECT_DOUBLE_EQ(m.scale_at(2), 1.0);
  EXPECT_DOUBLE_EQ(m.scale_at(10), 0.5);
  EXPECT_THROW(InexactnessModel::gaussian(-1.0, 1), InvalidParameterError);
  EXPECT_THROW(materialize_error(InexactnessModel::gaussian(1.0, 1), 1, Direction::forward, 2000,
                                 1000),
               CapacityError);
}
