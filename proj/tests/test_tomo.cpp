#include <gtest/gtest.h>

#include <cmath>

#include "igenkrylov/errors.hpp"
#include "igenkrylov/tomo.hpp"
#include "test_util.hpp"

using namespace igenkrylov;
using namespace testutil;

namespace {

CTGeometry small_geometry(Index n, std::vector<double> angles) {
  CTGeometry g;
  g.n = n;
  g.angles_deg = std::move(angles);
  g.nrays = CTGeometry::default_nrays(n);
  return g;
}

// Count of nonzero pixels of the 64 x 64 phantom, frozen from the first build.
constexpr double kPhantomSupport64 = 1737.0 / 4096.0;

const std::vector<double> kEightAngles{0.0, 13.0, 22.5, 45.0, 90.0, 101.3, 135.0, 170.0};

// Length of the line p + s d inside [x0, x1) x [y0, y1) by slab clipping.
double clip_length(double px, double py, double dx, double dy, double x0, double x1, double y0,
                   double y1) {
  double lo = -1e300, hi = 1e300;
  auto slab = [&](double p, double d, double a, double b) {
    if (std::abs(d) < 1e-15) {
      if (p < a || p >= b) hi = -1e300;
      return;
    }
    double s0 = (a - p) / d, s1 = (b - p) / d;
    if (s0 > s1) std::swap(s0, s1);
    lo = std::max(lo, s0);
    hi = std::min(hi, s1);
  };
  slab(px, dx, x0, x1);
  slab(py, dy, y0, y1);
  return hi > lo ? hi - lo : 0.0;
}

Matrix oracle_matrix(const CTGeometry& g) {
  const double pi = std::acos(-1.0);
  const double half = g.n / 2.0;
  Matrix a = Matrix::Zero(g.rows(), g.cols());
  for (std::size_t k = 0; k < g.angles_deg.size(); ++k) {
    const double th = g.angles_deg[k] * pi / 180.0;
    const double c = std::cos(th), s = std::sin(th);
    for (Index r = 0; r < g.nrays; ++r) {
      const double t = (r - (g.nrays - 1) / 2.0) * g.spacing;
      for (Index j = 0; j < g.n; ++j) {
        for (Index i = 0; i < g.n; ++i) {
          const double x0 = j - half;
          const double y0 = (g.n - 1 - i) - half;
          a(static_cast<Index>(k) * g.nrays + r, i + j * g.n) =
              clip_length(t * c, t * s, -s, c, x0, x0 + 1, y0, y0 + 1);
        }
      }
    }
  }
  return a;
}

}  // namespace

TEST(CTGeometry, Dimensions) {
  const auto g128 = CTGeometry::standard(128);
  EXPECT_EQ(g128.nrays, 181);
  EXPECT_EQ(g128.rows(), 6516);
  EXPECT_EQ(g128.cols(), 16384);
  const auto g64 = CTGeometry::standard(64);
  EXPECT_EQ(g64.nrays, 91);
  EXPECT_EQ(g64.rows(), 3276);
  ASSERT_EQ(g64.angles_deg.size(), 36u);
  EXPECT_EQ(g64.angles_deg.front(), 1.0);
  EXPECT_EQ(g64.angles_deg.back(), 176.0);
}

TEST(Radon, ZeroAndConstantImages) {
  const auto g = small_geometry(16, {0.0});
  RadonOperator op(g);
  EXPECT_TRUE(op.apply(Vector::Zero(256)).isZero(0.0));
  EXPECT_TRUE(op.apply_adjoint(Vector::Zero(g.rows())).isZero(0.0));
  const Vector sino = op.apply(Vector::Ones(256));
  EXPECT_NEAR(sino[(g.nrays - 1) / 2], 16.0, 1e-12);
}

TEST(Radon, MatchesClippingOracle) {
  const auto g = small_geometry(16, kEightAngles);
  RadonOperator op(g);
  const Matrix oracle = oracle_matrix(g);
  const Matrix siddon = Matrix(op.matrix());
  EXPECT_LE((siddon - oracle).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Radon, DotTest) {
  for (const auto& angles : {kEightAngles, CTGeometry::default_angles()}) {
    const auto g = small_geometry(16, angles);
    RadonOperator op(g);
    const Vector v = random_vector(g.cols(), 1);
    const Vector u = random_vector(g.rows(), 2);
    const double lhs = u.dot(op.apply(v));
    const double rhs = op.apply_adjoint(u).dot(v);
    EXPECT_NEAR(lhs, rhs, 1e-10 * std::abs(lhs));
  }
}

TEST(Radon, SingleRayBackProjection) {
  const auto g = small_geometry(16, kEightAngles);
  RadonOperator op(g);
  const Matrix oracle = oracle_matrix(g);
  const Index row = 3 * g.nrays + 7;
  Vector e = Vector::Zero(g.rows());
  e[row] = 1.0;
  const Vector bp = op.apply_adjoint(e);
  EXPECT_LE((bp - oracle.row(row).transpose()).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Radon, QuarterTurnSymmetry) {
  const Index n = 8;
  const Matrix g0 = random_matrix(n, n, 3).cwiseAbs();
  Vector img(n * n);
  // f(ix, iy) = f(iy, ix): symmetric about the line y = x.
  for (Index ix = 0; ix < n; ++ix)
    for (Index iy = 0; iy < n; ++iy) img[(n - 1 - iy) + ix * n] = g0(ix, iy) + g0(iy, ix);
  RadonOperator op(small_geometry(n, {0.0, 90.0}));
  const Vector sino = op.apply(img);
  const Index p = op.geometry().nrays;
  EXPECT_LE((sino.head(p) - sino.tail(p)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Radon, RaySumConservation) {
  const Index n = 32;
  Vector img = Vector::Zero(n * n);
  const Matrix inner = random_matrix(20, 20, 4).cwiseAbs();
  for (Index j = 0; j < 20; ++j)
    for (Index i = 0; i < 20; ++i) img[(i + 6) + (j + 6) * n] = inner(i, j);
  const auto g = small_geometry(n, {0.0, 90.0});
  const Vector sino = RadonOperator(g).apply(img);
  const double mass = img.sum();
  EXPECT_NEAR(sino.head(g.nrays).sum(), mass, 1e-8 * mass);
  EXPECT_NEAR(sino.tail(g.nrays).sum(), mass, 1e-8 * mass);
}

TEST(Radon, DeterministicWeights) {
  const auto g = small_geometry(16, kEightAngles);
  const Matrix a = Matrix(RadonOperator(g).matrix());
  const Matrix b = Matrix(RadonOperator(g).matrix());
  EXPECT_EQ(a, b);
}

TEST(Radon, DimensionChecks) {
  RadonOperator op(small_geometry(16, {0.0}));
  EXPECT_THROW(op.apply(Vector::Zero(255)), DimensionError);
  EXPECT_THROW(op.apply_adjoint(Vector::Zero(3)), DimensionError);
  CTGeometry bad = small_geometry(16, {});
  EXPECT_THROW(RadonOperator{bad}, InvalidParameterError);
}

TEST(Phantom, RangeDeterminismSupport) {
  const Vector a = make_phantom(64);
  EXPECT_EQ(a, make_phantom(64));
  EXPECT_GE(a.minCoeff(), 0.0);
  EXPECT_LE(a.maxCoeff(), 1.0);
  const double support = static_cast<double>((a.array() > 0.0).count()) / a.size();
  EXPECT_GE(support, 0.3);
  EXPECT_LE(support, 0.9);
  EXPECT_NEAR(support, kPhantomSupport64, 1e-12);
  EXPECT_EQ(make_phantom(128).size(), 16384);
  EXPECT_THROW(make_phantom(8), InvalidParameterError);
}

TEST(Observation, NoiseLevelIsExact) {
  const auto g = small_geometry(32, CTGeometry::default_angles());
  const Vector s = make_phantom(32);
  const Observation clean = synthesize_observation(g, s, 0.0, 1);
  EXPECT_EQ(clean.d, clean.d_true);
  EXPECT_EQ(clean.noise_norm, 0.0);
  const Observation o = synthesize_observation(g, s, 0.04, 1);
  EXPECT_NEAR((o.d - o.d_true).norm() / o.d_true.norm(), 0.04, 1e-12);
  EXPECT_NEAR(o.noise_norm, (o.d - o.d_true).norm(), 1e-12 * o.noise_norm);
  EXPECT_EQ(o.d, synthesize_observation(g, s, 0.04, 1).d);
  EXPECT_NE(o.d, synthesize_observation(g, s, 0.04, 2).d);
  EXPECT_THROW(synthesize_observation(g, Vector::Zero(1024), 0.04, 1), DegenerateInputError);
  EXPECT_THROW(synthesize_observation(g, s, -0.1, 1), InvalidParameterError);
}

TEST(AngleSchedule, LogSpacing) {
  AngleSchedule s{1e-1, 1e-6, 100, 3};
  EXPECT_EQ(s.alpha(1), 1e-1);
  EXPECT_EQ(s.alpha(100), 1e-6);
  const double ratio = s.alpha(50) / s.alpha(51);
  for (int k = 1; k < 100; ++k) {
    EXPECT_NEAR(s.alpha(k) / s.alpha(k + 1), ratio, 1e-10 * ratio);
    EXPECT_GT(s.alpha(k), s.alpha(k + 1));
  }
  EXPECT_NEAR(ratio, std::pow(1e5, 1.0 / 99.0), 1e-10);
  EXPECT_EQ(s.direction(4, 36), s.direction(4, 36));
  EXPECT_NE(s.direction(4, 36), s.direction(5, 36));
  AngleSchedule zero{0.0, 0.0, 10, 1};
  EXPECT_EQ(zero.alpha(3), 0.0);
  EXPECT_THROW((AngleSchedule{1e-1, 0.0, 10, 1}.validate()), ConfigError);
  EXPECT_THROW((AngleSchedule{-1.0, 1e-3, 10, 1}.validate()), ConfigError);
}

TEST(AngleOperator, ZeroPerturbationIsBitwiseExact) {
  const auto g = small_geometry(16, kEightAngles);
  AngleSchedule zero{0.0, 0.0, 5, 9};
  const auto op = perturbed_angle_operator(g, zero, 3);
  const Vector x = random_vector(256, 5);
  EXPECT_EQ(op->apply(x), RadonOperator(g).apply(x));
  AngleInexactRadon inexact(g, zero);
  EXPECT_EQ(inexact.forward(2, x), RadonOperator(g).apply(x));
}

TEST(AngleOperator, IterationOperatorsAgree) {
  const auto g = small_geometry(16, kEightAngles);
  AngleSchedule sched{1.0, 1e-3, 6, 2};
  AngleInexactRadon inexact(g, sched);
  const Vector x = random_vector(256, 6);
  const Vector y = random_vector(g.rows(), 7);
  for (int k : {1, 3, 6}) {
    const auto op = perturbed_angle_operator(g, sched, k);
    EXPECT_EQ(inexact.forward(k, x), op->apply(x));
    EXPECT_EQ(inexact.adjoint(k, y), op->apply_adjoint(y));
  }
  EXPECT_EQ(inexact.adjoint(9, y), inexact.adjoint(6, y));
  EXPECT_NE(inexact.forward(1, x), RadonOperator(g).apply(x));
}

TEST(AngleOperator, DifferenceNormDecreasesAlongSchedule) {
  const auto g = small_geometry(32, CTGeometry::default_angles());
  const RadonOperator exact(g);
  AngleSchedule sched{1e-1, 1e-6, 10, 4};
  const Vector dir = sched.direction(1, 36);
  double prev = 1e300;
  for (int k = 1; k <= 10; ++k) {
    const RadonOperator pk(perturb_angles(g, sched.alpha(k), dir));
    // Ten power iterations on D^T D with D = A(theta_k) - A(theta_true).
    Vector v = Vector::Ones(g.cols()).normalized();
    double est = 0.0;
    for (int it = 0; it < 10; ++it) {
      const Vector dv = pk.apply(v) - exact.apply(v);
      const Vector w = pk.apply_adjoint(dv) - exact.apply_adjoint(dv);
      est = std::sqrt(w.norm());
      if (w.norm() == 0.0) break;
      v = w.normalized();
    }
    EXPECT_LT(est, prev) << "k=" << k;
    prev = est;
  }
}
