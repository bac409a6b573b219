#pragma once

#include <cmath>
#include <random>

#include "igenkrylov/types.hpp"

namespace testutil {

using igenkrylov::Index;
using igenkrylov::Matrix;
using igenkrylov::Vector;

inline Matrix random_matrix(Index rows, Index cols, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> dist;
  Matrix a(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) a(i, j) = dist(gen);
  return a;
}

inline Vector random_vector(Index n, unsigned seed) { return random_matrix(n, 1, seed).col(0); }

inline Matrix random_spd(Index n, unsigned seed) {
  const Matrix b = random_matrix(n, n, seed);
  return b * b.transpose() + static_cast<double>(n) * Matrix::Identity(n, n);
}

// Plain loops, no Eigen products.
inline Vector naive_matvec(const Matrix& a, const Vector& x) {
  Vector y = Vector::Zero(a.rows());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) y[i] += a(i, j) * x[j];
  return y;
}

inline Vector naive_matvec_t(const Matrix& a, const Vector& y) {
  Vector x = Vector::Zero(a.cols());
  for (Index j = 0; j < a.cols(); ++j)
    for (Index i = 0; i < a.rows(); ++i) x[j] += a(i, j) * y[i];
  return x;
}

inline double naive_dot(const Vector& a, const Vector& b) {
  double s = 0.0;
  for (Index i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double rel_diff(const Vector& a, const Vector& b) {
  const double nb = b.norm();
  return nb > 0.0 ? (a - b).norm() / nb : (a - b).norm();
}

// Aligns column signs of `a` with `ref` and returns the max abs difference.
inline double signed_col_diff(const Matrix& a, const Matrix& ref) {
  double worst = 0.0;
  for (Index j = 0; j < ref.cols(); ++j) {
    const double s = a.col(j).dot(ref.col(j)) < 0.0 ? -1.0 : 1.0;
    worst = std::max(worst, (s * a.col(j) - ref.col(j)).cwiseAbs().maxCoeff());
  }
  return worst;
}

}  // namespace testutil
