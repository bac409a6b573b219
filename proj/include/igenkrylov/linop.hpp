#pragma once

#include <cstdint>
#include <memory>
#include <string_view>
#include <vector>

#include "igenkrylov/types.hpp"

namespace igenkrylov {

enum class OperatorKind { dense, radon, perturbed, composed, identity, scaled_identity };

std::string_view to_string(OperatorKind kind);

/// Matrix-free m x n linear map with forward and adjoint application.
///
/// apply() and apply_adjoint() validate the operand (length and finiteness)
/// and then dispatch to the concrete implementation. Implementations are
/// immutable after construction, so concurrent calls are safe.
class LinearOperator {
 public:
  LinearOperator(Index rows, Index cols);
  virtual ~LinearOperator() = default;

  Index rows() const noexcept { return rows_; }
  Index cols() const noexcept { return cols_; }
  virtual OperatorKind kind() const noexcept = 0;

  Vector apply(const Vector& x) const;
  Vector apply_adjoint(const Vector& y) const;

 protected:
  virtual Vector do_apply(const Vector& x) const = 0;
  virtual Vector do_apply_adjoint(const Vector& y) const = 0;

 private:
  Index rows_;
  Index cols_;
};

using OperatorPtr = std::shared_ptr<const LinearOperator>;

class DenseOperator final : public LinearOperator {
 public:
  explicit DenseOperator(Matrix a);

  OperatorKind kind() const noexcept override { return OperatorKind::dense; }
  const Matrix& matrix() const noexcept { return a_; }

 protected:
  Vector do_apply(const Vector& x) const override;
  Vector do_apply_adjoint(const Vector& y) const override;

 private:
  Matrix a_;
};

class IdentityOperator final : public LinearOperator {
 public:
  explicit IdentityOperator(Index n) : LinearOperator(n, n) {}

  OperatorKind kind() const noexcept override { return OperatorKind::identity; }

 protected:
  Vector do_apply(const Vector& x) const override { return x; }
  Vector do_apply_adjoint(const Vector& y) const override { return y; }
};

/// c * I.
class ScaledIdentityOperator final : public LinearOperator {
 public:
  ScaledIdentityOperator(Index n, double scale);

  OperatorKind kind() const noexcept override { return OperatorKind::scaled_identity; }
  double scale() const noexcept { return scale_; }

 protected:
  Vector do_apply(const Vector& x) const override { return scale_ * x; }
  Vector do_apply_adjoint(const Vector& y) const override { return scale_ * y; }

 private:
  double scale_;
};

/// outer * inner.
class ComposedOperator final : public LinearOperator {
 public:
  ComposedOperator(OperatorPtr outer, OperatorPtr inner);

  OperatorKind kind() const noexcept override { return OperatorKind::composed; }

 protected:
  Vector do_apply(const Vector& x) const override;
  Vector do_apply_adjoint(const Vector& y) const override;

 private:
  OperatorPtr outer_;
  OperatorPtr inner_;
};

// ---------------------------------------------------------------------------
// Inexact matrix-vector products

enum class Direction : std::uint64_t { forward = 0, adjoint = 1 };

/// Error model for the products with A and A^T.
///
/// With mode gaussian_entry, the k-th forward product uses A + E_k and the
/// k-th adjoint product uses (A + F_k)^T, where E_k = s_k G_k, F_k = s_k H_k,
/// G_k and H_k have i.i.d. standard normal entries and s_k = beta (or
/// beta * schedule[k-1] when a schedule is given). G_k and H_k are drawn from
/// disjoint substreams keyed by (seed, k, direction, row).
struct InexactnessModel {
  enum class Mode { none, gaussian_entry, angle_perturbation };

  Mode mode = Mode::none;
  double beta = 0.0;
  std::vector<double> schedule;
  std::uint64_t seed = 0;

  static InexactnessModel exact() { return {}; }
  static InexactnessModel gaussian(double beta, std::uint64_t seed);

  /// Entry standard deviation at iteration k (k >= 1).
  double scale_at(int k) const;
  void validate() const;
};

std::string_view to_string(InexactnessModel::Mode mode);

/// Largest rows*cols for which materialize_error() is allowed.
inline constexpr Index kMaterializeLimit = 1'000'000;

/// Streams the action of the k-th error matrix (E_k for forward, F_k^T for
/// adjoint) on x without storing it. Returns a zero vector for mode none.
Vector error_apply(const InexactnessModel& model, int k, Direction dir, Index rows, Index cols,
                   const Vector& x);

/// Diagnostic: the k-th error matrix as a rows x cols matrix (F_k, not its
/// transpose, for the adjoint direction). Matches error_apply() entrywise.
Matrix materialize_error(const InexactnessModel& model, int k, Direction dir, Index rows,
                         Index cols);

/// (A + E_k) x.
Vector perturbed_apply(const LinearOperator& op, const InexactnessModel& model, int k,
                       const Vector& x);
/// (A + F_k)^T y.
Vector perturbed_apply_adjoint(const LinearOperator& op, const InexactnessModel& model, int k,
                               const Vector& y);

/// Operator whose k-th forward/adjoint products may carry errors. The
/// decomposition drives the iteration index so it controls the error stream.
class InexactOperator {
 public:
  virtual ~InexactOperator() = default;

  virtual Index rows() const noexcept = 0;
  virtual Index cols() const noexcept = 0;
  virtual Vector forward(int k, const Vector& x) const = 0;
  virtual Vector adjoint(int k, const Vector& y) const = 0;
  /// The error-free operator, used for diagnostics and error metrics.
  virtual const LinearOperator& exact() const = 0;
};

/// Wraps an exact operator with a Gaussian-entry InexactnessModel.
class PerturbedOperator final : public InexactOperator {
 public:
  PerturbedOperator(OperatorPtr op, InexactnessModel model);

  Index rows() const noexcept override { return op_->rows(); }
  Index cols() const noexcept override { return op_->cols(); }
  Vector forward(int k, const Vector& x) const override;
  Vector adjoint(int k, const Vector& y) const override;
  const LinearOperator& exact() const override { return *op_; }

  const InexactnessModel& model() const noexcept { return model_; }

  /// Frozen view of iteration k as an ordinary LinearOperator.
  OperatorPtr at(int k) const;

 private:
  OperatorPtr op_;
  InexactnessModel model_;
};

}  // namespace igenkrylov
