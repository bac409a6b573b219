#include "igenkrylov/linop.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "igenkrylov/errors.hpp"
#include "igenkrylov/random.hpp"

namespace igenkrylov {

namespace {

void check_operand(const Vector& v, Index expected, const char* what) {
  if (v.size() != expected) {
    throw DimensionError(std::string(what) + ": expected length " + std::to_string(expected) +
                         ", got " + std::to_string(v.size()));
  }
  if (!v.allFinite()) throw InvalidInputError(std::string(what) + ": non-finite entry");
}

std::uint64_t row_key(const InexactnessModel& model, int k, Direction dir, Index row) {
  std::uint64_t key = rng::derive(model.seed, static_cast<std::uint64_t>(k));
  key = rng::derive(key, static_cast<std::uint64_t>(dir));
  return rng::derive(key, static_cast<std::uint64_t>(row));
}

}  // namespace

std::string_view to_string(OperatorKind kind) {
  switch (kind) {
    case OperatorKind::dense: return "dense";
    case OperatorKind::radon: return "radon";
    case OperatorKind::perturbed: return "perturbed";
    case OperatorKind::composed: return "composed";
    case OperatorKind::identity: return "identity";
    case OperatorKind::scaled_identity: return "scaled-identity";
  }
  return "unknown";
}

LinearOperator::LinearOperator(Index rows, Index cols) : rows_(rows), cols_(cols) {
  if (rows <= 0 || cols <= 0) throw InvalidParameterError("operator dimensions must be positive");
}

Vector LinearOperator::apply(const Vector& x) const {
  check_operand(x, cols_, "apply");
  return do_apply(x);
}

Vector LinearOperator::apply_adjoint(const Vector& y) const {
  check_operand(y, rows_, "apply_adjoint");
  return do_apply_adjoint(y);
}

DenseOperator::DenseOperator(Matrix a) : LinearOperator(a.rows(), a.cols()), a_(std::move(a)) {
  if (!a_.allFinite()) throw InvalidInputError("dense operator has non-finite entries");
}

Vector DenseOperator::do_apply(const Vector& x) const { return a_ * x; }

Vector DenseOperator::do_apply_adjoint(const Vector& y) const { return a_.transpose() * y; }

ScaledIdentityOperator::ScaledIdentityOperator(Index n, double scale)
    : LinearOperator(n, n), scale_(scale) {
  if (!std::isfinite(scale)) throw InvalidParameterError("scale must be finite");
}

ComposedOperator::ComposedOperator(OperatorPtr outer, OperatorPtr inner)
    : LinearOperator(outer ? outer->rows() : 1, inner ? inner->cols() : 1),
      outer_(std::move(outer)),
      inner_(std::move(inner)) {
  if (!outer_ || !inner_) throw InvalidInputError("composed operator needs two operands");
  if (outer_->cols() != inner_->rows()) {
    throw DimensionError("composed operator: inner rows do not match outer cols");
  }
}

Vector ComposedOperator::do_apply(const Vector& x) const {
  return outer_->apply(inner_->apply(x));
}

Vector ComposedOperator::do_apply_adjoint(const Vector& y) const {
  return inner_->apply_adjoint(outer_->apply_adjoint(y));
}

// ---------------------------------------------------------------------------

std::string_view to_string(InexactnessModel::Mode mode) {
  switch (mode) {
    case InexactnessModel::Mode::none: return "none";
    case InexactnessModel::Mode::gaussian_entry: return "gaussian-entry";
    case InexactnessModel::Mode::angle_perturbation: return "angle-perturbation";
  }
  return "unknown";
}

InexactnessModel InexactnessModel::gaussian(double beta, std::uint64_t seed) {
  InexactnessModel m;
  m.mode = Mode::gaussian_entry;
  m.beta = beta;
  m.seed = seed;
  m.validate();
  return m;
}

void InexactnessModel::validate() const {
  if (!(beta >= 0.0) || !std::isfinite(beta)) {
    throw InvalidParameterError("inexactness beta must be finite and nonnegative");
  }
  for (double a : schedule) {
    if (!(a >= 0.0) || !std::isfinite(a)) {
      throw InvalidParameterError("inexactness schedule entries must be finite and nonnegative");
    }
  }
}

double InexactnessModel::scale_at(int k) const {
  if (k < 1) throw InvalidParameterError("iteration index must be >= 1");
  if (mode != Mode::gaussian_entry) return 0.0;
  if (schedule.empty()) return beta;
  const auto idx = std::min<std::size_t>(static_cast<std::size_t>(k - 1), schedule.size() - 1);
  return beta * schedule[idx];
}

Vector error_apply(const InexactnessModel& model, int k, Direction dir, Index rows, Index cols,
                   const Vector& x) {
  const double scale = model.scale_at(k);
  const Index out_len = dir == Direction::forward ? rows : cols;
  const Index in_len = dir == Direction::forward ? cols : rows;
  if (x.size() != in_len) throw DimensionError("error_apply: operand length mismatch");
  Vector out = Vector::Zero(out_len);
  if (scale == 0.0) return out;

  Vector row(cols);
  for (Index i = 0; i < rows; ++i) {
    if (dir == Direction::adjoint && x[i] == 0.0) continue;
    rng::NormalStream stream(row_key(model, k, dir, i));
    stream.fill(row.data(), cols);
    if (dir == Direction::forward) {
      out[i] = row.dot(x);
    } else {
      out.noalias() += x[i] * row;
    }
  }
  out *= scale;
  return out;
}

Matrix materialize_error(const InexactnessModel& model, int k, Direction dir, Index rows,
                         Index cols) {
  if (rows * cols > kMaterializeLimit) {
    throw CapacityError("materialize_error: " + std::to_string(rows * cols) +
                        " entries exceed the diagnostic limit");
  }
  const double scale = model.scale_at(k);
  Matrix e = Matrix::Zero(rows, cols);
  if (scale == 0.0) return e;
  Vector row(cols);
  for (Index i = 0; i < rows; ++i) {
    rng::NormalStream stream(row_key(model, k, dir, i));
    stream.fill(row.data(), cols);
    e.row(i) = scale * row.transpose();
  }
  return e;
}

Vector perturbed_apply(const LinearOperator& op, const InexactnessModel& model, int k,
                       const Vector& x) {
  Vector y = op.apply(x);
  if (model.mode == InexactnessModel::Mode::gaussian_entry && model.scale_at(k) != 0.0) {
    y += error_apply(model, k, Direction::forward, op.rows(), op.cols(), x);
  } else if (k < 1) {
    throw InvalidParameterError("iteration index must be >= 1");
  }
  return y;
}

Vector perturbed_apply_adjoint(const LinearOperator& op, const InexactnessModel& model, int k,
                               const Vector& y) {
  Vector x = op.apply_adjoint(y);
  if (model.mode == InexactnessModel::Mode::gaussian_entry && model.scale_at(k) != 0.0) {
    x += error_apply(model, k, Direction::adjoint, op.rows(), op.cols(), y);
  } else if (k < 1) {
    throw InvalidParameterError("iteration index must be >= 1");
  }
  return x;
}

PerturbedOperator::PerturbedOperator(OperatorPtr op, InexactnessModel model)
    : op_(std::move(op)), model_(std::move(model)) {
  if (!op_) throw InvalidInputError("perturbed operator needs an operand");
  model_.validate();
  if (model_.mode == InexactnessModel::Mode::angle_perturbation) {
    throw UnsupportedError("angle perturbation needs a geometry-aware operator");
  }
}

Vector PerturbedOperator::forward(int k, const Vector& x) const {
  return perturbed_apply(*op_, model_, k, x);
}

Vector PerturbedOperator::adjoint(int k, const Vector& y) const {
  return perturbed_apply_adjoint(*op_, model_, k, y);
}

namespace {

class FrozenPerturbed final : public LinearOperator {
 public:
  FrozenPerturbed(OperatorPtr op, InexactnessModel model, int k)
      : LinearOperator(op->rows(), op->cols()), op_(std::move(op)), model_(std::move(model)), k_(k) {}

  OperatorKind kind() const noexcept override { return OperatorKind::perturbed; }

 protected:
  Vector do_apply(const Vector& x) const override { return perturbed_apply(*op_, model_, k_, x); }
  Vector do_apply_adjoint(const Vector& y) const override {
    return perturbed_apply_adjoint(*op_, model_, k_, y);
  }

 private:
  OperatorPtr op_;
  InexactnessModel model_;
  int k_;
};

}  // namespace

OperatorPtr PerturbedOperator::at(int k) const {
  if (k < 1) throw InvalidParameterError("iteration index must be >= 1");
  return std::make_shared<FrozenPerturbed>(op_, model_, k);
}

}  // namespace igenkrylov
