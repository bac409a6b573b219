#include "igenkrylov/bidiag.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "igenkrylov/errors.hpp"

namespace igenkrylov {

std::string_view to_string(DecompositionMode mode) {
  switch (mode) {
    case DecompositionMode::gk: return "gk";
    case DecompositionMode::igk: return "igk";
    case DecompositionMode::gengk: return "gengk";
    case DecompositionMode::igengk: return "igengk";
  }
  return "unknown";
}

DecompositionMode parse_mode(std::string_view name) {
  if (name == "gk") return DecompositionMode::gk;
  if (name == "igk") return DecompositionMode::igk;
  if (name == "gengk") return DecompositionMode::gengk;
  if (name == "igengk") return DecompositionMode::igengk;
  throw ConfigError("unknown decomposition mode '" + std::string(name) + "'");
}

void BidiagState::reserve(Index m, Index n, int capacity) {
  const Index cols = std::max(capacity, 1) + 1;
  U_ = Matrix::Zero(m, cols);
  V_ = Matrix::Zero(n, cols);
  QV_ = Matrix::Zero(n, cols);
  M_ = Matrix::Zero(cols, cols - 1);
  C_ = Matrix::Zero(cols, cols);
}

void BidiagState::ensure_capacity(int steps) {
  const Index needed = steps + 1;
  if (U_.cols() >= needed) return;
  const Index cols = std::max<Index>(needed, 2 * U_.cols());
  U_.conservativeResize(Eigen::NoChange, cols);
  V_.conservativeResize(Eigen::NoChange, cols);
  QV_.conservativeResize(Eigen::NoChange, cols);
  const Index old_m_rows = M_.rows();
  const Index old_m_cols = M_.cols();
  M_.conservativeResize(cols, cols - 1);
  M_.bottomRows(cols - old_m_rows).setZero();
  M_.rightCols(cols - 1 - old_m_cols).setZero();
  const Index old_c = C_.rows();
  C_.conservativeResize(cols, cols);
  C_.bottomRows(cols - old_c).setZero();
  C_.rightCols(cols - old_c).setZero();
}

void BidiagState::stop(std::string reason) {
  stopped_ = true;
  stop_reason_ = std::move(reason);
}

namespace {

bool below_breakdown(double coeff, double candidate_norm, double beta1) {
  return !(coeff > kBreakdownTol * beta1) || !(coeff > kCancellationTol * candidate_norm);
}

}  // namespace

BidiagState igenGK_init(DecompositionMode mode, const InexactOperator& a,
                        const CovarianceOperator& q, const NoiseModel& noise, const Vector& b,
                        int capacity) {
  const Index m = a.rows();
  const Index n = a.cols();
  if (b.size() != m) throw DimensionError("igenGK_init: right-hand side length mismatch");
  if (q.size() != n) throw DimensionError("igenGK_init: covariance size mismatch");
  if (noise.size() != m) throw DimensionError("igenGK_init: noise size mismatch");
  if (!b.allFinite()) throw InvalidInputError("igenGK_init: non-finite right-hand side");

  const double beta = weighted_norm(b, noise);
  if (!(beta > 0.0)) throw DegenerateInputError("igenGK_init: right-hand side is zero");

  BidiagState s;
  s.mode_ = mode;
  s.beta1_ = beta;
  s.reserve(m, n, capacity);
  s.U_.col(0) = b / beta;
  s.nu_ = 1;

  const Vector vbar = a.adjoint(1, noise.apply_Rinv(s.U_.col(0)));
  const Vector qvbar = q.apply(vbar);
  const double c11 = std::sqrt(std::max(vbar.dot(qvbar), 0.0));
  if (!(c11 > 0.0)) {
    throw DegenerateInputError("igenGK_init: A^T R^-1 b vanishes, nothing to decompose");
  }
  s.V_.col(0) = vbar / c11;
  s.QV_.col(0) = qvbar / c11;
  s.C_(0, 0) = c11;
  s.nv_ = 1;
  return s;
}

StepStatus igenGK_step(BidiagState& s, const InexactOperator& a, const CovarianceOperator& q,
                       const NoiseModel& noise) {
  if (s.stopped_) return StepStatus::breakdown;
  if (s.nv_ != s.k_ + 1 || s.nu_ != s.k_ + 1) {
    throw InvalidInputError("igenGK_step: state is not ready for another step");
  }
  const int step = s.k_ + 1;
  const Index col = step - 1;
  s.ensure_capacity(step + 1);

  // u-update: u_bar = A^_k Q v_k, orthogonalized in the R^-1 inner product.
  Vector w = a.forward(step, s.QV_.col(col));
  if (!w.allFinite()) throw NumericalError("igenGK_step: non-finite forward product");
  const double w_norm0 = weighted_norm(w, noise);
  Vector h = Vector::Zero(step);
  for (int pass = 0; pass < 2; ++pass) {
    for (Index j = 0; j < step; ++j) {
      const double c = noise.inner(s.U_.col(j), w);
      w.noalias() -= c * s.U_.col(j);
      h[j] += c;
    }
  }
  const double m_next = weighted_norm(w, noise);
  s.M_.col(col).head(step) = h;
  if (below_breakdown(m_next, w_norm0, s.beta1_)) {
    s.M_(step, col) = 0.0;
    s.k_ = step;
    s.stop("breakdown: u_" + std::to_string(step + 1) + " vanished (invariant subspace)");
    return StepStatus::breakdown;
  }
  s.M_(step, col) = m_next;
  s.U_.col(step) = w / m_next;
  s.nu_ = step + 1;
  s.k_ = step;

  // v-update: v_bar = A~_{k+1}^T R^-1 u_{k+1}, orthogonalized in the Q inner
  // product. Q w is carried along so only one covariance product is needed.
  Vector v = a.adjoint(step + 1, noise.apply_Rinv(s.U_.col(step)));
  if (!v.allFinite()) throw NumericalError("igenGK_step: non-finite adjoint product");
  Vector qv = q.apply(v);
  const double v_norm0 = std::sqrt(std::max(v.dot(qv), 0.0));
  Vector l = Vector::Zero(step);
  for (int pass = 0; pass < 2; ++pass) {
    for (Index j = 0; j < step; ++j) {
      const double c = s.V_.col(j).dot(qv);
      v.noalias() -= c * s.V_.col(j);
      qv.noalias() -= c * s.QV_.col(j);
      l[j] += c;
    }
  }
  const double quad = v.dot(qv);
  if (quad < -1e-10 * v.squaredNorm()) {
    throw NumericalError("igenGK_step: covariance lost positive definiteness");
  }
  const double c_next = std::sqrt(std::max(quad, 0.0));
  if (below_breakdown(c_next, v_norm0, s.beta1_)) {
    s.stop("breakdown: v_" + std::to_string(step + 1) + " vanished (invariant subspace)");
    return StepStatus::breakdown;
  }
  s.C_.col(step).head(step) = l;
  s.C_(step, step) = c_next;
  s.V_.col(step) = v / c_next;
  s.QV_.col(step) = qv / c_next;
  s.nv_ = step + 1;
  return StepStatus::ok;
}

BidiagState gk_decompose(const LinearOperator& a, const Vector& b, int k, bool reorthogonalize) {
  const Index m = a.rows();
  const Index n = a.cols();
  if (b.size() != m) throw DimensionError("gk_decompose: right-hand side length mismatch");
  if (k < 0) throw InvalidParameterError("gk_decompose: negative step count");
  const double beta1 = b.norm();
  if (!(beta1 > 0.0)) throw DegenerateInputError("gk_decompose: right-hand side is zero");

  BidiagState s;
  s.mode_ = DecompositionMode::gk;
  s.beta1_ = beta1;
  s.reserve(m, n, k);
  s.U_.col(0) = b / beta1;
  s.nu_ = 1;
  Vector w = a.apply_adjoint(s.U_.col(0));
  double alpha = w.norm();
  if (!(alpha > 0.0)) throw DegenerateInputError("gk_decompose: A^T b vanishes");
  s.V_.col(0) = w / alpha;
  s.QV_.col(0) = s.V_.col(0);
  s.C_(0, 0) = alpha;
  s.nv_ = 1;

  for (int i = 1; i <= k; ++i) {
    const Index c = i - 1;
    // beta_{i+1} u_{i+1} = A v_i - alpha_i u_i
    Vector p = a.apply(s.V_.col(c)) - alpha * s.U_.col(c);
    const double p_norm0 = p.norm();
    if (reorthogonalize) {
      for (int pass = 0; pass < 2; ++pass) {
        for (Index j = 0; j < i; ++j) p.noalias() -= s.U_.col(j).dot(p) * s.U_.col(j);
      }
    }
    const double beta = p.norm();
    s.M_(c, c) = alpha;
    if (below_breakdown(beta, std::max(p_norm0, alpha), beta1)) {
      s.M_(i, c) = 0.0;
      s.k_ = i;
      s.stop("breakdown: u_" + std::to_string(i + 1) + " vanished (invariant subspace)");
      break;
    }
    s.M_(i, c) = beta;
    s.U_.col(i) = p / beta;
    s.nu_ = i + 1;
    s.k_ = i;

    // alpha_{i+1} v_{i+1} = A^T u_{i+1} - beta_{i+1} v_i
    Vector r = a.apply_adjoint(s.U_.col(i)) - beta * s.V_.col(c);
    const double r_norm0 = r.norm();
    if (reorthogonalize) {
      for (int pass = 0; pass < 2; ++pass) {
        for (Index j = 0; j < i; ++j) r.noalias() -= s.V_.col(j).dot(r) * s.V_.col(j);
      }
    }
    alpha = r.norm();
    if (below_breakdown(alpha, std::max(r_norm0, beta), beta1)) {
      s.stop("breakdown: v_" + std::to_string(i + 1) + " vanished (invariant subspace)");
      break;
    }
    s.C_(c, i) = beta;
    s.C_(i, i) = alpha;
    s.V_.col(i) = r / alpha;
    s.QV_.col(i) = s.V_.col(i);
    s.nv_ = i + 1;
  }
  return s;
}

RelationReport relation_diagnostics(const BidiagState& state, const LinearOperator& exact_a,
                                    const CovarianceOperator& q, const NoiseModel& noise) {
  const Index nu = state.num_u();
  const Index nv = state.num_v();
  const int k = state.k();
  if (exact_a.cols() != q.size() || exact_a.rows() != noise.size()) {
    throw DimensionError("relation_diagnostics: operator, covariance and noise sizes differ");
  }
  if (state.U().rows() != exact_a.rows() || state.V().rows() != exact_a.cols()) {
    throw DimensionError("relation_diagnostics: state does not match the operator");
  }

  RelationReport report;
  const auto V = state.V();
  const auto U = state.U();

  Matrix qv(V.rows(), nv);
  for (Index j = 0; j < nv; ++j) qv.col(j) = q.apply(V.col(j));

  if (k > 0) {
    Matrix aqv(exact_a.rows(), k);
    for (Index j = 0; j < k; ++j) aqv.col(j) = exact_a.apply(qv.col(j));
    // With a u breakdown the last row of M is zero and U has only k columns.
    const Matrix um = U * state.M().topRows(nu);
    const double denom = aqv.norm();
    report.err_forward = denom > 0.0 ? (aqv - um).norm() / denom : 0.0;
  }

  const Index p = std::min(nu, nv);
  if (p > 0) {
    Matrix atu(exact_a.cols(), p);
    for (Index j = 0; j < p; ++j) atu.col(j) = exact_a.apply_adjoint(noise.apply_Rinv(U.col(j)));
    const Matrix vlt = V.leftCols(p) * state.C().topLeftCorner(p, p);
    const double denom = atu.norm();
    report.err_adjoint = denom > 0.0 ? (atu - vlt).norm() / denom : 0.0;
  }

  if (nv > 0) {
    const Matrix g = V.transpose() * qv;
    report.err_Vorth = (g - Matrix::Identity(nv, nv)).norm() / std::sqrt(static_cast<double>(nv));
  }
  if (nu > 0) {
    const Matrix g = U.transpose() * U / (noise.sigma() * noise.sigma());
    report.err_Uorth = (g - Matrix::Identity(nu, nu)).norm() / std::sqrt(static_cast<double>(nu));
  }
  return report;
}

}  // namespace igenkrylov
