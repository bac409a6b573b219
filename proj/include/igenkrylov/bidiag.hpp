#pragma once

#include <string>
#include <string_view>

#include "igenkrylov/linop.hpp"
#include "igenkrylov/prior.hpp"
#include "igenkrylov/types.hpp"

namespace igenkrylov {

/// Which decomposition a state was produced by. gk/igk use Q = I and R = I;
/// gk/gengk use exact products. All four run through the same igenGK code path,
/// the mode only labels the configuration.
enum class DecompositionMode { gk, igk, gengk, igengk };

std::string_view to_string(DecompositionMode mode);
DecompositionMode parse_mode(std::string_view name);

enum class StepStatus { ok, breakdown };

class BidiagState;

/// u_1 = b / ||b||_{R^-1}, v_1 = A~_1^T R^-1 u_1 / ||.||_Q. capacity is a hint
/// for the number of steps to preallocate.
BidiagState igenGK_init(DecompositionMode mode, const InexactOperator& a,
                        const CovarianceOperator& q, const NoiseModel& noise, const Vector& b,
                        int capacity = 0);

/// One step with full (two-pass) reorthogonalization in the R^-1 and Q inner
/// products. Step k uses A^_k = A + E_k for the forward product and
/// A~_{k+1} = A + F_{k+1} for the adjoint product.
StepStatus igenGK_step(BidiagState& state, const InexactOperator& a, const CovarianceOperator& q,
                       const NoiseModel& noise);

/// Classic two-term Golub-Kahan recurrence with Q = R = I and exact products,
/// optionally with full reorthogonalization. Runs up to k steps; M holds B_k.
BidiagState gk_decompose(const LinearOperator& a, const Vector& b, int k, bool reorthogonalize = true);

/// Factorization state after k accepted steps.
///
/// Normally U holds u_1..u_{k+1} and V holds v_1..v_{k+1} (v_{k+1} is produced
/// at the end of step k), M is the (k+1) x k upper Hessenberg matrix and
/// C = L^T is upper triangular of size (k+1) x (k+1). After a breakdown the
/// state stays consistent but one of the trailing columns may be missing:
///  - u breakdown at step k: U has k columns and row k+1 of M is zero;
///  - v breakdown at step k: V has k columns and C is k x k.
class BidiagState {
 public:
  using ConstBlock = Eigen::Ref<const Matrix>;

  DecompositionMode mode() const noexcept { return mode_; }
  int k() const noexcept { return k_; }
  double beta1() const noexcept { return beta1_; }
  Index num_u() const noexcept { return nu_; }
  Index num_v() const noexcept { return nv_; }
  bool stopped() const noexcept { return stopped_; }
  const std::string& stop_reason() const noexcept { return stop_reason_; }

  ConstBlock U() const { return U_.leftCols(nu_); }
  ConstBlock V() const { return V_.leftCols(nv_); }
  /// Cached Q v_j for every stored v_j.
  ConstBlock QV() const { return QV_.leftCols(nv_); }
  ConstBlock M() const { return M_.topLeftCorner(k_ + 1, k_); }
  ConstBlock C() const { return C_.topLeftCorner(nv_, nv_); }

  /// Solution basis V_k (first k columns) and its Q image.
  ConstBlock Vk() const { return V_.leftCols(k_); }
  ConstBlock QVk() const { return QV_.leftCols(k_); }

 private:
  friend BidiagState igenGK_init(DecompositionMode, const InexactOperator&,
                                 const CovarianceOperator&, const NoiseModel&, const Vector&, int);
  friend StepStatus igenGK_step(BidiagState&, const InexactOperator&, const CovarianceOperator&,
                                const NoiseModel&);
  friend BidiagState gk_decompose(const LinearOperator&, const Vector&, int, bool);

  void reserve(Index m, Index n, int capacity);
  void ensure_capacity(int steps);
  void stop(std::string reason);

  DecompositionMode mode_ = DecompositionMode::igengk;
  int k_ = 0;
  double beta1_ = 0.0;
  Index nu_ = 0;
  Index nv_ = 0;
  bool stopped_ = false;
  std::string stop_reason_;
  Matrix U_;
  Matrix V_;
  Matrix QV_;
  Matrix M_;
  Matrix C_;
};

/// Relative breakdown threshold on normalization coefficients, scaled by beta1.
inline constexpr double kBreakdownTol = 1e-14;
/// A new basis vector is also rejected when orthogonalization removed all but
/// this fraction of the candidate's weighted norm.
inline constexpr double kCancellationTol = 1e-12;

/// Factorization and orthogonality errors measured with the exact operator.
struct RelationReport {
  double err_adjoint = 0.0;  ///< ||A^T R^-1 U_p - V_p L_p^T||_F / ||A^T R^-1 U_p||_F
  double err_forward = 0.0;  ///< ||A Q V_k - U_{k+1} M_k||_F / ||A Q V_k||_F
  double err_Vorth = 0.0;    ///< ||V^T Q V - I||_F / sqrt(#V)
  double err_Uorth = 0.0;    ///< ||U^T R^-1 U - I||_F / sqrt(#U)
};

RelationReport relation_diagnostics(const BidiagState& state, const LinearOperator& exact_a,
                                    const CovarianceOperator& q, const NoiseModel& noise);

}  // namespace igenkrylov
