#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include <Eigen/SparseCore>

#include "igenkrylov/linop.hpp"
#include "igenkrylov/types.hpp"

namespace igenkrylov {

/// Parallel-beam geometry. The image is n x n unit pixels centred at the
/// origin and stacked column by column (pixel (row i, col j) -> i + j*n, row 0
/// at the top). For angle theta the rays run along (-sin theta, cos theta) and
/// sit at offsets t_r = (r - (nrays-1)/2) * spacing along (cos theta, sin theta).
/// Sinogram entries are ordered angle-major: ray r of angle a -> a*nrays + r.
struct CTGeometry {
  Index n = 64;
  std::vector<double> angles_deg;
  Index nrays = 0;
  double spacing = 1.0;

  /// round(sqrt(2) n): 91 for n = 64, 181 for n = 128.
  static Index default_nrays(Index n);
  /// 1, 6, 11, ..., 176 degrees.
  static std::vector<double> default_angles();
  static CTGeometry standard(Index n);

  Index rows() const noexcept { return static_cast<Index>(angles_deg.size()) * nrays; }
  Index cols() const noexcept { return n * n; }
  void validate() const;
};

/// Exact cosine/sine of an angle in degrees (exact at multiples of 90).
std::pair<double, double> cos_sin_deg(double deg);

/// Ray matrix of the geometry, built once by Siddon traversal: entry (ray,
/// pixel) is the length of the ray inside that pixel.
class RadonOperator final : public LinearOperator {
 public:
  using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

  explicit RadonOperator(CTGeometry geometry);

  OperatorKind kind() const noexcept override { return OperatorKind::radon; }
  const CTGeometry& geometry() const noexcept { return geom_; }
  const SparseMatrix& matrix() const noexcept { return a_; }

 protected:
  Vector do_apply(const Vector& x) const override;
  Vector do_apply_adjoint(const Vector& y) const override;

 private:
  CTGeometry geom_;
  SparseMatrix a_;
  Eigen::SparseMatrix<double, Eigen::ColMajor> at_;  // same entries, column-major for A^T y
};

Vector radon_apply(const CTGeometry& geom, const Vector& image);
Vector radon_adjoint(const CTGeometry& geom, const Vector& sinogram);

/// Modified Shepp-Logan phantom on n x n pixels, values clamped to [0, 1].
Vector make_phantom(Index n);

struct Observation {
  Vector d;
  Vector d_true;
  double noise_norm = 0.0;  ///< ||d - d_true||_2
};

/// d = A s_true + eps with ||eps||_2 = noise_level * ||A s_true||_2 exactly.
Observation synthesize_observation(const LinearOperator& a, const Vector& s_true,
                                   double noise_level, std::uint64_t seed);
Observation synthesize_observation(const CTGeometry& geom, const Vector& s_true,
                                   double noise_level, std::uint64_t seed);

/// Per-iteration angle perturbation magnitudes alpha_k, logarithmically spaced
/// from alpha_start (k = 1) to alpha_end (k = num_iters). Both zero gives the
/// exact geometry at every iteration.
struct AngleSchedule {
  double alpha_start = 1e-1;
  double alpha_end = 1e-6;
  int num_iters = 50;
  std::uint64_t seed = 0;

  void validate() const;
  /// alpha_k; k past num_iters keeps alpha_end.
  double alpha(int k) const;
  /// Standard normal direction g_k, one entry per angle.
  Vector direction(int k, Index num_angles) const;
};

/// theta + alpha * g.
CTGeometry perturb_angles(const CTGeometry& geom, double alpha, const Vector& g);

/// Radon operator with angles theta_true + alpha_k g_k.
std::shared_ptr<const RadonOperator> perturbed_angle_operator(const CTGeometry& geom,
                                                              const AngleSchedule& schedule,
                                                              int k);

/// Radon operator whose k-th forward and adjoint products both use the
/// perturbed angles of iteration k. Rebuilt operators are cached briefly since
/// consecutive products reuse the same iteration.
class AngleInexactRadon final : public InexactOperator {
 public:
  AngleInexactRadon(CTGeometry geom, AngleSchedule schedule);

  Index rows() const noexcept override { return exact_->rows(); }
  Index cols() const noexcept override { return exact_->cols(); }
  Vector forward(int k, const Vector& x) const override;
  Vector adjoint(int k, const Vector& y) const override;
  const LinearOperator& exact() const override { return *exact_; }

  const AngleSchedule& schedule() const noexcept { return schedule_; }

 private:
  std::shared_ptr<const RadonOperator> at(int k) const;

  CTGeometry geom_;
  AngleSchedule schedule_;
  std::shared_ptr<const RadonOperator> exact_;
  mutable std::mutex mutex_;
  mutable std::map<int, std::shared_ptr<const RadonOperator>> cache_;
};

}  // namespace igenkrylov
