#include "igenkrylov/tomo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "igenkrylov/errors.hpp"
#include "igenkrylov/random.hpp"

namespace igenkrylov {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Ellipse {
  double amp, a, b, x0, y0, phi_deg;
};

// Modified Shepp-Logan (Toft) on [-1, 1]^2.
constexpr Ellipse kSheppLogan[] = {
    {1.0, 0.69, 0.92, 0.0, 0.0, 0.0},
    {-0.8, 0.6624, 0.8740, 0.0, -0.0184, 0.0},
    {-0.2, 0.1100, 0.3100, 0.22, 0.0, -18.0},
    {-0.2, 0.1600, 0.4100, -0.22, 0.0, 18.0},
    {0.1, 0.2100, 0.2500, 0.0, 0.35, 0.0},
    {0.1, 0.0460, 0.0460, 0.0, 0.1, 0.0},
    {0.1, 0.0460, 0.0460, 0.0, -0.1, 0.0},
    {0.1, 0.0460, 0.0230, -0.08, -0.605, 0.0},
    {0.1, 0.0230, 0.0230, 0.0, -0.606, 0.0},
    {0.1, 0.0230, 0.0460, 0.06, -0.605, 0.0},
};

// Siddon traversal of one ray through the pixel grid; appends (pixel, length).
void trace_ray(Index n, double x0, double y0, double dx, double dy,
               std::vector<std::pair<Index, double>>& out, std::vector<double>& params) {
  const double half = 0.5 * static_cast<double>(n);
  double smin = -std::numeric_limits<double>::infinity();
  double smax = std::numeric_limits<double>::infinity();
  auto clip = [&](double p0, double dp) {
    if (dp == 0.0) {
      if (p0 < -half || p0 >= half) {
        smin = 1.0;
        smax = 0.0;
      }
      return;
    }
    double s1 = (-half - p0) / dp;
    double s2 = (half - p0) / dp;
    if (s1 > s2) std::swap(s1, s2);
    smin = std::max(smin, s1);
    smax = std::min(smax, s2);
  };
  clip(x0, dx);
  clip(y0, dy);
  if (!(smax > smin)) return;

  params.clear();
  params.push_back(smin);
  params.push_back(smax);
  auto planes = [&](double p0, double dp) {
    if (dp == 0.0) return;
    for (Index q = 0; q <= n; ++q) {
      const double s = (static_cast<double>(q) - half - p0) / dp;
      if (s > smin && s < smax) params.push_back(s);
    }
  };
  planes(x0, dx);
  planes(y0, dy);
  std::sort(params.begin(), params.end());

  for (std::size_t i = 0; i + 1 < params.size(); ++i) {
    const double len = params[i + 1] - params[i];
    if (!(len > 1e-13)) continue;
    const double sm = 0.5 * (params[i] + params[i + 1]);
    const auto ix = static_cast<Index>(std::floor(x0 + sm * dx + half));
    const auto iy = static_cast<Index>(std::floor(y0 + sm * dy + half));
    if (ix < 0 || ix >= n || iy < 0 || iy >= n) continue;
    out.emplace_back((n - 1 - iy) + ix * n, len);
  }
}

RadonOperator::SparseMatrix build_ray_matrix(const CTGeometry& g) {
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(g.rows()) * static_cast<std::size_t>(2 * g.n));
  std::vector<std::pair<Index, double>> hits;
  std::vector<double> params;
  const double centre = 0.5 * static_cast<double>(g.nrays - 1);
  for (std::size_t a = 0; a < g.angles_deg.size(); ++a) {
    const auto [c, s] = cos_sin_deg(g.angles_deg[a]);
    for (Index r = 0; r < g.nrays; ++r) {
      const double t = (static_cast<double>(r) - centre) * g.spacing;
      hits.clear();
      trace_ray(g.n, t * c, t * s, -s, c, hits, params);
      const Index row = static_cast<Index>(a) * g.nrays + r;
      for (const auto& [pix, len] : hits) triplets.emplace_back(row, pix, len);
    }
  }
  RadonOperator::SparseMatrix m(g.rows(), g.cols());
  m.setFromTriplets(triplets.begin(), triplets.end());
  m.makeCompressed();
  return m;
}

}  // namespace

Index CTGeometry::default_nrays(Index n) {
  return static_cast<Index>(std::lround(std::sqrt(2.0) * static_cast<double>(n)));
}

std::vector<double> CTGeometry::default_angles() {
  std::vector<double> a;
  for (int deg = 1; deg <= 176; deg += 5) a.push_back(deg);
  return a;
}

CTGeometry CTGeometry::standard(Index n) {
  CTGeometry g;
  g.n = n;
  g.angles_deg = default_angles();
  g.nrays = default_nrays(n);
  g.validate();
  return g;
}

void CTGeometry::validate() const {
  if (n < 1) throw InvalidParameterError("CT grid size must be positive");
  if (nrays < 1) throw InvalidParameterError("CT geometry needs at least one ray per angle");
  if (angles_deg.empty()) throw InvalidParameterError("CT geometry needs at least one angle");
  if (!(spacing > 0.0) || !std::isfinite(spacing)) {
    throw InvalidParameterError("detector spacing must be positive");
  }
  for (double a : angles_deg) {
    if (!std::isfinite(a)) throw InvalidParameterError("projection angles must be finite");
  }
}

std::pair<double, double> cos_sin_deg(double deg) {
  double r = std::fmod(deg, 360.0);
  if (r < 0.0) r += 360.0;
  if (r == 0.0) return {1.0, 0.0};
  if (r == 90.0) return {0.0, 1.0};
  if (r == 180.0) return {-1.0, 0.0};
  if (r == 270.0) return {0.0, -1.0};
  const double rad = r * kPi / 180.0;
  return {std::cos(rad), std::sin(rad)};
}

RadonOperator::RadonOperator(CTGeometry geometry)
    : LinearOperator((geometry.validate(), geometry.rows()), geometry.cols()),
      geom_(std::move(geometry)),
      a_(build_ray_matrix(geom_)),
      at_(a_) {}

Vector RadonOperator::do_apply(const Vector& x) const { return a_ * x; }

Vector RadonOperator::do_apply_adjoint(const Vector& y) const { return at_.transpose() * y; }

Vector radon_apply(const CTGeometry& geom, const Vector& image) {
  return RadonOperator(geom).apply(image);
}

Vector radon_adjoint(const CTGeometry& geom, const Vector& sinogram) {
  return RadonOperator(geom).apply_adjoint(sinogram);
}

Vector make_phantom(Index n) {
  if (n < 16) throw InvalidParameterError("phantom size must be at least 16");
  Vector img = Vector::Zero(n * n);
  const double dn = static_cast<double>(n);
  for (Index j = 0; j < n; ++j) {
    const double x = (2.0 * static_cast<double>(j) + 1.0) / dn - 1.0;
    for (Index i = 0; i < n; ++i) {
      const double y = 1.0 - (2.0 * static_cast<double>(i) + 1.0) / dn;
      double v = 0.0;
      for (const auto& e : kSheppLogan) {
        const double phi = e.phi_deg * kPi / 180.0;
        const double xr = (x - e.x0) * std::cos(phi) + (y - e.y0) * std::sin(phi);
        const double yr = -(x - e.x0) * std::sin(phi) + (y - e.y0) * std::cos(phi);
        if ((xr * xr) / (e.a * e.a) + (yr * yr) / (e.b * e.b) <= 1.0) v += e.amp;
      }
      img[i + j * n] = std::clamp(v, 0.0, 1.0);
    }
  }
  return img;
}

Observation synthesize_observation(const LinearOperator& a, const Vector& s_true,
                                   double noise_level, std::uint64_t seed) {
  if (!(noise_level >= 0.0) || !std::isfinite(noise_level)) {
    throw InvalidParameterError("noise level must be finite and nonnegative");
  }
  Observation obs;
  obs.d_true = a.apply(s_true);
  obs.d = obs.d_true;
  if (noise_level > 0.0) {
    const double dnorm = obs.d_true.norm();
    if (!(dnorm > 0.0)) throw DegenerateInputError("noise-free data is zero");
    Vector z = rng::NormalStream(rng::derive(seed, "observation-noise")).vector(a.rows());
    z *= noise_level * dnorm / z.norm();
    obs.d += z;
    obs.noise_norm = z.norm();
  }
  return obs;
}

Observation synthesize_observation(const CTGeometry& geom, const Vector& s_true,
                                   double noise_level, std::uint64_t seed) {
  return synthesize_observation(RadonOperator(geom), s_true, noise_level, seed);
}

void AngleSchedule::validate() const {
  if (num_iters < 1) throw ConfigError("angle schedule needs num_iters >= 1");
  if (!std::isfinite(alpha_start) || !std::isfinite(alpha_end) || alpha_start < 0.0 ||
      alpha_end < 0.0) {
    throw ConfigError("angle perturbation magnitudes must be finite and nonnegative");
  }
  if ((alpha_start == 0.0) != (alpha_end == 0.0)) {
    throw ConfigError("angle perturbation magnitudes must be both zero or both positive");
  }
}

double AngleSchedule::alpha(int k) const {
  if (k < 1) throw InvalidParameterError("iteration index must be >= 1");
  if (alpha_start == 0.0) return 0.0;
  if (k == 1 || num_iters == 1) return alpha_start;
  if (k >= num_iters) return alpha_end;
  const double t = static_cast<double>(k - 1) / static_cast<double>(num_iters - 1);
  return std::exp(std::log(alpha_start) + t * (std::log(alpha_end) - std::log(alpha_start)));
}

Vector AngleSchedule::direction(int k, Index num_angles) const {
  if (k < 1) throw InvalidParameterError("iteration index must be >= 1");
  const auto kk = static_cast<std::uint64_t>(std::min(k, num_iters));
  return rng::NormalStream(rng::derive(rng::derive(seed, "angle-perturbation"), kk))
      .vector(num_angles);
}

CTGeometry perturb_angles(const CTGeometry& geom, double alpha, const Vector& g) {
  if (g.size() != static_cast<Index>(geom.angles_deg.size())) {
    throw DimensionError("angle perturbation length mismatch");
  }
  CTGeometry out = geom;
  for (std::size_t i = 0; i < out.angles_deg.size(); ++i) {
    out.angles_deg[i] += alpha * g[static_cast<Index>(i)];
  }
  return out;
}

std::shared_ptr<const RadonOperator> perturbed_angle_operator(const CTGeometry& geom,
                                                              const AngleSchedule& schedule,
                                                              int k) {
  schedule.validate();
  const double a = schedule.alpha(k);
  if (a == 0.0) return std::make_shared<const RadonOperator>(geom);
  const auto nang = static_cast<Index>(geom.angles_deg.size());
  return std::make_shared<const RadonOperator>(
      perturb_angles(geom, a, schedule.direction(k, nang)));
}

AngleInexactRadon::AngleInexactRadon(CTGeometry geom, AngleSchedule schedule)
    : geom_(std::move(geom)),
      schedule_(schedule),
      exact_(std::make_shared<const RadonOperator>(geom_)) {
  schedule_.validate();
}

std::shared_ptr<const RadonOperator> AngleInexactRadon::at(int k) const {
  if (k < 1) throw InvalidParameterError("iteration index must be >= 1");
  const int kk = std::min(k, schedule_.num_iters);
  if (schedule_.alpha(kk) == 0.0) return exact_;
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = cache_.find(kk);
    if (it != cache_.end()) return it->second;
  }
  auto op = perturbed_angle_operator(geom_, schedule_, kk);
  std::lock_guard<std::mutex> lock(mutex_);
  cache_[kk] = op;
  while (cache_.size() > 2) cache_.erase(cache_.begin());
  return op;
}

Vector AngleInexactRadon::forward(int k, const Vector& x) const { return at(k)->apply(x); }

Vector AngleInexactRadon::adjoint(int k, const Vector& y) const {
  return at(k)->apply_adjoint(y);
}

}  // namespace igenkrylov
