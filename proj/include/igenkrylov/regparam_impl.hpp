#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace igenkrylov {

template <class F>
double minimize_on_grid(const std::vector<double>& grid, F&& f) {
  std::size_t best = 0;
  double best_val = f(grid[0]);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double v = f(grid[i]);
    if (v < best_val) {
      best_val = v;
      best = i;
    }
  }
  if (grid.size() < 2) return grid[best];

  double lo = std::log(grid[best == 0 ? 0 : best - 1]);
  double hi = std::log(grid[best + 1 < grid.size() ? best + 1 : best]);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = f(std::exp(x1));
  double f2 = f(std::exp(x2));
  // Width in log(lambda) approximates relative width in lambda.
  while (hi - lo > kGoldenRelWidth) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = f(std::exp(x1));
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = f(std::exp(x2));
    }
  }
  const double cand = std::exp(f1 <= f2 ? x1 : x2);
  const double cand_val = f1 <= f2 ? f1 : f2;
  return cand_val < best_val ? cand : grid[best];
}

}  // namespace igenkrylov
