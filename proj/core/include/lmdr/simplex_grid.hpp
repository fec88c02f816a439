#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace lmdr {

/// Number of grid subdivisions for a step: the nearest integer to 1/step.
/// Throws unless step is in (0, 1].
inline std::size_t grid_divisions(double step) {
  if (!(step > 0.0 && step <= 1.0)) throw std::invalid_argument("simplex grid: step must lie in (0, 1]");
  return static_cast<std::size_t>(std::llround(1.0 / step));
}

/// Calls f(point) for every point of {k / n : k in N^d, sum k = n}, enumerated
/// as integer compositions of n into d parts. `point` is reused between calls.
template <typename F>
void for_each_simplex_point(std::size_t d, std::size_t n, F&& f) {
  if (d == 0) throw std::invalid_argument("simplex grid: dimension must be positive");
  std::vector<std::size_t> k(d, 0);
  std::vector<double> point(d, 0.0);
  const double inv = 1.0 / static_cast<double>(n);
  std::size_t used = 0;  // sum of k[0 .. d-2]
  for (;;) {
    k[d - 1] = n - used;
    for (std::size_t i = 0; i < d; ++i) point[i] = static_cast<double>(k[i]) * inv;
    f(static_cast<const std::vector<double>&>(point));
    // odometer over the first d-1 parts
    std::size_t i = d - 1;
    for (;;) {
      if (i == 0) return;
      --i;
      if (used < n) {
        ++k[i];
        ++used;
        break;
      }
      used -= k[i];
      k[i] = 0;
    }
  }
}

/// Number of points of the grid: C(n + d - 1, d - 1).
inline double simplex_grid_size(std::size_t d, std::size_t n) {
  double c = 1.0;
  for (std::size_t i = 1; i < d; ++i) c = c * static_cast<double>(n + i) / static_cast<double>(i);
  return c;
}

inline std::vector<std::vector<double>> simplex_grid(std::size_t d, double step) {
  std::vector<std::vector<double>> out;
  for_each_simplex_point(d, grid_divisions(step), [&](const std::vector<double>& p) { out.push_back(p); });
  return out;
}

}  // namespace lmdr
