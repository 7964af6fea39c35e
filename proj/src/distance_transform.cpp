#include "uavland/distance_transform.hpp"

#include <algorithm>

namespace uavland {

namespace {

// 1D lower envelope of parabolas f(q) + (x - q)^2, evaluated at all x.
void transform_1d(const double* f, int n, double* out, int* hull, double* bounds) {
  int k = 0;
  hull[0] = 0;
  bounds[0] = -kUnreachable;
  bounds[1] = kUnreachable;
  for (int q = 1; q < n; ++q) {
    double s;
    for (;;) {
      const int p = hull[k];
      s = ((f[q] + static_cast<double>(q) * q) - (f[p] + static_cast<double>(p) * p)) /
          (2.0 * (q - p));
      if (s > bounds[k]) break;
      --k;
    }
    ++k;
    hull[k] = q;
    bounds[k] = s;
    bounds[k + 1] = kUnreachable;
  }
  int j = 0;
  for (int x = 0; x < n; ++x) {
    while (bounds[j + 1] < x) ++j;
    const int p = hull[j];
    const double dx = x - p;
    out[x] = dx * dx + f[p];
  }
}

}  // namespace

std::vector<double> squared_distance_transform(const std::vector<uint8_t>& sites,
                                               int width, int height) {
  std::vector<double> dist(static_cast<size_t>(width) * height, kUnreachable);
  for (size_t i = 0; i < dist.size(); ++i) {
    if (sites[i]) dist[i] = 0.0;
  }

  const int n = std::max(width, height);
  std::vector<double> f(static_cast<size_t>(n));
  std::vector<double> g(static_cast<size_t>(n));
  std::vector<int> hull(static_cast<size_t>(n));
  std::vector<double> bounds(static_cast<size_t>(n) + 1);

  for (int x = 0; x < width; ++x) {
    for (int y = 0; y < height; ++y) f[static_cast<size_t>(y)] = dist[static_cast<size_t>(y) * width + x];
    transform_1d(f.data(), height, g.data(), hull.data(), bounds.data());
    for (int y = 0; y < height; ++y) dist[static_cast<size_t>(y) * width + x] = g[static_cast<size_t>(y)];
  }
  for (int y = 0; y < height; ++y) {
    double* row = dist.data() + static_cast<size_t>(y) * width;
    std::copy(row, row + width, f.data());
    transform_1d(f.data(), width, row, hull.data(), bounds.data());
  }
  // Clamp unreachable cells back to the sentinel (the envelope adds x^2 terms).
  for (double& d : dist) {
    if (d >= kUnreachable) d = kUnreachable;
  }
  return dist;
}

}  // namespace uavland
