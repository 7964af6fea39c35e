#include "uavland/canny.hpp"

#include <algorithm>
#include <cmath>

namespace uavland {

void depth_to_u8(const DepthMap& d, std::vector<uint8_t>& levels,
                 std::vector<uint8_t>& valid) {
  levels.assign(d.size(), 0);
  valid.assign(d.size(), 0);
  const double span = static_cast<double>(d.d_max) - d.d_min;
  for (int y = 0; y < d.height; ++y) {
    for (int x = 0; x < d.width; ++x) {
      if (!d.valid(x, y)) continue;
      const size_t i = static_cast<size_t>(y) * d.width + x;
      const double t = (d.at(x, y) - d.d_min) / span;
      levels[i] = static_cast<uint8_t>(std::lround(std::clamp(t, 0.0, 1.0) * 255.0));
      valid[i] = 1;
    }
  }
}

namespace {

// Integer-quantized Gaussian taps. Integer arithmetic keeps symmetric depth
// steps exactly tied so non-maximum suppression resolves them by its tie
// rule instead of by floating-point rounding.
std::vector<int64_t> gaussian_taps(double sigma) {
  if (sigma <= 0.0) return {4096};
  const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
  std::vector<int64_t> taps(static_cast<size_t>(2 * radius + 1));
  for (int k = -radius; k <= radius; ++k) {
    const double g = std::exp(-0.5 * (k * k) / (sigma * sigma));
    taps[static_cast<size_t>(k + radius)] = std::llround(4096.0 * g);
  }
  return taps;
}

}  // namespace

std::vector<uint8_t> canny(const std::vector<uint8_t>& levels,
                           const std::vector<uint8_t>& valid, int width, int height,
                           const EdgeParams& params) {
  const size_t n = static_cast<size_t>(width) * height;
  std::vector<uint8_t> edges(n, 0);
  if (width < 3 || height < 3) return edges;

  const std::vector<int64_t> taps = gaussian_taps(params.sigma);
  const int radius = static_cast<int>(taps.size() / 2);
  int64_t tap_sum = 0;
  for (int64_t t : taps) tap_sum += t;

  auto clamp_x = [&](int x) { return std::clamp(x, 0, width - 1); };
  auto clamp_y = [&](int y) { return std::clamp(y, 0, height - 1); };

  // Separable blur over integer numerators; a pixel stays valid only if its
  // whole (replicated) support is valid.
  std::vector<int64_t> tmp(n, 0), blur(n, 0);
  std::vector<uint8_t> vtmp(n, 0), vblur(n, 0);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      int64_t acc = 0;
      uint8_t ok = 1;
      for (int k = -radius; k <= radius; ++k) {
        const size_t j = static_cast<size_t>(y) * width + clamp_x(x + k);
        acc += taps[static_cast<size_t>(k + radius)] * levels[j];
        ok &= valid[j];
      }
      tmp[static_cast<size_t>(y) * width + x] = acc;
      vtmp[static_cast<size_t>(y) * width + x] = ok;
    }
  }
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      int64_t acc = 0;
      uint8_t ok = 1;
      for (int k = -radius; k <= radius; ++k) {
        const size_t j = static_cast<size_t>(clamp_y(y + k)) * width + x;
        acc += taps[static_cast<size_t>(k + radius)] * tmp[j];
        ok &= vtmp[j];
      }
      blur[static_cast<size_t>(y) * width + x] = acc;
      vblur[static_cast<size_t>(y) * width + x] = ok;
    }
  }

  // Sobel on the blurred numerators; magnitude rescaled back to level units.
  const double mag_scale = 1.0 / (static_cast<double>(tap_sum) * tap_sum);
  std::vector<int64_t> gx(n, 0), gy(n, 0);
  std::vector<float> mag(n, 0.0f);
  std::vector<uint8_t> vgrad(n, 0);
  for (int y = 1; y < height - 1; ++y) {
    for (int x = 1; x < width - 1; ++x) {
      const size_t i = static_cast<size_t>(y) * width + x;
      uint8_t ok = 1;
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx)
          ok &= vblur[static_cast<size_t>(y + dy) * width + (x + dx)];
      if (!ok) continue;
      auto b = [&](int dx, int dy) {
        return blur[static_cast<size_t>(y + dy) * width + (x + dx)];
      };
      gx[i] = (b(1, -1) + 2 * b(1, 0) + b(1, 1)) - (b(-1, -1) + 2 * b(-1, 0) + b(-1, 1));
      gy[i] = (b(-1, 1) + 2 * b(0, 1) + b(1, 1)) - (b(-1, -1) + 2 * b(0, -1) + b(1, -1));
      mag[i] = static_cast<float>(
          std::sqrt(static_cast<double>(gx[i]) * gx[i] + static_cast<double>(gy[i]) * gy[i]) *
          mag_scale);
      vgrad[i] = 1;
    }
  }

  // Non-maximum suppression along the quantized gradient direction. Ties keep
  // the pixel on the increasing-intensity side: mag >= behind, mag > ahead.
  static const int kOct[8][2] = {{1, 0}, {1, 1}, {0, 1}, {-1, 1},
                                 {-1, 0}, {-1, -1}, {0, -1}, {1, -1}};
  std::vector<uint8_t> strong_or_weak(n, 0);  // 1 weak, 2 strong
  for (int y = 1; y < height - 1; ++y) {
    for (int x = 1; x < width - 1; ++x) {
      const size_t i = static_cast<size_t>(y) * width + x;
      if (!vgrad[i] || mag[i] < params.low) continue;
      const double angle = std::atan2(static_cast<double>(gy[i]), static_cast<double>(gx[i]));
      int oct = static_cast<int>(std::lround(angle / (M_PI / 4.0)));
      oct = ((oct % 8) + 8) % 8;
      const int dx = kOct[oct][0], dy = kOct[oct][1];
      const size_t ahead = static_cast<size_t>(y + dy) * width + (x + dx);
      const size_t behind = static_cast<size_t>(y - dy) * width + (x - dx);
      const float m_ahead = vgrad[ahead] ? mag[ahead] : 0.0f;
      const float m_behind = vgrad[behind] ? mag[behind] : 0.0f;
      if (mag[i] >= m_behind && mag[i] > m_ahead) {
        strong_or_weak[i] = mag[i] >= params.high ? 2 : 1;
      }
    }
  }

  // Hysteresis: grow from strong pixels through 8-connected weak ones.
  std::vector<size_t> stack;
  for (size_t i = 0; i < n; ++i) {
    if (strong_or_weak[i] == 2 && !edges[i]) {
      edges[i] = 1;
      stack.push_back(i);
      while (!stack.empty()) {
        const size_t j = stack.back();
        stack.pop_back();
        const int jx = static_cast<int>(j % width), jy = static_cast<int>(j / width);
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            const int qx = jx + dx, qy = jy + dy;
            if (qx < 0 || qx >= width || qy < 0 || qy >= height) continue;
            const size_t q = static_cast<size_t>(qy) * width + qx;
            if (strong_or_weak[q] && !edges[q]) {
              edges[q] = 1;
              stack.push_back(q);
            }
          }
        }
      }
    }
  }
  return edges;
}

}  // namespace uavland
