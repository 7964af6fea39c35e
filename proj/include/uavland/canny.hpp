#pragma once

#include "uavland/types.hpp"

#include <cstdint>
#include <vector>

namespace uavland {

/// Canny hysteresis thresholds on the 8-bit rescaled depth plus the
/// pre-smoothing Gaussian sigma.
struct EdgeParams {
  double low = 30.0;
  double high = 90.0;
  double sigma = 1.0;

  bool valid() const { return 0.0 <= low && low < high && high <= 255.0 && sigma >= 0.0; }
};

/// Depth linearly rescaled from [d_min, d_max] to 0..255; invalid pixels get
/// a zero level and a zero validity flag.
void depth_to_u8(const DepthMap& d, std::vector<uint8_t>& levels,
                 std::vector<uint8_t>& valid);

/// Canny edge detector on an 8-bit image with a validity mask. Gradients are
/// only formed where the full smoothing and Sobel support is valid; invalid
/// pixels never become edges here (callers treat them as edges separately).
/// Returns a binary edge map.
std::vector<uint8_t> canny(const std::vector<uint8_t>& levels,
                           const std::vector<uint8_t>& valid, int width, int height,
                           const EdgeParams& params);

}  // namespace uavland
