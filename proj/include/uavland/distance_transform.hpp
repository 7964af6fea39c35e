#pragma once

#include <cstdint>
#include <vector>

namespace uavland {

/// Exact squared Euclidean distance transform of a binary map (two-pass
/// lower-envelope-of-parabolas algorithm, columns then rows). Nonzero input
/// pixels are sites; output is the squared pixel distance to the nearest
/// site. For integer pixel grids the results are whole numbers, exactly
/// representable in double. A map with no sites returns kUnreachable
/// everywhere.
std::vector<double> squared_distance_transform(const std::vector<uint8_t>& sites,
                                               int width, int height);

inline constexpr double kUnreachable = 1e20;

}  // namespace uavland
