#pragma once

#include "uavland/types.hpp"

#include <string>
#include <vector>

namespace uavland {

/// Portable FloatMap, grayscale "Pf", little-endian. PFM carries no sensor
/// range, so d_min/d_max must be supplied when reading.
void write_pfm(const std::string& path, const DepthMap& d);
DepthMap read_pfm(const std::string& path, float d_min, float d_max);

/// Raw float32 raster with a one-line text header "width height d_min d_max".
/// Rows are stored top to bottom, little-endian.
void write_depth_raw(const std::string& path, const DepthMap& d);
DepthMap read_depth_raw(const std::string& path);

/// Reads either format based on file extension (.pfm or anything else raw).
DepthMap read_depth_auto(const std::string& path, float d_min, float d_max);

/// Pose rows "timestamp_s, tx, ty, tz, qw, qx, qy, qz", one per frame,
/// matched to frames by index. '#' starts a comment line.
struct TimedPose {
  double timestamp_s = 0.0;
  Pose pose;
};
std::vector<TimedPose> read_pose_csv(const std::string& path);
void write_pose_csv(const std::string& path, const std::vector<TimedPose>& poses);

/// 8-bit PGM with scores min-max scaled to 0..255; invalid pixels write 0.
void write_costmap_pgm(const std::string& path, const Costmap& m);

/// Raw float raster of a costmap (same header as depth; range fields carry
/// the value min/max). Invalid pixels write NaN.
void write_costmap_raw(const std::string& path, const Costmap& m);

}  // namespace uavland
