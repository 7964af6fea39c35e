#pragma once

#include "uavland/types.hpp"

#include <string>
#include <vector>

namespace uavland {

/// Per-frame candidate landing site in pixel, depth and world coordinates.
struct CandidateSite {
  Eigen::Vector2i pixel = Eigen::Vector2i::Zero();
  double depth = 0.0;                                ///< meters
  Eigen::Vector3d world = Eigen::Vector3d::Zero();   ///< meters
  double score = 0.0;                                ///< fused decision value
  double flatness_radius_px = 0.0;                   ///< raw flatness at the pixel
};

struct DetectionParams {
  double score_threshold = 0.72;
  double uav_radius = 0.26;   ///< meters
  double nms_radius_px = 0.0; ///< <= 0: use the projected UAV radius per pixel

  bool valid() const {
    return score_threshold > 0.0 && score_threshold < 1.0 && uav_radius > 0.0;
  }
};

/// Thresholds the decision map, rejects sites whose flat surrounding is
/// smaller than the projected UAV footprint, and thins the result to local
/// maxima of the decision score. jfl_raw must be the raw pixel-unit flatness
/// map, not the normalized one fused into the decision map.
std::vector<CandidateSite> detect_dense_sites(const DecisionMap& decision,
                                              const Costmap& jfl_raw, const DepthMap& d,
                                              const CameraIntrinsics& intr, const Pose& pose,
                                              const DetectionParams& params);

/// One JSON object per site: {frame, px, py, depth_m, x, y, z, score}.
std::string sites_to_jsonl(const std::vector<CandidateSite>& sites, int frame);

}  // namespace uavland
