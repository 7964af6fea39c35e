#pragma once

#include "uavland/canny.hpp"
#include "uavland/types.hpp"

namespace uavland {

/// Fusion weights for the depth-confidence, flatness, steepness and energy
/// maps. Must be in [0,1] and sum to 1.
struct CostmapWeights {
  double c1 = 0.05;  ///< depth confidence
  double c2 = 0.40;  ///< flatness
  double c3 = 0.40;  ///< steepness
  double c4 = 0.15;  ///< energy

  bool valid(double tol = 1e-9) const {
    auto in01 = [](double c) { return c >= 0.0 && c <= 1.0; };
    return in01(c1) && in01(c2) && in01(c3) && in01(c4) &&
           std::abs(c1 + c2 + c3 + c4 - 1.0) <= tol;
  }
};

struct SteepnessParams {
  double theta_th = 15.0 * M_PI / 180.0;  ///< maximum tolerable slope, radians
  int window = 5;                         ///< gradient smoothing window, odd pixels

  bool valid() const { return theta_th > 0.0 && theta_th < M_PI / 2 && window >= 3 && window % 2 == 1; }
};

// Scalar forms of the per-pixel scores, double precision.

/// Depth-confidence score: 1 - (d^2 - min_d2) / max_d2.
inline double depth_confidence_score(double d2, double min_d2, double max_d2) {
  return 1.0 - (d2 - min_d2) / max_d2;
}

/// Slope score exp(-theta^2 / (2 theta_th^2)).
inline double steepness_score(double theta, double theta_th) {
  return std::exp(-(theta * theta) / (2.0 * theta_th * theta_th));
}

/// Weighted fusion of already-normalized scores.
inline double combine_scores(double jde, double jfl, double jn, double jec,
                             const CostmapWeights& w) {
  return w.c1 * jde + w.c2 * jfl + w.c3 * jn + w.c4 * jec;
}

/// Per-pixel confidence in the depth measurement; scores in (0, 1], with the
/// frame's nearest pixel scoring 1. Min/max are per-frame statistics over
/// valid pixels. Throws Error("empty-depth") if no pixel is valid.
Costmap depth_confidence(const DepthMap& d);

/// Flatness as the exact Euclidean distance (pixels) to the nearest depth
/// discontinuity. Edges come from Canny on the 8-bit rescaled depth; image
/// border pixels and invalid pixels always count as edges.
Costmap flatness(const DepthMap& d, const EdgeParams& params);

/// World-frame surface normals from averaged 3D point gradients. Pixels whose
/// smoothing window touches invalid depth are invalid. Normals are oriented
/// with a non-negative world-z component.
NormalMap surface_normals(const DepthMap& d, const CameraIntrinsics& intr,
                          const Pose& pose, int window);

/// Slope score from the deviation of the surface normal from world-up.
Costmap steepness(const DepthMap& d, const CameraIntrinsics& intr, const Pose& pose,
                  const SteepnessParams& params);

/// Energy proxy: straight-line distance in meters from the camera origin to
/// each pixel's 3D point (body frame). Raw values grow with distance; the
/// fusion step inverts them so nearer sites score higher.
Costmap energy(const DepthMap& d, const CameraIntrinsics& intr);

/// Fuses the four maps into the decision map. Depth confidence and flatness
/// are min-max normalized, energy is normalized and inverted, steepness is
/// used as-is. A degenerate map (max == min) normalizes to all ones. The
/// output mask is the intersection of the input masks.
DecisionMap combine(const Costmap& jde, const Costmap& jfl, const Costmap& jn,
                    const Costmap& jec, const CostmapWeights& w);

}  // namespace uavland
