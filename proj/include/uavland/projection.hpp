#pragma once

#include "uavland/types.hpp"

namespace uavland {

/// Back-projects pixel p at the given z-depth into the world frame.
/// Throws Error("invalid-depth") / Error("out-of-bounds").
Eigen::Vector3d pixel_to_world(const Eigen::Vector2d& p, double depth,
                               const CameraIntrinsics& intr, const Pose& pose);

/// Inverse of pixel_to_world. Returns pixel coordinates and the z-depth of
/// the world point; throws Error("behind-camera") if depth <= 0.
void world_to_pixel(const Eigen::Vector3d& world, const CameraIntrinsics& intr,
                    const Pose& pose, Eigen::Vector2d& pixel_out, double& depth_out);

/// Projected UAV footprint radius in pixels at the given depth.
/// Conservative: uses the larger focal length.
double uav_radius_pixels(double r_uav, double depth, const CameraIntrinsics& intr);

}  // namespace uavland
