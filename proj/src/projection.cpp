#include "uavland/projection.hpp"

namespace uavland {

Eigen::Vector3d pixel_to_world(const Eigen::Vector2d& p, double depth,
                               const CameraIntrinsics& intr, const Pose& pose) {
  if (!(std::isfinite(depth) && depth > 0.0)) {
    throw Error("invalid-depth", "depth must be finite and positive, got " +
                                     std::to_string(depth));
  }
  if (p.x() < 0.0 || p.x() >= intr.width || p.y() < 0.0 || p.y() >= intr.height) {
    throw Error("out-of-bounds", "pixel (" + std::to_string(p.x()) + ", " +
                                     std::to_string(p.y()) + ") outside image");
  }
  const Eigen::Vector3d cam((p.x() - intr.cx) * depth / intr.fx,
                            (p.y() - intr.cy) * depth / intr.fy, depth);
  return pose.apply(cam);
}

void world_to_pixel(const Eigen::Vector3d& world, const CameraIntrinsics& intr,
                    const Pose& pose, Eigen::Vector2d& pixel_out, double& depth_out) {
  const Eigen::Vector3d cam = pose.apply_inverse(world);
  if (cam.z() <= 0.0) {
    throw Error("behind-camera", "point projects behind the image plane");
  }
  depth_out = cam.z();
  pixel_out.x() = intr.cx + intr.fx * cam.x() / cam.z();
  pixel_out.y() = intr.cy + intr.fy * cam.y() / cam.z();
}

double uav_radius_pixels(double r_uav, double depth, const CameraIntrinsics& intr) {
  if (!(std::isfinite(depth) && depth > 0.0)) {
    throw Error("invalid-depth", "footprint projection requires positive depth");
  }
  return std::max(intr.fx, intr.fy) * r_uav / depth;
}

}  // namespace uavland
