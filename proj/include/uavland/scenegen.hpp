#pragma once

#include "uavland/types.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace uavland {

/// Infinite plane n.x = offset with unit normal n.
struct PlanePrim {
  Eigen::Vector3d normal = Eigen::Vector3d::UnitZ();
  double offset = 0.0;
};

/// Axis-aligned box.
struct BoxPrim {
  Eigen::Vector3d min = Eigen::Vector3d::Zero();
  Eigen::Vector3d max = Eigen::Vector3d::Zero();
};

struct SpherePrim {
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  double radius = 1.0;
};

/// Bounded inclined rectangle: half_x along the horizontal (yaw-rotated) x
/// axis, half_y along the tilted axis. tilt is the slope angle.
struct RampPrim {
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  double half_x = 1.0;
  double half_y = 1.0;
  double tilt = 0.0;  ///< radians
  double yaw = 0.0;   ///< radians

  Eigen::Vector3d axis_u() const;  ///< in-plane horizontal axis
  Eigen::Vector3d axis_v() const;  ///< in-plane inclined axis
  Eigen::Vector3d normal() const;
};

using Primitive = std::variant<PlanePrim, BoxPrim, SpherePrim, RampPrim>;

struct Scene {
  std::vector<Primitive> primitives;
};

/// Range-dependent sensor noise: axial stddev a * depth^2 plus per-pixel
/// dropout probability.
struct NoiseModel {
  double axial_a = 0.001;  ///< 1/meters
  double dropout = 0.0;

  bool valid() const { return axial_a >= 0.0 && dropout >= 0.0 && dropout < 1.0; }
};

struct RayHit {
  double depth = 0.0;               ///< z-depth along the camera axis
  Eigen::Vector3d point = Eigen::Vector3d::Zero();
  Eigen::Vector3d normal = Eigen::Vector3d::Zero();
  int primitive = -1;
};

/// Nearest intersection of the pixel ray with the scene (z-depth metric);
/// nullopt on miss. Noise-free, used by both the renderer and the mask.
std::optional<RayHit> cast_pixel_ray(const Scene& scene, const Pose& pose,
                                     const CameraIntrinsics& intr, double px, double py);

/// Ray-casts a depth map; applies axial noise and dropout (deterministic per
/// seed); misses and hits outside [d_min, d_max] are invalid.
DepthMap render_depth(const Scene& scene, const Pose& pose, const CameraIntrinsics& intr,
                      const NoiseModel& noise, uint64_t seed, float d_min, float d_max);

/// Ground-truth safe-landing mask: a pixel is safe iff its (noise-free) hit is
/// in range, the analytic surface slope is at most theta_th, and the hit point
/// keeps uav_radius meters of clearance from every analytic discontinuity or
/// primitive boundary, the view-frustum border included.
std::vector<uint8_t> safe_mask(const Scene& scene, const Pose& pose,
                               const CameraIntrinsics& intr, double uav_radius,
                               double theta_th, float d_min, float d_max);

/// Scene description file (JSON): {"primitives": [...]} with per-type keys.
Scene load_scene_json(const std::string& path);
std::string scene_to_json(const Scene& scene);

struct RandomSceneOptions {
  int min_obstacles = 3;
  int max_obstacles = 8;
  double area_half = 6.0;       ///< obstacle placement extent, meters
  double box_height_min = 3.0;  ///< tall debris so depth steps register as edges
  double box_height_max = 5.0;
  double box_half_min = 0.7;
  double box_half_max = 1.6;
  double sphere_radius_min = 2.7;
  double sphere_radius_max = 3.4;
  double ramp_tilt_min_deg = 25.0;  ///< clearly unsafe slopes
  double ramp_tilt_max_deg = 50.0;
  double min_separation = 1.2;  ///< between obstacle footprints
};

/// Rubble-like random scene on a ground plane; deterministic per seed.
Scene random_rubble_scene(uint64_t seed, const RandomSceneOptions& opts = {});

}  // namespace uavland
