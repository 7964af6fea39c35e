#pragma once

#include "uavland/types.hpp"

#include <string>
#include <unordered_map>
#include <vector>

namespace uavland {

struct VoxelIndex {
  int32_t x = 0, y = 0, z = 0;
  bool operator==(const VoxelIndex&) const = default;
};

struct VoxelIndexHash {
  size_t operator()(const VoxelIndex& v) const {
    uint64_t h = static_cast<uint32_t>(v.x);
    h = h * 0x100000001b3ull ^ static_cast<uint32_t>(v.y);
    h = h * 0x100000001b3ull ^ static_cast<uint32_t>(v.z);
    return static_cast<size_t>(h);
  }
};

struct OccupancyParams {
  double resolution = 0.5;  ///< meters per voxel
  double p_hit = 0.7;
  double p_miss = 0.4;
  double p_clamp_low = 0.12;
  double p_clamp_high = 0.97;
};

/// Sparse probabilistic voxel grid with additive log-odds updates. Unknown
/// voxels are absent from the store. Single writer for integration;
/// collision queries may run concurrently against an unchanging grid.
class OccupancyGrid {
 public:
  explicit OccupancyGrid(const OccupancyParams& params = {});

  /// Integrates a posed depth frame: every sampled valid pixel casts a ray
  /// from the camera; traversed voxels take a miss update, the endpoint
  /// voxel a hit. The camera's own voxel is left untouched.
  void integrate_depth(const DepthMap& d, const Pose& pose, const CameraIntrinsics& intr,
                       int subsample = 4);

  /// Single ray update, endpoints in world meters.
  void integrate_ray(const Eigen::Vector3d& origin, const Eigen::Vector3d& endpoint);

  /// True iff no occupied voxel (probability > 0.5) lies within `clearance`
  /// meters of segment ab. Unknown voxels count as free unless `pessimistic`.
  bool is_collision_free(const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                         double clearance, bool pessimistic = false) const;

  VoxelIndex index_of(const Eigen::Vector3d& p) const {
    return {static_cast<int32_t>(std::floor(p.x() / params_.resolution)),
            static_cast<int32_t>(std::floor(p.y() / params_.resolution)),
            static_cast<int32_t>(std::floor(p.z() / params_.resolution))};
  }
  Eigen::Vector3d center_of(const VoxelIndex& v) const {
    return {(v.x + 0.5) * params_.resolution, (v.y + 0.5) * params_.resolution,
            (v.z + 0.5) * params_.resolution};
  }

  double log_odds(const VoxelIndex& v) const;
  double occupancy_probability(const VoxelIndex& v) const;  ///< 0.5 when unknown
  bool occupied(const VoxelIndex& v) const { return log_odds(v) > 0.0; }

  size_t stored_voxels() const { return voxels_.size(); }
  const OccupancyParams& params() const { return params_; }
  std::vector<VoxelIndex> occupied_voxels() const;

  /// Text export: header "resolution <res>", then "ix iy iz log_odds" rows
  /// in deterministic index order.
  void save_text(const std::string& path) const;
  static OccupancyGrid load_text(const std::string& path, const OccupancyParams& params = {});

 private:
  void update(const VoxelIndex& v, double delta);

  OccupancyParams params_;
  double log_hit_ = 0.0, log_miss_ = 0.0, clamp_low_ = 0.0, clamp_high_ = 0.0;
  std::unordered_map<VoxelIndex, float, VoxelIndexHash> voxels_;
};

}  // namespace uavland
