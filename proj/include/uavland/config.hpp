#pragma once

#include "uavland/costmaps.hpp"
#include "uavland/occupancy_grid.hpp"
#include "uavland/rrt_star.hpp"
#include "uavland/scenegen.hpp"
#include "uavland/site_detection.hpp"
#include "uavland/site_registry.hpp"

#include <string>

namespace uavland {

/// Whole-pipeline configuration with flat "key = value" file form.
struct PipelineConfig {
  CostmapWeights weights;
  DetectionParams detection;
  ClusterParams clustering;
  SteepnessParams steepness;
  EdgeParams edges;
  NoiseModel noise{0.001, 0.0};
  OccupancyParams occupancy;
  PathParams planner;
  CameraIntrinsics intrinsics{350.0, 350.0, 320.0, 240.0, 640, 480};
  float d_min = 0.05f;
  float d_max = 20.0f;
  double v_nom = 0.5;        ///< meters/second for trajectory timing
  int grid_subsample = 4;    ///< depth integration stride, pixels
  int cluster_every = 10;    ///< clustering cadence, frames
  bool parallel_costmaps = false;
  bool snap_objective = false;  ///< degree-7 / C3 variant when true

  /// Named parameter presets.
  static PipelineConfig preset(const std::string& name);  // "simulation" | "real"

  static PipelineConfig from_file(const std::string& path);
  void apply_file(const std::string& path);  ///< overlay keys onto *this
  std::string to_key_values() const;
  void save(const std::string& path) const;
};

}  // namespace uavland
