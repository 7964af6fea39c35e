#pragma once

#include "uavland/occupancy_grid.hpp"
#include "uavland/types.hpp"

#include <optional>
#include <vector>

namespace uavland {

struct PathParams {
  double step = 0.5;          ///< extension length, meters
  double goal_bias = 0.1;     ///< probability of sampling the goal
  int max_iters = 3000;
  double rewire_radius = 1.5; ///< meters
  double clearance = 0.5;     ///< meters
  uint64_t rng_seed = 1;

  /// Sampling region; computed from start, goal and the occupied voxels
  /// when unset.
  std::optional<Eigen::AlignedBox3d> bounds;

  bool valid() const {
    return step > 0.0 && goal_bias >= 0.0 && goal_bias < 1.0 && max_iters > 0 &&
           rewire_radius > 0.0 && clearance >= 0.0;
  }
};

/// RRT* with straight-line steering and path-length cost. Sampling is
/// deterministic for a given seed. Returns a start-to-goal polyline whose
/// every segment passes the grid collision check at the configured
/// clearance. Throws Error("start-occupied") / Error("goal-occupied") /
/// Error("no-path").
std::vector<Eigen::Vector3d> plan_path(const OccupancyGrid& grid,
                                       const Eigen::Vector3d& start,
                                       const Eigen::Vector3d& goal,
                                       const PathParams& params);

/// Greedy line-of-sight pruning: from each kept vertex, jump to the farthest
/// vertex reachable by a collision-free straight segment. The output is a
/// subsequence of the input containing both endpoints.
std::vector<Eigen::Vector3d> prune_line_of_sight(const std::vector<Eigen::Vector3d>& path,
                                                 const OccupancyGrid& grid, double clearance);

double path_length(const std::vector<Eigen::Vector3d>& path);

}  // namespace uavland
