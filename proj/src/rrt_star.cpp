#include "uavland/rrt_star.hpp"

#include <algorithm>
#include <cmath>

namespace uavland {

namespace {

struct Sampler {
  uint64_t state;
  explicit Sampler(uint64_t seed) : state(seed ^ 0x5851f42d4c957f2dull) {}

  uint64_t next_u64() {
    state += 0x9e3779b97f4a7c15ull;
    uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
};

struct Node {
  Eigen::Vector3d pos;
  int parent = -1;
  double cost = 0.0;
};

Eigen::AlignedBox3d default_bounds(const OccupancyGrid& grid, const Eigen::Vector3d& start,
                                   const Eigen::Vector3d& goal, double margin) {
  Eigen::AlignedBox3d box;
  box.extend(start);
  box.extend(goal);
  for (const VoxelIndex& v : grid.occupied_voxels()) {
    box.extend(grid.center_of(v));
  }
  box.min() -= Eigen::Vector3d::Constant(margin);
  box.max() += Eigen::Vector3d::Constant(margin);
  return box;
}

}  // namespace

std::vector<Eigen::Vector3d> plan_path(const OccupancyGrid& grid, const Eigen::Vector3d& start,
                                       const Eigen::Vector3d& goal, const PathParams& params) {
  if (!params.valid()) throw Error("invalid-params", "bad planner parameters");
  if (!grid.is_collision_free(start, start, params.clearance)) {
    throw Error("start-occupied", "start position violates clearance");
  }
  if (!grid.is_collision_free(goal, goal, params.clearance)) {
    throw Error("goal-occupied", "goal position violates clearance");
  }

  const Eigen::AlignedBox3d bounds =
      params.bounds ? *params.bounds : default_bounds(grid, start, goal, 4.0 * params.step);
  Sampler rng(params.rng_seed);

  std::vector<Node> nodes;
  nodes.push_back({start, -1, 0.0});
  int best_goal_parent = -1;
  double best_goal_cost = std::numeric_limits<double>::infinity();

  for (int iter = 0; iter < params.max_iters; ++iter) {
    Eigen::Vector3d sample;
    if (rng.uniform() < params.goal_bias) {
      sample = goal;
    } else {
      sample = bounds.min() + Eigen::Vector3d(rng.uniform(), rng.uniform(), rng.uniform())
                                  .cwiseProduct(bounds.sizes());
    }

    // Nearest node, ties to the lower index.
    int nearest = 0;
    double nearest_d2 = (nodes[0].pos - sample).squaredNorm();
    for (size_t i = 1; i < nodes.size(); ++i) {
      const double d2 = (nodes[i].pos - sample).squaredNorm();
      if (d2 < nearest_d2) {
        nearest_d2 = d2;
        nearest = static_cast<int>(i);
      }
    }
    const double nearest_dist = std::sqrt(nearest_d2);
    if (nearest_dist < 1e-9) continue;
    const Eigen::Vector3d new_pos =
        nearest_dist <= params.step
            ? sample
            : nodes[static_cast<size_t>(nearest)].pos +
                  (sample - nodes[static_cast<size_t>(nearest)].pos) * (params.step / nearest_dist);

    // Choose the cheapest collision-free parent among radius neighbors.
    std::vector<int> neighbors;
    for (size_t i = 0; i < nodes.size(); ++i) {
      if ((nodes[i].pos - new_pos).norm() <= params.rewire_radius) {
        neighbors.push_back(static_cast<int>(i));
      }
    }
    int parent = -1;
    double new_cost = std::numeric_limits<double>::infinity();
    for (int i : neighbors) {
      const double c = nodes[static_cast<size_t>(i)].cost +
                       (nodes[static_cast<size_t>(i)].pos - new_pos).norm();
      if (c < new_cost && grid.is_collision_free(nodes[static_cast<size_t>(i)].pos, new_pos,
                                                 params.clearance)) {
        new_cost = c;
        parent = i;
      }
    }
    if (parent < 0) {
      if (grid.is_collision_free(nodes[static_cast<size_t>(nearest)].pos, new_pos,
                                 params.clearance)) {
        parent = nearest;
        new_cost = nodes[static_cast<size_t>(nearest)].cost + nearest_dist;
      } else {
        continue;
      }
    }
    nodes.push_back({new_pos, parent, new_cost});
    const int new_id = static_cast<int>(nodes.size()) - 1;

    // Rewire neighbors through the new node when cheaper.
    for (int i : neighbors) {
      Node& nb = nodes[static_cast<size_t>(i)];
      const double through = new_cost + (nb.pos - new_pos).norm();
      if (through + 1e-12 < nb.cost &&
          grid.is_collision_free(new_pos, nb.pos, params.clearance)) {
        nb.parent = new_id;
        nb.cost = through;
      }
    }

    // Track the best connection into the goal.
    const double to_goal = (new_pos - goal).norm();
    if (to_goal <= params.step &&
        grid.is_collision_free(new_pos, goal, params.clearance)) {
      const double total = new_cost + to_goal;
      if (total < best_goal_cost) {
        best_goal_cost = total;
        best_goal_parent = new_id;
      }
    }
  }

  if (best_goal_parent < 0) {
    throw Error("no-path", "no collision-free path within max_iters");
  }
  // Rewiring may have improved ancestor costs after the goal connection was
  // recorded; also reconsider every node in goal range before extraction.
  for (size_t i = 0; i < nodes.size(); ++i) {
    const double to_goal = (nodes[i].pos - goal).norm();
    if (to_goal <= params.step && nodes[i].cost + to_goal < best_goal_cost &&
        grid.is_collision_free(nodes[i].pos, goal, params.clearance)) {
      best_goal_cost = nodes[i].cost + to_goal;
      best_goal_parent = static_cast<int>(i);
    }
  }

  std::vector<Eigen::Vector3d> path{goal};
  for (int id = best_goal_parent; id >= 0; id = nodes[static_cast<size_t>(id)].parent) {
    path.push_back(nodes[static_cast<size_t>(id)].pos);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

std::vector<Eigen::Vector3d> prune_line_of_sight(const std::vector<Eigen::Vector3d>& path,
                                                 const OccupancyGrid& grid, double clearance) {
  if (path.size() <= 2) return path;
  std::vector<Eigen::Vector3d> out{path.front()};
  size_t i = 0;
  while (i + 1 < path.size()) {
    size_t j = path.size() - 1;
    while (j > i + 1 && !grid.is_collision_free(path[i], path[j], clearance)) --j;
    out.push_back(path[j]);
    i = j;
  }
  return out;
}

double path_length(const std::vector<Eigen::Vector3d>& path) {
  double len = 0.0;
  for (size_t i = 1; i < path.size(); ++i) len += (path[i] - path[i - 1]).norm();
  return len;
}

}  // namespace uavland
