#include "uavland/occupancy_grid.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace uavland {

namespace {

double logit(double p) { return std::log(p / (1.0 - p)); }

double point_segment_distance(const Eigen::Vector3d& p, const Eigen::Vector3d& a,
                              const Eigen::Vector3d& b) {
  const Eigen::Vector3d ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 <= 0.0) return (p - a).norm();
  const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}

}  // namespace

OccupancyGrid::OccupancyGrid(const OccupancyParams& params) : params_(params) {
  log_hit_ = logit(params.p_hit);
  log_miss_ = logit(params.p_miss);
  clamp_low_ = logit(params.p_clamp_low);
  clamp_high_ = logit(params.p_clamp_high);
}

void OccupancyGrid::update(const VoxelIndex& v, double delta) {
  float& lo = voxels_[v];
  lo = static_cast<float>(std::clamp(static_cast<double>(lo) + delta, clamp_low_, clamp_high_));
}

double OccupancyGrid::log_odds(const VoxelIndex& v) const {
  const auto it = voxels_.find(v);
  return it == voxels_.end() ? 0.0 : static_cast<double>(it->second);
}

double OccupancyGrid::occupancy_probability(const VoxelIndex& v) const {
  return 1.0 / (1.0 + std::exp(-log_odds(v)));
}

void OccupancyGrid::integrate_ray(const Eigen::Vector3d& origin, const Eigen::Vector3d& endpoint) {
  const VoxelIndex start = index_of(origin);
  const VoxelIndex end = index_of(endpoint);

  // Amanatides-Woo traversal from the camera voxel to the endpoint voxel.
  const Eigen::Vector3d d = endpoint - origin;
  VoxelIndex cur = start;
  int step[3];
  double t_max[3], t_delta[3];
  const int32_t cur_idx[3] = {cur.x, cur.y, cur.z};
  for (int a = 0; a < 3; ++a) {
    if (d[a] > 0.0) {
      step[a] = 1;
      const double boundary = (cur_idx[a] + 1) * params_.resolution;
      t_max[a] = (boundary - origin[a]) / d[a];
      t_delta[a] = params_.resolution / d[a];
    } else if (d[a] < 0.0) {
      step[a] = -1;
      const double boundary = cur_idx[a] * params_.resolution;
      t_max[a] = (boundary - origin[a]) / d[a];
      t_delta[a] = -params_.resolution / d[a];
    } else {
      step[a] = 0;
      t_max[a] = std::numeric_limits<double>::infinity();
      t_delta[a] = std::numeric_limits<double>::infinity();
    }
  }

  const long max_steps = std::abs(end.x - start.x) + std::abs(end.y - start.y) +
                         std::abs(end.z - start.z) + 3;
  for (long i = 0; i < max_steps && !(cur == end); ++i) {
    const int axis = (t_max[0] <= t_max[1] && t_max[0] <= t_max[2]) ? 0
                     : (t_max[1] <= t_max[2]) ? 1 : 2;
    t_max[axis] += t_delta[axis];
    if (axis == 0) cur.x += step[0];
    else if (axis == 1) cur.y += step[1];
    else cur.z += step[2];
    if (cur == end) break;
    if (cur == start) continue;
    update(cur, log_miss_);
  }
  update(end, log_hit_);
}

void OccupancyGrid::integrate_depth(const DepthMap& d, const Pose& pose,
                                    const CameraIntrinsics& intr, int subsample) {
  if (subsample < 1) throw Error("invalid-params", "subsample stride must be >= 1");
  const Eigen::Matrix3d rot = pose.rotation.toRotationMatrix();
  for (int y = 0; y < d.height; y += subsample) {
    for (int x = 0; x < d.width; x += subsample) {
      if (!d.valid(x, y)) continue;
      const double depth = d.at(x, y);
      const Eigen::Vector3d cam((x - intr.cx) * depth / intr.fx,
                                (y - intr.cy) * depth / intr.fy, depth);
      integrate_ray(pose.translation, rot * cam + pose.translation);
    }
  }
}

bool OccupancyGrid::is_collision_free(const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                                      double clearance, bool pessimistic) const {
  if (clearance < 0.0) throw Error("invalid-params", "clearance must be >= 0");
  if (voxels_.empty() && !pessimistic) return true;

  const double res = params_.resolution;
  const double len = (b - a).norm();
  const double step = res * 0.5;
  const int n_steps = std::max(1, static_cast<int>(std::ceil(len / step)));
  // Cube radius covering every voxel whose center can be within clearance of
  // a segment point that lies at most half a sampling step away.
  const double reach = clearance + 0.5 * len / n_steps;
  const int r_vox = static_cast<int>(std::floor(reach / res)) + 1;

  for (int i = 0; i <= n_steps; ++i) {
    const Eigen::Vector3d s = a + (b - a) * (static_cast<double>(i) / n_steps);
    const VoxelIndex base = index_of(s);
    for (int dz = -r_vox; dz <= r_vox; ++dz) {
      for (int dy = -r_vox; dy <= r_vox; ++dy) {
        for (int dx = -r_vox; dx <= r_vox; ++dx) {
          const VoxelIndex v{base.x + dx, base.y + dy, base.z + dz};
          const auto it = voxels_.find(v);
          const bool blocking =
              it == voxels_.end() ? pessimistic : static_cast<double>(it->second) > 0.0;
          if (!blocking) continue;
          if (point_segment_distance(center_of(v), a, b) <= clearance) return false;
        }
      }
    }
  }
  return true;
}

std::vector<VoxelIndex> OccupancyGrid::occupied_voxels() const {
  std::vector<VoxelIndex> out;
  for (const auto& [v, lo] : voxels_) {
    if (static_cast<double>(lo) > 0.0) out.push_back(v);
  }
  std::sort(out.begin(), out.end(), [](const VoxelIndex& a, const VoxelIndex& b) {
    return std::tie(a.x, a.y, a.z) < std::tie(b.x, b.y, b.z);
  });
  return out;
}

void OccupancyGrid::save_text(const std::string& path) const {
  std::ofstream f(path);
  if (!f) throw Error("io", "cannot open " + path);
  f << "resolution " << params_.resolution << "\n";
  std::vector<std::pair<VoxelIndex, float>> rows(voxels_.begin(), voxels_.end());
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    return std::tie(a.first.x, a.first.y, a.first.z) <
           std::tie(b.first.x, b.first.y, b.first.z);
  });
  char buf[128];
  for (const auto& [v, lo] : rows) {
    std::snprintf(buf, sizeof(buf), "%d %d %d %.9g\n", v.x, v.y, v.z,
                  static_cast<double>(lo));
    f << buf;
  }
}

OccupancyGrid OccupancyGrid::load_text(const std::string& path, const OccupancyParams& params) {
  std::ifstream f(path);
  if (!f) throw Error("io", "cannot open " + path);
  std::string tag;
  OccupancyParams p = params;
  if (!(f >> tag >> p.resolution) || tag != "resolution") {
    throw Error("io", "bad grid header in " + path);
  }
  OccupancyGrid grid(p);
  VoxelIndex v;
  double lo;
  while (f >> v.x >> v.y >> v.z >> lo) {
    grid.voxels_[v] = static_cast<float>(lo);
  }
  return grid;
}

}  // namespace uavland
