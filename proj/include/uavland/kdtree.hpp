#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace uavland {

/// 3D k-d tree over point ids with incremental insertion. Inserts walk the
/// existing tree; the whole tree is rebuilt balanced whenever the point count
/// doubles, which keeps queries O(log n) expected without per-insert
/// rebalancing.
class KdTree3 {
 public:
  void insert(const Eigen::Vector3d& p, int id);

  /// Ids of stored points within `radius` (Euclidean) of `center`.
  std::vector<int> radius_query(const Eigen::Vector3d& center, double radius) const;

  /// True iff some stored point lies within `radius` of `center`.
  bool has_neighbor_within(const Eigen::Vector3d& center, double radius) const;

  size_t size() const { return points_.size(); }

 private:
  struct Node {
    Eigen::Vector3d point;
    int id = -1;
    int axis = 0;
    int left = -1;
    int right = -1;
  };

  int insert_into(int node, const Eigen::Vector3d& p, int id, int axis);
  int build_balanced(std::vector<int>& ids, int lo, int hi, int axis);
  void rebuild();

  std::vector<Node> nodes_;
  std::vector<std::pair<Eigen::Vector3d, int>> points_;
  int root_ = -1;
  size_t next_rebuild_ = 8;
};

}  // namespace uavland
