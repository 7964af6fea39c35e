#include "uavland/kdtree.hpp"

#include <algorithm>

namespace uavland {

int KdTree3::insert_into(int node, const Eigen::Vector3d& p, int id, int axis) {
  if (node < 0) {
    nodes_.push_back({p, id, axis, -1, -1});
    return static_cast<int>(nodes_.size()) - 1;
  }
  Node& n = nodes_[static_cast<size_t>(node)];
  const int next_axis = (n.axis + 1) % 3;
  if (p[n.axis] < n.point[n.axis]) {
    const int child = insert_into(n.left, p, id, next_axis);
    nodes_[static_cast<size_t>(node)].left = child;
  } else {
    const int child = insert_into(n.right, p, id, next_axis);
    nodes_[static_cast<size_t>(node)].right = child;
  }
  return node;
}

void KdTree3::insert(const Eigen::Vector3d& p, int id) {
  points_.emplace_back(p, id);
  if (points_.size() >= next_rebuild_) {
    rebuild();
    next_rebuild_ = points_.size() * 2;
    return;
  }
  root_ = insert_into(root_, p, id, 0);
}

int KdTree3::build_balanced(std::vector<int>& ids, int lo, int hi, int axis) {
  if (lo >= hi) return -1;
  const int mid = (lo + hi) / 2;
  std::nth_element(ids.begin() + lo, ids.begin() + mid, ids.begin() + hi,
                   [&](int a, int b) {
                     return points_[static_cast<size_t>(a)].first[axis] <
                            points_[static_cast<size_t>(b)].first[axis];
                   });
  const auto& [p, id] = points_[static_cast<size_t>(ids[static_cast<size_t>(mid)])];
  nodes_.push_back({p, id, axis, -1, -1});
  const int node = static_cast<int>(nodes_.size()) - 1;
  const int next_axis = (axis + 1) % 3;
  const int left = build_balanced(ids, lo, mid, next_axis);
  const int right = build_balanced(ids, mid + 1, hi, next_axis);
  nodes_[static_cast<size_t>(node)].left = left;
  nodes_[static_cast<size_t>(node)].right = right;
  return node;
}

void KdTree3::rebuild() {
  nodes_.clear();
  nodes_.reserve(points_.size());
  std::vector<int> ids(points_.size());
  for (size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<int>(i);
  root_ = build_balanced(ids, 0, static_cast<int>(ids.size()), 0);
}

std::vector<int> KdTree3::radius_query(const Eigen::Vector3d& center, double radius) const {
  std::vector<int> out;
  if (root_ < 0) return out;
  const double r2 = radius * radius;
  std::vector<int> stack{root_};
  while (!stack.empty()) {
    const Node& n = nodes_[static_cast<size_t>(stack.back())];
    stack.pop_back();
    if ((n.point - center).squaredNorm() <= r2) out.push_back(n.id);
    const double delta = center[n.axis] - n.point[n.axis];
    if (n.left >= 0 && delta <= radius) stack.push_back(n.left);
    if (n.right >= 0 && delta >= -radius) stack.push_back(n.right);
  }
  return out;
}

bool KdTree3::has_neighbor_within(const Eigen::Vector3d& center, double radius) const {
  if (root_ < 0) return false;
  const double r2 = radius * radius;
  std::vector<int> stack{root_};
  while (!stack.empty()) {
    const Node& n = nodes_[static_cast<size_t>(stack.back())];
    stack.pop_back();
    if ((n.point - center).squaredNorm() <= r2) return true;
    const double delta = center[n.axis] - n.point[n.axis];
    if (n.left >= 0 && delta <= radius) stack.push_back(n.left);
    if (n.right >= 0 && delta >= -radius) stack.push_back(n.right);
  }
  return false;
}

}  // namespace uavland
