#pragma once

#include "uavland/kdtree.hpp"
#include "uavland/site_detection.hpp"
#include "uavland/types.hpp"

#include <string>
#include <vector>

namespace uavland {

/// World-frame site in the global list.
struct GlobalSite {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  double score = 0.0;  ///< best decision value observed
  int frame_id = -1;   ///< first observation
};

struct SiteCluster {
  Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
  std::vector<int> members;  ///< GlobalSite indices, ascending
  int m = 0;                 ///< member count
  double score = 0.0;        ///< best member score
};

struct ClusterParams {
  double dedup_radius = 0.5;  ///< meters, 3D
  double cluster_dist = 0.5;  ///< meters, horizontal
  double z_threshold = 0.01;  ///< meters

  bool valid() const { return dedup_radius > 0.0 && cluster_dist > 0.0 && z_threshold > 0.0; }
};

/// Global landing-site list: new candidates are deduplicated against a k-d
/// tree, and clusters are the connected components of the mergeability
/// relation (horizontal distance and z difference both within threshold,
/// single linkage). Single writer; reads may run concurrently with each
/// other but callers serialize mutation.
class SiteRegistry {
 public:
  /// Adds each candidate unless an existing site lies within dedup_radius
  /// (3D). Returns the number of sites added.
  int insert_candidates(const std::vector<CandidateSite>& sites, const ClusterParams& params,
                        int frame_id);

  /// Single-linkage agglomeration of the current site list. Centroids include
  /// the accumulated drift offset divided by the member count.
  std::vector<SiteCluster> cluster(const ClusterParams& params) const;

  /// Accumulates a pose-drift offset; each cluster centroid shifts by
  /// drift / m. Returns the updated clusters.
  std::vector<SiteCluster> apply_drift(const Eigen::Vector3d& drift,
                                       const ClusterParams& params);

  const std::vector<GlobalSite>& sites() const { return sites_; }
  const Eigen::Vector3d& drift() const { return drift_; }
  bool empty() const { return sites_.empty(); }

  /// JSON snapshot: sites array plus clusters with centroids and members.
  std::string snapshot_json(const ClusterParams& params) const;

 private:
  std::vector<GlobalSite> sites_;
  KdTree3 tree_;
  Eigen::Vector3d drift_ = Eigen::Vector3d::Zero();
};

enum class SelectionMode { kOperator, kNearest, kLowestEnergy };

/// Operator mode returns clusters[index]; nearest/lowest_energy return the
/// cluster minimizing straight-line distance to the given pose (the same
/// Euclidean proxy the energy costmap uses). Throws Error("no-sites") /
/// Error("bad-index").
const SiteCluster& select_site(const std::vector<SiteCluster>& clusters, SelectionMode mode,
                               const Pose& pose, int operator_index = -1);

}  // namespace uavland
