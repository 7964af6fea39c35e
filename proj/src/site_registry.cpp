#include "uavland/site_registry.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

namespace uavland {

int SiteRegistry::insert_candidates(const std::vector<CandidateSite>& sites,
                                    const ClusterParams& params, int frame_id) {
  if (!params.valid()) throw Error("invalid-params", "bad cluster parameters");
  int added = 0;
  for (const CandidateSite& c : sites) {
    if (tree_.has_neighbor_within(c.world, params.dedup_radius)) continue;
    tree_.insert(c.world, static_cast<int>(sites_.size()));
    sites_.push_back({c.world, c.score, frame_id});
    ++added;
  }
  return added;
}

std::vector<SiteCluster> SiteRegistry::cluster(const ClusterParams& params) const {
  std::vector<SiteCluster> out;
  if (sites_.empty()) return out;

  // Union-find over the mergeability relation; candidate pairs come from a
  // radius query bounding both criteria.
  std::vector<int> parent(sites_.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int a) {
    while (parent[static_cast<size_t>(a)] != a) {
      parent[static_cast<size_t>(a)] = parent[static_cast<size_t>(parent[static_cast<size_t>(a)])];
      a = parent[static_cast<size_t>(a)];
    }
    return a;
  };
  const double bound =
      std::sqrt(params.cluster_dist * params.cluster_dist + params.z_threshold * params.z_threshold) +
      1e-12;
  for (size_t i = 0; i < sites_.size(); ++i) {
    for (int j : tree_.radius_query(sites_[i].position, bound)) {
      if (j <= static_cast<int>(i)) continue;
      const Eigen::Vector3d delta = sites_[static_cast<size_t>(j)].position - sites_[i].position;
      if (delta.head<2>().norm() <= params.cluster_dist &&
          std::abs(delta.z()) <= params.z_threshold) {
        const int ra = find(static_cast<int>(i)), rb = find(j);
        if (ra != rb) parent[static_cast<size_t>(std::max(ra, rb))] = std::min(ra, rb);
      }
    }
  }

  std::vector<int> root_to_cluster(sites_.size(), -1);
  for (size_t i = 0; i < sites_.size(); ++i) {
    const int r = find(static_cast<int>(i));
    if (root_to_cluster[static_cast<size_t>(r)] < 0) {
      root_to_cluster[static_cast<size_t>(r)] = static_cast<int>(out.size());
      out.emplace_back();
    }
    SiteCluster& cl = out[static_cast<size_t>(root_to_cluster[static_cast<size_t>(r)])];
    cl.members.push_back(static_cast<int>(i));
    cl.centroid += sites_[i].position;
    cl.score = std::max(cl.score, sites_[i].score);
  }
  for (SiteCluster& cl : out) {
    cl.m = static_cast<int>(cl.members.size());
    cl.centroid = (cl.centroid + drift_) / cl.m;
  }
  return out;
}

std::vector<SiteCluster> SiteRegistry::apply_drift(const Eigen::Vector3d& drift,
                                                   const ClusterParams& params) {
  if (!drift.allFinite()) throw Error("invalid-params", "drift must be finite");
  drift_ += drift;
  return cluster(params);
}

std::string SiteRegistry::snapshot_json(const ClusterParams& params) const {
  nlohmann::json j;
  j["sites"] = nlohmann::json::array();
  for (const GlobalSite& s : sites_) {
    j["sites"].push_back({{"x", s.position.x()},
                          {"y", s.position.y()},
                          {"z", s.position.z()},
                          {"score", s.score},
                          {"frame", s.frame_id}});
  }
  j["clusters"] = nlohmann::json::array();
  for (const SiteCluster& c : cluster(params)) {
    j["clusters"].push_back({{"cx", c.centroid.x()},
                             {"cy", c.centroid.y()},
                             {"cz", c.centroid.z()},
                             {"m", c.m},
                             {"score", c.score},
                             {"members", c.members}});
  }
  return j.dump(2);
}

const SiteCluster& select_site(const std::vector<SiteCluster>& clusters, SelectionMode mode,
                               const Pose& pose, int operator_index) {
  if (clusters.empty()) throw Error("no-sites", "no clusters to select from");
  if (mode == SelectionMode::kOperator) {
    if (operator_index < 0 || operator_index >= static_cast<int>(clusters.size())) {
      throw Error("bad-index", "operator index " + std::to_string(operator_index) +
                                   " out of range");
    }
    return clusters[static_cast<size_t>(operator_index)];
  }
  // Nearest and lowest-energy coincide by construction: the energy proxy is
  // the straight-line distance.
  size_t best = 0;
  double best_dist = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < clusters.size(); ++i) {
    const double dist = (clusters[i].centroid - pose.translation).norm();
    if (dist < best_dist) {
      best_dist = dist;
      best = i;
    }
  }
  return clusters[best];
}

}  // namespace uavland
