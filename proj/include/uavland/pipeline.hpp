#pragma once

#include "uavland/config.hpp"
#include "uavland/io.hpp"
#include "uavland/trajectory.hpp"

#include <string>
#include <vector>

namespace uavland {

/// Per-stage wall time for one frame, milliseconds. The stage set mirrors the
/// layout of the timing report.
struct StageTimes {
  double depth_accuracy = 0.0;
  double flatness = 0.0;
  double steepness = 0.0;
  double energy = 0.0;
  double final_costmap = 0.0;
  double detection = 0.0;
  double clustering = 0.0;

  double total() const {
    return depth_accuracy + flatness + steepness + energy + final_costmap + detection +
           clustering;
  }
};

struct TimingReport {
  std::vector<StageTimes> frames;
  double peak_rss_mb = 0.0;      ///< high-water mark at the end of the run
  double baseline_rss_mb = 0.0;  ///< resident set before the first frame

  double incremental_mb() const { return std::max(peak_rss_mb - baseline_rss_mb, 0.0); }
  std::string table() const;  ///< per-stage mean +- stddev table
};

/// Frame-by-frame detection pipeline: costmaps, fusion, dense sites, global
/// registry. Owns the registry and the occupancy grid.
class FramePipeline {
 public:
  explicit FramePipeline(const PipelineConfig& cfg);

  /// Runs the costmap/detection stages on one frame and inserts the sites.
  /// Clustering runs when `run_clustering` is set. Occupancy integration is
  /// separate (see integrate_occupancy) and not timed here.
  StageTimes process_frame(const DepthMap& depth, const Pose& pose, int frame_id,
                           bool run_clustering);

  void integrate_occupancy(const DepthMap& depth, const Pose& pose);

  const SiteRegistry& registry() const { return registry_; }
  SiteRegistry& registry() { return registry_; }
  const OccupancyGrid& grid() const { return grid_; }
  OccupancyGrid& grid() { return grid_; }
  const PipelineConfig& config() const { return cfg_; }

  /// Last-frame maps, for export.
  const Costmap& last_depth_accuracy() const { return jde_; }
  const Costmap& last_flatness() const { return jfl_; }
  const Costmap& last_steepness() const { return jn_; }
  const Costmap& last_energy() const { return jec_; }
  const DecisionMap& last_decision() const { return decision_; }
  const std::vector<CandidateSite>& last_sites() const { return last_sites_; }

 private:
  PipelineConfig cfg_;
  SiteRegistry registry_;
  OccupancyGrid grid_;
  Costmap jde_, jfl_, jn_, jec_;
  DecisionMap decision_;
  std::vector<CandidateSite> last_sites_;
};

/// Index-aligned dataset: depth frames plus a pose row per frame.
struct Dataset {
  std::vector<std::string> frame_paths;
  std::vector<TimedPose> poses;
};
Dataset open_dataset(const std::string& dir);

struct RunOptions {
  std::string out_dir;
  int max_frames = -1;          ///< -1: all
  bool export_maps = false;     ///< write per-frame costmap PGMs
  bool integrate_grid = true;
  bool cluster_each_frame = false;  ///< bench-style cadence
};

struct RunResult {
  int frames_processed = 0;
  int frames_skipped = 0;
  TimingReport timing;
  std::string registry_json;
};

/// Processes a dataset end to end and writes registry.json, sites.jsonl,
/// grid.txt and timing.txt into out_dir (when set).
RunResult run_pipeline(FramePipeline& pipeline, const Dataset& dataset,
                       const RunOptions& options);

/// Plans the landing maneuver to a selected cluster: RRT* to an approach
/// point above the site, line-of-sight pruning, then the minimum-jerk (or
/// minimum-snap) trajectory with a final vertical touchdown segment. The
/// fitted trajectory is collision-checked at a dense sampling; colliding
/// spans pull their original path vertices back in and refit.
PolynomialTrajectory plan_landing(const SiteRegistry& registry, const OccupancyGrid& grid,
                                  const Pose& uav_pose, SelectionMode mode, int operator_index,
                                  const PipelineConfig& cfg);

/// Renders a synthetic dataset (depth rasters + poses.csv) from a scene along
/// a straight survey line at constant height.
struct GenOptions {
  int frames = 20;
  double height = 10.0;
  Eigen::Vector2d start{-4.0, 0.0};
  Eigen::Vector2d end{4.0, 0.0};
  double fps = 20.0;
  uint64_t seed = 1;
};
void generate_dataset(const Scene& scene, const PipelineConfig& cfg, const GenOptions& options,
                      const std::string& out_dir);

double current_rss_mb();
double peak_rss_mb();

}  // namespace uavland
