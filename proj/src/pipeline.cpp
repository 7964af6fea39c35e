#include "uavland/pipeline.hpp"

#include "uavland/projection.hpp"

#include <sys/resource.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>

namespace uavland {

namespace fs = std::filesystem;

namespace {

double ms_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
      .count();
}

struct MeanStd {
  double mean = 0.0, stddev = 0.0;
};

MeanStd mean_std(const std::vector<StageTimes>& frames, double StageTimes::* field) {
  MeanStd out;
  if (frames.empty()) return out;
  for (const StageTimes& f : frames) out.mean += f.*field;
  out.mean /= static_cast<double>(frames.size());
  for (const StageTimes& f : frames) {
    const double d = f.*field - out.mean;
    out.stddev += d * d;
  }
  out.stddev = std::sqrt(out.stddev / static_cast<double>(frames.size()));
  return out;
}

}  // namespace

double current_rss_mb() {
  std::ifstream f("/proc/self/statm");
  long pages = 0, resident = 0;
  if (f >> pages >> resident) {
    return static_cast<double>(resident) * sysconf(_SC_PAGESIZE) / (1024.0 * 1024.0);
  }
  return 0.0;
}

double peak_rss_mb() {
  struct rusage usage {};
  getrusage(RUSAGE_SELF, &usage);
  return static_cast<double>(usage.ru_maxrss) / 1024.0;
}

std::string TimingReport::table() const {
  std::ostringstream out;
  char row[160];
  auto line = [&](const char* label, const MeanStd& ms, bool indent) {
    std::snprintf(row, sizeof(row), "%s%-34s %8.1f +- %-8.1f\n", indent ? "    " : "", label,
                  ms.mean, ms.stddev);
    out << row;
  };
  out << "Algorithm                              Time (ms)\n";
  out << "Costmap Evaluation\n";
  line("Depth Accuracy Costmap", mean_std(frames, &StageTimes::depth_accuracy), true);
  line("Flatness Costmap", mean_std(frames, &StageTimes::flatness), true);
  line("Steepness Costmap", mean_std(frames, &StageTimes::steepness), true);
  line("Energy Costmap", mean_std(frames, &StageTimes::energy), true);
  line("Final Costmap", mean_std(frames, &StageTimes::final_costmap), true);
  line("Dense Landing Sites Detection", mean_std(frames, &StageTimes::detection), false);
  line("Clustering", mean_std(frames, &StageTimes::clustering), false);

  MeanStd total;
  {
    std::vector<StageTimes> copy = frames;  // total as a derived field
    double mean = 0.0;
    for (const StageTimes& f : copy) mean += f.total();
    mean /= std::max<size_t>(copy.size(), 1);
    double var = 0.0;
    for (const StageTimes& f : copy) {
      const double d = f.total() - mean;
      var += d * d;
    }
    total.mean = mean;
    total.stddev = copy.empty() ? 0.0 : std::sqrt(var / static_cast<double>(copy.size()));
  }
  std::snprintf(row, sizeof(row), "%-38s %8.1f +- %-8.1f\n", "Total", total.mean, total.stddev);
  out << row;
  std::snprintf(row, sizeof(row), "Peak memory (incremental): %.1f MB\n", incremental_mb());
  out << row;
  return out.str();
}

FramePipeline::FramePipeline(const PipelineConfig& cfg) : cfg_(cfg), grid_(cfg.occupancy) {
  if (!cfg_.weights.valid()) throw Error("invalid-weights", "weights must sum to 1");
  if (!cfg_.detection.valid()) throw Error("invalid-params", "bad detection parameters");
  if (!cfg_.steepness.valid()) throw Error("invalid-params", "bad steepness parameters");
  if (!cfg_.edges.valid()) throw Error("invalid-params", "bad edge parameters");
}

StageTimes FramePipeline::process_frame(const DepthMap& depth, const Pose& pose, int frame_id,
                                        bool run_clustering) {
  StageTimes times;

  if (cfg_.parallel_costmaps) {
    auto t0 = std::chrono::steady_clock::now();
    auto fde = std::async(std::launch::async, [&] { return depth_confidence(depth); });
    auto ffl = std::async(std::launch::async, [&] { return flatness(depth, cfg_.edges); });
    auto fn = std::async(std::launch::async,
                         [&] { return steepness(depth, cfg_.intrinsics, pose, cfg_.steepness); });
    auto fec = std::async(std::launch::async, [&] { return energy(depth, cfg_.intrinsics); });
    jde_ = fde.get();
    jfl_ = ffl.get();
    jn_ = fn.get();
    jec_ = fec.get();
    // Wall time of the parallel block, attributed to the slowest stage slot.
    times.flatness = ms_since(t0);
  } else {
    auto t0 = std::chrono::steady_clock::now();
    jde_ = depth_confidence(depth);
    times.depth_accuracy = ms_since(t0);

    t0 = std::chrono::steady_clock::now();
    jfl_ = flatness(depth, cfg_.edges);
    times.flatness = ms_since(t0);

    t0 = std::chrono::steady_clock::now();
    jn_ = steepness(depth, cfg_.intrinsics, pose, cfg_.steepness);
    times.steepness = ms_since(t0);

    t0 = std::chrono::steady_clock::now();
    jec_ = energy(depth, cfg_.intrinsics);
    times.energy = ms_since(t0);
  }

  auto t0 = std::chrono::steady_clock::now();
  decision_ = combine(jde_, jfl_, jn_, jec_, cfg_.weights);
  times.final_costmap = ms_since(t0);

  t0 = std::chrono::steady_clock::now();
  last_sites_ = detect_dense_sites(decision_, jfl_, depth, cfg_.intrinsics, pose,
                                   cfg_.detection);
  registry_.insert_candidates(last_sites_, cfg_.clustering, frame_id);
  times.detection = ms_since(t0);

  if (run_clustering) {
    t0 = std::chrono::steady_clock::now();
    registry_.cluster(cfg_.clustering);
    times.clustering = ms_since(t0);
  }
  return times;
}

void FramePipeline::integrate_occupancy(const DepthMap& depth, const Pose& pose) {
  grid_.integrate_depth(depth, pose, cfg_.intrinsics, cfg_.grid_subsample);
}

Dataset open_dataset(const std::string& dir) {
  Dataset ds;
  const fs::path root(dir);
  if (!fs::is_directory(root)) throw Error("io", dir + " is not a directory");
  ds.poses = read_pose_csv((root / "poses.csv").string());
  for (const auto& entry : fs::directory_iterator(root)) {
    const std::string ext = entry.path().extension().string();
    if (ext == ".dmap" || ext == ".pfm") ds.frame_paths.push_back(entry.path().string());
  }
  std::sort(ds.frame_paths.begin(), ds.frame_paths.end());
  if (ds.frame_paths.size() != ds.poses.size()) {
    throw Error("frame-pose-mismatch",
                std::to_string(ds.frame_paths.size()) + " frames vs " +
                    std::to_string(ds.poses.size()) + " poses");
  }
  return ds;
}

RunResult run_pipeline(FramePipeline& pipeline, const Dataset& dataset,
                       const RunOptions& options) {
  RunResult result;
  const PipelineConfig& cfg = pipeline.config();
  const bool writing = !options.out_dir.empty();
  if (writing) fs::create_directories(options.out_dir);
  std::ofstream sites_out;
  if (writing) sites_out.open(fs::path(options.out_dir) / "sites.jsonl");

  result.timing.baseline_rss_mb = current_rss_mb();
  const int limit = options.max_frames < 0
                        ? static_cast<int>(dataset.frame_paths.size())
                        : std::min<int>(options.max_frames,
                                        static_cast<int>(dataset.frame_paths.size()));
  for (int i = 0; i < limit; ++i) {
    DepthMap depth;
    try {
      depth = read_depth_auto(dataset.frame_paths[static_cast<size_t>(i)], cfg.d_min, cfg.d_max);
    } catch (const Error& e) {
      std::fprintf(stderr, "warning: skipping frame %d (%s)\n", i, e.what());
      ++result.frames_skipped;
      continue;
    }
    const Pose& pose = dataset.poses[static_cast<size_t>(i)].pose;
    const bool cluster_now = options.cluster_each_frame ||
                             (cfg.cluster_every > 0 && (i + 1) % cfg.cluster_every == 0) ||
                             i + 1 == limit;
    result.timing.frames.push_back(pipeline.process_frame(depth, pose, i, cluster_now));
    if (options.integrate_grid) pipeline.integrate_occupancy(depth, pose);
    ++result.frames_processed;

    if (writing) {
      sites_out << sites_to_jsonl(pipeline.last_sites(), i);
      if (options.export_maps) {
        char name[64];
        std::snprintf(name, sizeof(name), "frame_%06d", i);
        const fs::path base = fs::path(options.out_dir) / name;
        write_costmap_pgm(base.string() + "_jde.pgm", pipeline.last_depth_accuracy());
        write_costmap_pgm(base.string() + "_jfl.pgm", pipeline.last_flatness());
        write_costmap_pgm(base.string() + "_jn.pgm", pipeline.last_steepness());
        write_costmap_pgm(base.string() + "_jec.pgm", pipeline.last_energy());
        write_costmap_pgm(base.string() + "_decision.pgm", pipeline.last_decision());
        write_costmap_raw(base.string() + "_decision.dmap", pipeline.last_decision());
      }
    }
  }
  result.timing.peak_rss_mb = peak_rss_mb();
  result.registry_json = pipeline.registry().snapshot_json(cfg.clustering);

  if (writing) {
    std::ofstream(fs::path(options.out_dir) / "registry.json") << result.registry_json;
    std::ofstream(fs::path(options.out_dir) / "timing.txt") << result.timing.table();
    pipeline.grid().save_text((fs::path(options.out_dir) / "grid.txt").string());
  }
  return result;
}

PolynomialTrajectory plan_landing(const SiteRegistry& registry, const OccupancyGrid& grid,
                                  const Pose& uav_pose, SelectionMode mode, int operator_index,
                                  const PipelineConfig& cfg) {
  const std::vector<SiteCluster> clusters = registry.cluster(cfg.clustering);
  const SiteCluster& target = select_site(clusters, mode, uav_pose, operator_index);

  // Plan to an approach point above the site so the final segment descends
  // vertically onto the surface.
  const Eigen::Vector3d site = target.centroid;
  const Eigen::Vector3d approach = site + Eigen::Vector3d(0.0, 0.0, 1.0);
  std::vector<Eigen::Vector3d> path =
      plan_path(grid, uav_pose.translation, approach, cfg.planner);
  std::vector<Eigen::Vector3d> waypoints =
      prune_line_of_sight(path, grid, cfg.planner.clearance);

  const DerivativeObjective objective =
      cfg.snap_objective ? DerivativeObjective::kSnap : DerivativeObjective::kJerk;

  // Fit, then re-check a dense sampling against the grid; a colliding span
  // pulls the midpoint of its original path segment back in and refits.
  // The vertical touchdown segment below the approach point is exempt.
  std::vector<Eigen::Vector3d> fit_points = waypoints;
  fit_points.push_back(site);
  PolynomialTrajectory traj = min_jerk_trajectory(fit_points, cfg.v_nom, objective);
  for (int attempt = 0; attempt < 8; ++attempt) {
    const double check_end = traj.knot_time(traj.waypoints().size() - 2);
    bool collided = false;
    const double dt = 0.05;
    Eigen::Vector3d prev = traj.sample(0.0).position;
    double t_hit = 0.0;
    for (double t = dt; t <= check_end + 1e-9; t += dt) {
      const Eigen::Vector3d cur = traj.sample(std::min(t, check_end)).position;
      if (!grid.is_collision_free(prev, cur, cfg.planner.clearance)) {
        collided = true;
        t_hit = t;
        break;
      }
      prev = cur;
    }
    if (!collided) break;

    // Re-insert the midpoint of the path span containing the collision time.
    size_t knot = 0;
    while (knot + 1 < fit_points.size() - 1 && traj.knot_time(knot + 1) < t_hit) ++knot;
    const Eigen::Vector3d& a = fit_points[knot];
    const Eigen::Vector3d& b = fit_points[knot + 1];
    size_t ia = 0, ib = path.size() - 1;
    for (size_t i = 0; i < path.size(); ++i) {
      if ((path[i] - a).norm() < 1e-9) ia = i;
      if ((path[i] - b).norm() < 1e-9) ib = i;
    }
    const size_t mid = (ia + ib) / 2;
    if (mid == ia || mid == ib) break;  // span has no interior vertex left
    fit_points.insert(fit_points.begin() + static_cast<long>(knot) + 1, path[mid]);
    traj = min_jerk_trajectory(fit_points, cfg.v_nom, objective);
  }
  return traj;
}

void generate_dataset(const Scene& scene, const PipelineConfig& cfg, const GenOptions& options,
                      const std::string& out_dir) {
  fs::create_directories(out_dir);
  std::vector<TimedPose> poses;
  for (int i = 0; i < options.frames; ++i) {
    const double s = options.frames == 1 ? 0.0
                                         : static_cast<double>(i) / (options.frames - 1);
    const Eigen::Vector2d xy = options.start + s * (options.end - options.start);
    TimedPose tp;
    tp.timestamp_s = static_cast<double>(i) / options.fps;
    tp.pose = Pose::nadir({xy.x(), xy.y(), options.height});
    poses.push_back(tp);

    const DepthMap depth = render_depth(scene, tp.pose, cfg.intrinsics, cfg.noise,
                                        options.seed + static_cast<uint64_t>(i), cfg.d_min,
                                        cfg.d_max);
    char name[64];
    std::snprintf(name, sizeof(name), "frame_%06d.dmap", i);
    write_depth_raw((fs::path(out_dir) / name).string(), depth);
  }
  write_pose_csv((fs::path(out_dir) / "poses.csv").string(), poses);
  std::ofstream(fs::path(out_dir) / "scene.json") << scene_to_json(scene);
}

}  // namespace uavland
