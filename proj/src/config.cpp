#include "uavland/config.hpp"

#include <fstream>
#include <map>
#include <sstream>

namespace uavland {

namespace {

std::string trim(const std::string& s) {
  const size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

PipelineConfig PipelineConfig::preset(const std::string& name) {
  PipelineConfig cfg;
  if (name == "simulation") {
    cfg.weights = {0.05, 0.40, 0.40, 0.15};
    cfg.detection.score_threshold = 0.72;
    cfg.clustering.cluster_dist = 0.50;
    cfg.clustering.z_threshold = 0.01;
    cfg.clustering.dedup_radius = 0.50;
  } else if (name == "real") {
    cfg.weights = {0.15, 0.35, 0.40, 0.10};
    cfg.detection.score_threshold = 0.70;
    cfg.clustering.cluster_dist = 0.50;
    cfg.clustering.z_threshold = 0.05;
    cfg.clustering.dedup_radius = 0.50;
  } else {
    throw Error("unknown-preset", "no preset named '" + name + "'");
  }
  cfg.detection.uav_radius = 0.26;
  cfg.d_min = 0.05f;
  cfg.d_max = 20.0f;
  cfg.occupancy.resolution = 0.5;
  cfg.v_nom = 0.5;
  return cfg;
}

void PipelineConfig::apply_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error("io", "cannot open config " + path);
  std::string line;
  int line_no = 0;
  while (std::getline(f, line)) {
    ++line_no;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error("config", "line " + std::to_string(line_no) + " has no '='");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    std::istringstream vs(value);

    auto num = [&](auto& target) {
      if (!(vs >> target)) throw Error("config", "bad value for " + key);
    };
    if (key == "weights.c1") num(weights.c1);
    else if (key == "weights.c2") num(weights.c2);
    else if (key == "weights.c3") num(weights.c3);
    else if (key == "weights.c4") num(weights.c4);
    else if (key == "detect.score_threshold") num(detection.score_threshold);
    else if (key == "detect.uav_radius") num(detection.uav_radius);
    else if (key == "detect.nms_radius_px") num(detection.nms_radius_px);
    else if (key == "cluster.dedup_radius") num(clustering.dedup_radius);
    else if (key == "cluster.cluster_dist") num(clustering.cluster_dist);
    else if (key == "cluster.z_threshold") num(clustering.z_threshold);
    else if (key == "steep.theta_th_deg") {
      double deg;
      num(deg);
      steepness.theta_th = deg * M_PI / 180.0;
    } else if (key == "steep.window") num(steepness.window);
    else if (key == "edge.low") num(edges.low);
    else if (key == "edge.high") num(edges.high);
    else if (key == "edge.sigma") num(edges.sigma);
    else if (key == "noise.axial_a") num(noise.axial_a);
    else if (key == "noise.dropout") num(noise.dropout);
    else if (key == "grid.resolution") num(occupancy.resolution);
    else if (key == "grid.subsample") num(grid_subsample);
    else if (key == "plan.step") num(planner.step);
    else if (key == "plan.goal_bias") num(planner.goal_bias);
    else if (key == "plan.max_iters") num(planner.max_iters);
    else if (key == "plan.rewire_radius") num(planner.rewire_radius);
    else if (key == "plan.clearance") num(planner.clearance);
    else if (key == "plan.seed") num(planner.rng_seed);
    else if (key == "plan.v_nom") num(v_nom);
    else if (key == "plan.snap_objective") num(snap_objective);
    else if (key == "camera.fx") num(intrinsics.fx);
    else if (key == "camera.fy") num(intrinsics.fy);
    else if (key == "camera.cx") num(intrinsics.cx);
    else if (key == "camera.cy") num(intrinsics.cy);
    else if (key == "camera.width") num(intrinsics.width);
    else if (key == "camera.height") num(intrinsics.height);
    else if (key == "depth.d_min") num(d_min);
    else if (key == "depth.d_max") num(d_max);
    else if (key == "pipeline.cluster_every") num(cluster_every);
    else if (key == "pipeline.parallel_costmaps") num(parallel_costmaps);
    else throw Error("config", "unknown key '" + key + "'");
  }
}

PipelineConfig PipelineConfig::from_file(const std::string& path) {
  PipelineConfig cfg;
  cfg.apply_file(path);
  return cfg;
}

std::string PipelineConfig::to_key_values() const {
  std::ostringstream out;
  out.precision(12);
  out << "weights.c1 = " << weights.c1 << "\n";
  out << "weights.c2 = " << weights.c2 << "\n";
  out << "weights.c3 = " << weights.c3 << "\n";
  out << "weights.c4 = " << weights.c4 << "\n";
  out << "detect.score_threshold = " << detection.score_threshold << "\n";
  out << "detect.uav_radius = " << detection.uav_radius << "\n";
  out << "detect.nms_radius_px = " << detection.nms_radius_px << "\n";
  out << "cluster.dedup_radius = " << clustering.dedup_radius << "\n";
  out << "cluster.cluster_dist = " << clustering.cluster_dist << "\n";
  out << "cluster.z_threshold = " << clustering.z_threshold << "\n";
  out << "steep.theta_th_deg = " << steepness.theta_th * 180.0 / M_PI << "\n";
  out << "steep.window = " << steepness.window << "\n";
  out << "edge.low = " << edges.low << "\n";
  out << "edge.high = " << edges.high << "\n";
  out << "edge.sigma = " << edges.sigma << "\n";
  out << "noise.axial_a = " << noise.axial_a << "\n";
  out << "noise.dropout = " << noise.dropout << "\n";
  out << "grid.resolution = " << occupancy.resolution << "\n";
  out << "grid.subsample = " << grid_subsample << "\n";
  out << "plan.step = " << planner.step << "\n";
  out << "plan.goal_bias = " << planner.goal_bias << "\n";
  out << "plan.max_iters = " << planner.max_iters << "\n";
  out << "plan.rewire_radius = " << planner.rewire_radius << "\n";
  out << "plan.clearance = " << planner.clearance << "\n";
  out << "plan.seed = " << planner.rng_seed << "\n";
  out << "plan.v_nom = " << v_nom << "\n";
  out << "plan.snap_objective = " << (snap_objective ? 1 : 0) << "\n";
  out << "camera.fx = " << intrinsics.fx << "\n";
  out << "camera.fy = " << intrinsics.fy << "\n";
  out << "camera.cx = " << intrinsics.cx << "\n";
  out << "camera.cy = " << intrinsics.cy << "\n";
  out << "camera.width = " << intrinsics.width << "\n";
  out << "camera.height = " << intrinsics.height << "\n";
  out << "depth.d_min = " << d_min << "\n";
  out << "depth.d_max = " << d_max << "\n";
  out << "pipeline.cluster_every = " << cluster_every << "\n";
  out << "pipeline.parallel_costmaps = " << (parallel_costmaps ? 1 : 0) << "\n";
  return out.str();
}

void PipelineConfig::save(const std::string& path) const {
  std::ofstream f(path);
  if (!f) throw Error("io", "cannot open " + path);
  f << to_key_values();
}

}  // namespace uavland
