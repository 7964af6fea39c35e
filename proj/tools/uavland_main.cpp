#include "uavland/pipeline.hpp"
#include "uavland/projection.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace uavland;

namespace {

PipelineConfig make_config(const std::string& preset, const std::string& config_path) {
  PipelineConfig cfg = PipelineConfig::preset(preset);
  if (!config_path.empty()) cfg.apply_file(config_path);
  return cfg;
}

int cmd_run(const std::string& dataset_dir, const PipelineConfig& cfg,
            const std::string& out_dir, int max_frames, bool export_maps) {
  FramePipeline pipeline(cfg);
  const Dataset dataset = open_dataset(dataset_dir);
  RunOptions options;
  options.out_dir = out_dir;
  options.max_frames = max_frames;
  options.export_maps = export_maps;
  const RunResult result = run_pipeline(pipeline, dataset, options);
  std::cout << "processed " << result.frames_processed << " frames ("
            << result.frames_skipped << " skipped), "
            << pipeline.registry().sites().size() << " global sites\n";
  std::cout << result.timing.table();
  return 0;
}

int cmd_gen(const std::string& scene_path, const PipelineConfig& cfg, GenOptions gen,
            const std::string& out_dir) {
  const Scene scene = load_scene_json(scene_path);
  generate_dataset(scene, cfg, gen, out_dir);
  std::cout << "wrote " << gen.frames << " frames to " << out_dir << "\n";
  return 0;
}

int cmd_plan(const std::string& run_dir, const PipelineConfig& cfg, const Pose& uav_pose,
             const std::string& mode_name, int operator_index, const std::string& out_dir) {
  // Rebuild the registry from the exported snapshot.
  std::ifstream reg_file(fs::path(run_dir) / "registry.json");
  if (!reg_file) {
    std::cerr << "error: no registry.json in " << run_dir << "\n";
    return 1;
  }
  nlohmann::json snapshot;
  reg_file >> snapshot;
  SiteRegistry registry;
  std::vector<CandidateSite> sites;
  for (const auto& s : snapshot.at("sites")) {
    CandidateSite c;
    c.world = Eigen::Vector3d(s.at("x").get<double>(), s.at("y").get<double>(),
                              s.at("z").get<double>());
    c.score = s.at("score").get<double>();
    sites.push_back(c);
  }
  registry.insert_candidates(sites, cfg.clustering, 0);

  OccupancyGrid grid =
      OccupancyGrid::load_text((fs::path(run_dir) / "grid.txt").string(), cfg.occupancy);

  SelectionMode mode = SelectionMode::kNearest;
  if (mode_name == "operator") mode = SelectionMode::kOperator;
  else if (mode_name == "lowest_energy") mode = SelectionMode::kLowestEnergy;
  else if (mode_name != "nearest") {
    std::cerr << "error: unknown selection mode '" << mode_name << "'\n";
    return 1;
  }

  const PolynomialTrajectory traj =
      plan_landing(registry, grid, uav_pose, mode, operator_index, cfg);
  fs::create_directories(out_dir);
  std::ofstream(fs::path(out_dir) / "trajectory_samples.csv") << traj.to_csv(20.0);
  std::ofstream(fs::path(out_dir) / "trajectory_coeffs.json") << traj.to_coeff_json();
  std::cout << "trajectory: " << traj.waypoints().size() << " waypoints, "
            << traj.total_duration() << " s, ends at ("
            << traj.waypoints().back().transpose() << ")\n";
  return 0;
}

int cmd_bench(const PipelineConfig& cfg, int frames, uint64_t seed,
              const std::string& out_dir) {
  // Timed detection pipeline over synthetic frames; rendering excluded.
  const Scene scene = random_rubble_scene(seed);
  FramePipeline pipeline(cfg);
  TimingReport report;
  report.baseline_rss_mb = current_rss_mb();
  for (int i = 0; i < frames; ++i) {
    const double s = frames == 1 ? 0.0 : static_cast<double>(i) / (frames - 1);
    const Pose pose = Pose::nadir({-4.0 + 8.0 * s, 0.0, 10.0});
    const DepthMap depth = render_depth(scene, pose, cfg.intrinsics, cfg.noise,
                                        seed + static_cast<uint64_t>(i), cfg.d_min, cfg.d_max);
    report.frames.push_back(pipeline.process_frame(depth, pose, i, true));
  }
  report.peak_rss_mb = peak_rss_mb();
  std::cout << report.table();
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    std::ofstream(fs::path(out_dir) / "timing.txt") << report.table();
  }
  return 0;
}

int cmd_export_maps(const std::string& dataset_dir, const PipelineConfig& cfg,
                    const std::string& out_dir, int max_frames) {
  FramePipeline pipeline(cfg);
  const Dataset dataset = open_dataset(dataset_dir);
  RunOptions options;
  options.out_dir = out_dir;
  options.max_frames = max_frames;
  options.export_maps = true;
  options.integrate_grid = false;
  const RunResult result = run_pipeline(pipeline, dataset, options);
  std::cout << "exported costmaps for " << result.frames_processed << " frames\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Landing-site detection and landing planning for UAVs over rubble"};
  app.require_subcommand(1);

  std::string preset = "simulation";
  std::string config_path;
  std::string out_dir = "out";
  uint64_t seed = 1;
  int max_frames = -1;
  bool parallel = false;
  app.add_option("--preset", preset, "parameter preset: simulation | real");
  app.add_option("--config", config_path, "key=value config file overlay");
  app.add_option("--out-dir", out_dir, "output directory");
  app.add_option("--seed", seed, "random seed");
  app.add_option("--frames", max_frames, "frame limit (-1 = all)");
  app.add_flag("--parallel-costmaps", parallel, "compute the four costmaps concurrently");

  auto* run = app.add_subcommand("run", "process a dataset of depth frames + poses");
  std::string dataset_dir;
  bool export_maps = false;
  run->add_option("dataset", dataset_dir, "dataset directory")->required();
  run->add_flag("--export-maps", export_maps, "write per-frame costmap PGMs");

  auto* gen = app.add_subcommand("gen", "render a synthetic dataset from a scene file");
  std::string scene_path;
  GenOptions gen_opts;
  gen->add_option("scene", scene_path, "scene JSON file")->required();
  gen->add_option("--gen-frames", gen_opts.frames, "number of frames");
  gen->add_option("--height", gen_opts.height, "camera height, meters");

  auto* plan = app.add_subcommand("plan", "plan a landing trajectory from a run directory");
  std::string run_dir, mode_name = "nearest";
  int operator_index = 0;
  std::vector<double> pose_xyz{0.0, 0.0, 10.0};
  plan->add_option("rundir", run_dir, "directory with registry.json and grid.txt")->required();
  plan->add_option("--mode", mode_name, "operator | nearest | lowest_energy");
  plan->add_option("--site-index", operator_index, "cluster index for operator mode");
  plan->add_option("--uav", pose_xyz, "hover position x y z")->expected(3);

  auto* bench = app.add_subcommand("bench", "per-stage timing over synthetic frames");
  int bench_frames = 100;
  bench->add_option("--bench-frames", bench_frames, "number of frames");

  auto* export_cmd = app.add_subcommand("export-maps", "write costmap PGMs for a dataset");
  std::string export_dataset;
  export_cmd->add_option("dataset", export_dataset, "dataset directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    PipelineConfig cfg = make_config(preset, config_path);
    cfg.parallel_costmaps = parallel;
    cfg.planner.rng_seed = seed;
    gen_opts.seed = seed;

    if (run->parsed()) return cmd_run(dataset_dir, cfg, out_dir, max_frames, export_maps);
    if (gen->parsed()) {
      if (max_frames > 0) gen_opts.frames = max_frames;
      return cmd_gen(scene_path, cfg, gen_opts, out_dir);
    }
    if (plan->parsed()) {
      const Pose uav = Pose::nadir({pose_xyz[0], pose_xyz[1], pose_xyz[2]});
      return cmd_plan(run_dir, cfg, uav, mode_name, operator_index, out_dir);
    }
    if (bench->parsed()) return cmd_bench(cfg, bench_frames, seed, out_dir);
    if (export_cmd->parsed()) return cmd_export_maps(export_dataset, cfg, out_dir, max_frames);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
