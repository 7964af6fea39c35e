#include "uavland/site_detection.hpp"

#include "uavland/projection.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>

namespace uavland {

std::vector<CandidateSite> detect_dense_sites(const DecisionMap& decision,
                                              const Costmap& jfl_raw, const DepthMap& d,
                                              const CameraIntrinsics& intr, const Pose& pose,
                                              const DetectionParams& params) {
  if (!decision.same_shape(jfl_raw) || decision.width != d.width ||
      decision.height != d.height) {
    throw Error("shape-mismatch", "decision/flatness/depth dimensions differ");
  }
  if (!params.valid()) throw Error("invalid-params", "bad detection parameters");

  const int w = decision.width, h = decision.height;
  std::vector<CandidateSite> sites;

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!decision.valid(x, y) || !d.valid(x, y)) continue;
      const float score = decision.at(x, y);
      if (score < params.score_threshold) continue;

      const double depth = d.at(x, y);
      const double footprint_px = uav_radius_pixels(params.uav_radius, depth, intr);
      if (!jfl_raw.valid(x, y) || jfl_raw.at(x, y) < footprint_px) continue;

      // Local maximum of the decision score within the suppression radius;
      // ties go to the first pixel in row-major order.
      const double radius = params.nms_radius_px > 0.0 ? params.nms_radius_px : footprint_px;
      const int ri = static_cast<int>(std::ceil(radius));
      const double r2 = radius * radius;
      bool is_peak = true;
      for (int dy = -ri; dy <= ri && is_peak; ++dy) {
        const int qy = y + dy;
        if (qy < 0 || qy >= h) continue;
        for (int dx = -ri; dx <= ri; ++dx) {
          const int qx = x + dx;
          if ((dx == 0 && dy == 0) || qx < 0 || qx >= w) continue;
          if (dx * dx + dy * dy > r2) continue;
          if (!decision.valid(qx, qy)) continue;
          const float q = decision.at(qx, qy);
          if (q > score || (q == score && (qy < y || (qy == y && qx < x)))) {
            is_peak = false;
            break;
          }
        }
      }
      if (!is_peak) continue;

      CandidateSite site;
      site.pixel = {x, y};
      site.depth = depth;
      site.world = pixel_to_world({static_cast<double>(x), static_cast<double>(y)}, depth,
                                  intr, pose);
      site.score = score;
      site.flatness_radius_px = jfl_raw.at(x, y);
      sites.push_back(site);
    }
  }
  return sites;
}

std::string sites_to_jsonl(const std::vector<CandidateSite>& sites, int frame) {
  std::string out;
  for (const CandidateSite& s : sites) {
    nlohmann::json j;
    j["frame"] = frame;
    j["px"] = s.pixel.x();
    j["py"] = s.pixel.y();
    j["depth_m"] = s.depth;
    j["x"] = s.world.x();
    j["y"] = s.world.y();
    j["z"] = s.world.z();
    j["score"] = s.score;
    out += j.dump();
    out += '\n';
  }
  return out;
}

}  // namespace uavland
