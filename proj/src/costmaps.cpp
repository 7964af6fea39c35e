#include "uavland/costmaps.hpp"

#include "uavland/distance_transform.hpp"

#include <algorithm>

namespace uavland {

Costmap depth_confidence(const DepthMap& d) {
  double min_d2 = std::numeric_limits<double>::infinity();
  double max_d2 = 0.0;
  for (int y = 0; y < d.height; ++y) {
    for (int x = 0; x < d.width; ++x) {
      if (!d.valid(x, y)) continue;
      const double d2 = static_cast<double>(d.at(x, y)) * d.at(x, y);
      min_d2 = std::min(min_d2, d2);
      max_d2 = std::max(max_d2, d2);
    }
  }
  if (!(max_d2 > 0.0)) throw Error("empty-depth", "no valid pixels in depth map");

  Costmap out(d.width, d.height);
  for (int y = 0; y < d.height; ++y) {
    for (int x = 0; x < d.width; ++x) {
      if (!d.valid(x, y)) continue;
      const double d2 = static_cast<double>(d.at(x, y)) * d.at(x, y);
      out.set(x, y, static_cast<float>(depth_confidence_score(d2, min_d2, max_d2)));
    }
  }
  return out;
}

Costmap flatness(const DepthMap& d, const EdgeParams& params) {
  std::vector<uint8_t> levels, valid;
  depth_to_u8(d, levels, valid);
  std::vector<uint8_t> edges = canny(levels, valid, d.width, d.height, params);

  // Invalid pixels and the image border are unobserved surroundings; both
  // count as edges so the transform is always well defined.
  for (size_t i = 0; i < edges.size(); ++i) {
    if (!valid[i]) edges[i] = 1;
  }
  for (int x = 0; x < d.width; ++x) {
    edges[static_cast<size_t>(x)] = 1;
    edges[static_cast<size_t>(d.height - 1) * d.width + x] = 1;
  }
  for (int y = 0; y < d.height; ++y) {
    edges[static_cast<size_t>(y) * d.width] = 1;
    edges[static_cast<size_t>(y) * d.width + d.width - 1] = 1;
  }

  const std::vector<double> sq = squared_distance_transform(edges, d.width, d.height);
  Costmap out(d.width, d.height);
  for (int y = 0; y < d.height; ++y) {
    for (int x = 0; x < d.width; ++x) {
      if (!d.valid(x, y)) continue;
      out.set(x, y, static_cast<float>(std::sqrt(sq[static_cast<size_t>(y) * d.width + x])));
    }
  }
  return out;
}

NormalMap surface_normals(const DepthMap& d, const CameraIntrinsics& intr,
                          const Pose& pose, int window) {
  if (window < 3 || window % 2 == 0) {
    throw Error("invalid-window", "smoothing window must be odd and >= 3");
  }
  const int w = d.width, h = d.height;
  NormalMap out(w, h);

  // World-frame point image.
  std::vector<Eigen::Vector3d> pts(static_cast<size_t>(w) * h);
  std::vector<uint8_t> pvalid(static_cast<size_t>(w) * h, 0);
  const Eigen::Matrix3d rot = pose.rotation.toRotationMatrix();
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!d.valid(x, y)) continue;
      const double depth = d.at(x, y);
      const Eigen::Vector3d cam((x - intr.cx) * depth / intr.fx,
                                (y - intr.cy) * depth / intr.fy, depth);
      const size_t i = static_cast<size_t>(y) * w + x;
      pts[i] = rot * cam + pose.translation;
      pvalid[i] = 1;
    }
  }

  // Central-difference 3D gradients of the point image.
  std::vector<Eigen::Vector3d> gh(static_cast<size_t>(w) * h, Eigen::Vector3d::Zero());
  std::vector<Eigen::Vector3d> gv(static_cast<size_t>(w) * h, Eigen::Vector3d::Zero());
  std::vector<uint8_t> gvalid(static_cast<size_t>(w) * h, 0);
  for (int y = 1; y < h - 1; ++y) {
    for (int x = 1; x < w - 1; ++x) {
      const size_t i = static_cast<size_t>(y) * w + x;
      if (!pvalid[i] || !pvalid[i - 1] || !pvalid[i + 1] || !pvalid[i - w] || !pvalid[i + w])
        continue;
      gh[i] = 0.5 * (pts[i + 1] - pts[i - 1]);
      gv[i] = 0.5 * (pts[i + w] - pts[i - w]);
      gvalid[i] = 1;
    }
  }

  // Box-average the gradients; integral images keep this linear in pixels.
  const int r = window / 2;
  const size_t sw = static_cast<size_t>(w) + 1;
  std::vector<Eigen::Vector3d> sh(sw * (h + 1), Eigen::Vector3d::Zero());
  std::vector<Eigen::Vector3d> sv(sw * (h + 1), Eigen::Vector3d::Zero());
  std::vector<int> sbad(sw * (h + 1), 0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const size_t i = static_cast<size_t>(y) * w + x;
      const size_t s = static_cast<size_t>(y + 1) * sw + (x + 1);
      sh[s] = gh[i] + sh[s - 1] + sh[s - sw] - sh[s - sw - 1];
      sv[s] = gv[i] + sv[s - 1] + sv[s - sw] - sv[s - sw - 1];
      sbad[s] = (gvalid[i] ? 0 : 1) + sbad[s - 1] + sbad[s - sw] - sbad[s - sw - 1];
    }
  }
  auto box = [&](const std::vector<Eigen::Vector3d>& s, int x0, int y0, int x1, int y1) {
    return s[static_cast<size_t>(y1 + 1) * sw + (x1 + 1)] -
           s[static_cast<size_t>(y0) * sw + (x1 + 1)] -
           s[static_cast<size_t>(y1 + 1) * sw + x0] + s[static_cast<size_t>(y0) * sw + x0];
  };
  auto box_bad = [&](int x0, int y0, int x1, int y1) {
    return sbad[static_cast<size_t>(y1 + 1) * sw + (x1 + 1)] -
           sbad[static_cast<size_t>(y0) * sw + (x1 + 1)] -
           sbad[static_cast<size_t>(y1 + 1) * sw + x0] + sbad[static_cast<size_t>(y0) * sw + x0];
  };

  for (int y = r + 1; y < h - r - 1; ++y) {
    for (int x = r + 1; x < w - r - 1; ++x) {
      if (box_bad(x - r, y - r, x + r, y + r) != 0) continue;
      const Eigen::Vector3d ah = box(sh, x - r, y - r, x + r, y + r);
      const Eigen::Vector3d av = box(sv, x - r, y - r, x + r, y + r);
      Eigen::Vector3d n = ah.cross(av);
      const double norm = n.norm();
      if (norm < 1e-12) continue;
      n /= norm;
      if (n.z() < 0.0) n = -n;  // landing surfaces face up
      out.set(x, y, n.cast<float>());
    }
  }
  return out;
}

Costmap steepness(const DepthMap& d, const CameraIntrinsics& intr, const Pose& pose,
                  const SteepnessParams& params) {
  if (!params.valid()) throw Error("invalid-params", "bad steepness parameters");
  const NormalMap normals = surface_normals(d, intr, pose, params.window);
  Costmap out(d.width, d.height);
  for (int y = 0; y < d.height; ++y) {
    for (int x = 0; x < d.width; ++x) {
      if (!normals.valid(x, y)) continue;
      const double nz = std::clamp(static_cast<double>(normals.at(x, y).z()), -1.0, 1.0);
      const double theta = std::acos(nz);
      out.set(x, y, static_cast<float>(steepness_score(theta, params.theta_th)));
    }
  }
  return out;
}

Costmap energy(const DepthMap& d, const CameraIntrinsics& intr) {
  Costmap out(d.width, d.height);
  for (int y = 0; y < d.height; ++y) {
    const double yt = (y - intr.cy) / intr.fy;
    for (int x = 0; x < d.width; ++x) {
      if (!d.valid(x, y)) continue;
      const double xt = (x - intr.cx) / intr.fx;
      const double depth = d.at(x, y);
      out.set(x, y, static_cast<float>(depth * std::sqrt(xt * xt + yt * yt + 1.0)));
    }
  }
  return out;
}

namespace {

struct Normalizer {
  double lo = 0.0, inv_span = 0.0;
  bool degenerate = true;

  static Normalizer fit(const Costmap& m, const std::vector<uint8_t>& joint_mask) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < m.data.size(); ++i) {
      if (!joint_mask[i]) continue;
      lo = std::min(lo, static_cast<double>(m.data[i]));
      hi = std::max(hi, static_cast<double>(m.data[i]));
    }
    Normalizer n;
    n.lo = lo;
    if (hi > lo) {
      n.inv_span = 1.0 / (hi - lo);
      n.degenerate = false;
    }
    return n;
  }

  double operator()(double v) const { return degenerate ? 1.0 : (v - lo) * inv_span; }
};

}  // namespace

DecisionMap combine(const Costmap& jde, const Costmap& jfl, const Costmap& jn,
                    const Costmap& jec, const CostmapWeights& w) {
  if (!jde.same_shape(jfl) || !jde.same_shape(jn) || !jde.same_shape(jec)) {
    throw Error("shape-mismatch", "costmap dimensions differ");
  }
  if (!w.valid()) throw Error("invalid-weights", "weights must be in [0,1] and sum to 1");

  DecisionMap out(jde.width, jde.height);
  for (size_t i = 0; i < out.mask.size(); ++i) {
    out.mask[i] = jde.mask[i] & jfl.mask[i] & jn.mask[i] & jec.mask[i];
  }
  const Normalizer nde = Normalizer::fit(jde, out.mask);
  const Normalizer nfl = Normalizer::fit(jfl, out.mask);
  const Normalizer nec = Normalizer::fit(jec, out.mask);
  for (size_t i = 0; i < out.mask.size(); ++i) {
    if (!out.mask[i]) continue;
    const double de = nde(jde.data[i]);
    const double fl = nfl(jfl.data[i]);
    const double ec = nec.degenerate ? 1.0 : 1.0 - nec(jec.data[i]);  // nearer is better
    out.data[i] = static_cast<float>(
        combine_scores(de, fl, static_cast<double>(jn.data[i]), ec, w));
  }
  return out;
}

}  // namespace uavland
