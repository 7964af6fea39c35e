#include "uavland/scenegen.hpp"

#include "uavland/projection.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>

namespace uavland {

namespace {

constexpr double kRayEps = 1e-9;

// Deterministic, platform-independent RNG (splitmix64).
struct Rng {
  uint64_t state;
  explicit Rng(uint64_t seed) : state(seed) {}

  uint64_t next_u64() {
    state += 0x9e3779b97f4a7c15ull;
    uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double gaussian() {
    double u1 = uniform();
    if (u1 < 1e-300) u1 = 1e-300;
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }
};

struct LocalHit {
  double t;
  Eigen::Vector3d normal;
};

std::optional<LocalHit> intersect(const PlanePrim& p, const Eigen::Vector3d& o,
                                  const Eigen::Vector3d& d) {
  const double denom = p.normal.dot(d);
  if (std::abs(denom) < 1e-15) return std::nullopt;
  const double t = (p.offset - p.normal.dot(o)) / denom;
  if (t <= kRayEps) return std::nullopt;
  return LocalHit{t, p.normal};
}

std::optional<LocalHit> intersect(const BoxPrim& b, const Eigen::Vector3d& o,
                                  const Eigen::Vector3d& d) {
  double t0 = -std::numeric_limits<double>::infinity();
  double t1 = std::numeric_limits<double>::infinity();
  int axis = -1;
  for (int a = 0; a < 3; ++a) {
    if (std::abs(d[a]) < 1e-15) {
      if (o[a] < b.min[a] || o[a] > b.max[a]) return std::nullopt;
      continue;
    }
    double ta = (b.min[a] - o[a]) / d[a];
    double tb = (b.max[a] - o[a]) / d[a];
    if (ta > tb) std::swap(ta, tb);
    if (ta > t0) {
      t0 = ta;
      axis = a;
    }
    t1 = std::min(t1, tb);
    if (t0 > t1) return std::nullopt;
  }
  if (t0 <= kRayEps || axis < 0) return std::nullopt;
  Eigen::Vector3d n = Eigen::Vector3d::Zero();
  n[axis] = d[axis] > 0.0 ? -1.0 : 1.0;
  return LocalHit{t0, n};
}

std::optional<LocalHit> intersect(const SpherePrim& s, const Eigen::Vector3d& o,
                                  const Eigen::Vector3d& d) {
  const Eigen::Vector3d oc = o - s.center;
  const double a = d.dot(d);
  const double b = 2.0 * d.dot(oc);
  const double c = oc.dot(oc) - s.radius * s.radius;
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return std::nullopt;
  const double sq = std::sqrt(disc);
  double t = (-b - sq) / (2.0 * a);
  if (t <= kRayEps) t = (-b + sq) / (2.0 * a);
  if (t <= kRayEps) return std::nullopt;
  const Eigen::Vector3d p = o + t * d;
  return LocalHit{t, (p - s.center) / s.radius};
}

std::optional<LocalHit> intersect(const RampPrim& r, const Eigen::Vector3d& o,
                                  const Eigen::Vector3d& d) {
  const Eigen::Vector3d n = r.normal();
  const double denom = n.dot(d);
  if (std::abs(denom) < 1e-15) return std::nullopt;
  const double t = n.dot(r.center - o) / denom;
  if (t <= kRayEps) return std::nullopt;
  const Eigen::Vector3d p = o + t * d - r.center;
  if (std::abs(p.dot(r.axis_u())) > r.half_x || std::abs(p.dot(r.axis_v())) > r.half_y) {
    return std::nullopt;
  }
  return LocalHit{t, n};
}

// Distance from a 2D point to the boundary of a yaw-rotated rectangle;
// negative inside.
double rect_boundary_distance(const Eigen::Vector2d& p, const Eigen::Vector2d& center,
                              double yaw, double half_u, double half_v) {
  const double c = std::cos(yaw), s = std::sin(yaw);
  const Eigen::Vector2d q = p - center;
  const double lu = std::abs(c * q.x() + s * q.y());
  const double lv = std::abs(-s * q.x() + c * q.y());
  const double du = lu - half_u, dv = lv - half_v;
  if (du <= 0.0 && dv <= 0.0) return std::max(du, dv);  // inside, negative
  const double ox = std::max(du, 0.0), oy = std::max(dv, 0.0);
  return std::hypot(ox, oy);
}

}  // namespace

Eigen::Vector3d RampPrim::axis_u() const {
  return {std::cos(yaw), std::sin(yaw), 0.0};
}
Eigen::Vector3d RampPrim::axis_v() const {
  return {-std::sin(yaw) * std::cos(tilt), std::cos(yaw) * std::cos(tilt), std::sin(tilt)};
}
Eigen::Vector3d RampPrim::normal() const {
  return {std::sin(yaw) * std::sin(tilt), -std::cos(yaw) * std::sin(tilt), std::cos(tilt)};
}

std::optional<RayHit> cast_pixel_ray(const Scene& scene, const Pose& pose,
                                     const CameraIntrinsics& intr, double px, double py) {
  const Eigen::Vector3d dir_cam((px - intr.cx) / intr.fx, (py - intr.cy) / intr.fy, 1.0);
  const Eigen::Vector3d dir = pose.rotation * dir_cam;
  const Eigen::Vector3d& origin = pose.translation;

  RayHit best;
  best.depth = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < scene.primitives.size(); ++i) {
    const auto hit = std::visit(
        [&](const auto& prim) { return intersect(prim, origin, dir); }, scene.primitives[i]);
    // With the unnormalized direction (x~, y~, 1), the ray parameter is the
    // z-depth directly.
    if (hit && hit->t < best.depth) {
      best.depth = hit->t;
      best.point = origin + hit->t * dir;
      best.normal = hit->normal;
      best.primitive = static_cast<int>(i);
    }
  }
  if (!std::isfinite(best.depth)) return std::nullopt;
  if (best.normal.z() < 0.0) best.normal = -best.normal;
  return best;
}

DepthMap render_depth(const Scene& scene, const Pose& pose, const CameraIntrinsics& intr,
                      const NoiseModel& noise, uint64_t seed, float d_min, float d_max) {
  if (!noise.valid()) throw Error("invalid-params", "bad noise model");
  DepthMap out(intr.width, intr.height, d_min, d_max);
  Rng rng(seed * 0x9e3779b97f4a7c15ull + 1);
  for (int y = 0; y < intr.height; ++y) {
    for (int x = 0; x < intr.width; ++x) {
      const bool dropped = noise.dropout > 0.0 && rng.uniform() < noise.dropout;
      const auto hit = cast_pixel_ray(scene, pose, intr, x, y);
      if (!hit || dropped) continue;
      double depth = hit->depth;
      if (noise.axial_a > 0.0) {
        depth += rng.gaussian() * noise.axial_a * depth * depth;
      }
      if (depth < d_min || depth > d_max) continue;
      out.at(x, y) = static_cast<float>(depth);
    }
  }
  return out;
}

std::vector<uint8_t> safe_mask(const Scene& scene, const Pose& pose,
                               const CameraIntrinsics& intr, double uav_radius,
                               double theta_th, float d_min, float d_max) {
  std::vector<uint8_t> mask(static_cast<size_t>(intr.width) * intr.height, 0);
  const double cos_th = std::cos(theta_th);
  for (int y = 0; y < intr.height; ++y) {
    for (int x = 0; x < intr.width; ++x) {
      const auto hit = cast_pixel_ray(scene, pose, intr, x, y);
      if (!hit || hit->depth < d_min || hit->depth > d_max) continue;
      if (hit->normal.z() < cos_th - 1e-12) continue;  // too steep

      // Clearance to the view-frustum border, expressed in pixels at the
      // hit depth (the surroundings past the border are unobserved).
      const double border_px = std::min(std::min<double>(x, y),
                                        std::min<double>(intr.width - 1 - x,
                                                         intr.height - 1 - y));
      if (border_px < uav_radius_pixels(uav_radius, hit->depth, intr)) continue;

      const Eigen::Vector2d pxy = hit->point.head<2>();
      bool clear = true;
      for (size_t i = 0; i < scene.primitives.size() && clear; ++i) {
        const bool own = static_cast<int>(i) == hit->primitive;
        const Primitive& prim = scene.primitives[i];
        double dist = std::numeric_limits<double>::infinity();
        if (const auto* box = std::get_if<BoxPrim>(&prim)) {
          const Eigen::Vector2d c = 0.5 * (box->min.head<2>() + box->max.head<2>());
          const double hu = 0.5 * (box->max.x() - box->min.x());
          const double hv = 0.5 * (box->max.y() - box->min.y());
          if (own && std::abs(hit->point.z() - box->max.z()) < 1e-9) {
            // On the top face: clearance is the inset to its boundary.
            dist = -rect_boundary_distance(pxy, c, 0.0, hu, hv);
          } else {
            dist = std::max(rect_boundary_distance(pxy, c, 0.0, hu, hv), 0.0);
          }
        } else if (const auto* sph = std::get_if<SpherePrim>(&prim)) {
          const double rho = (pxy - Eigen::Vector2d(sph->center.head<2>())).norm();
          // The silhouette circle is the depth discontinuity.
          dist = own ? sph->radius - rho : std::max(rho - sph->radius, 0.0);
        } else if (const auto* ramp = std::get_if<RampPrim>(&prim)) {
          const Eigen::Vector2d c = ramp->center.head<2>();
          const double hv_flat = ramp->half_y * std::cos(ramp->tilt);
          const double d2 =
              rect_boundary_distance(pxy, c, ramp->yaw, ramp->half_x, hv_flat);
          dist = own ? -d2 : std::max(d2, 0.0);
        }
        if (dist < uav_radius) clear = false;
      }
      if (clear) mask[static_cast<size_t>(y) * intr.width + x] = 1;
    }
  }
  return mask;
}

Scene load_scene_json(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error("io", "cannot open scene file " + path);
  nlohmann::json j;
  f >> j;
  Scene scene;
  for (const auto& p : j.at("primitives")) {
    const std::string type = p.at("type");
    if (type == "plane") {
      PlanePrim prim;
      if (p.contains("normal")) {
        prim.normal = Eigen::Vector3d(p["normal"][0], p["normal"][1], p["normal"][2]).normalized();
      }
      prim.offset = p.value("offset", 0.0);
      scene.primitives.emplace_back(prim);
    } else if (type == "box") {
      BoxPrim prim;
      prim.min = Eigen::Vector3d(p.at("min")[0], p.at("min")[1], p.at("min")[2]);
      prim.max = Eigen::Vector3d(p.at("max")[0], p.at("max")[1], p.at("max")[2]);
      scene.primitives.emplace_back(prim);
    } else if (type == "sphere") {
      SpherePrim prim;
      prim.center = Eigen::Vector3d(p.at("center")[0], p.at("center")[1], p.at("center")[2]);
      prim.radius = p.at("radius");
      scene.primitives.emplace_back(prim);
    } else if (type == "ramp") {
      RampPrim prim;
      prim.center = Eigen::Vector3d(p.at("center")[0], p.at("center")[1], p.at("center")[2]);
      prim.half_x = p.at("half_x");
      prim.half_y = p.at("half_y");
      prim.tilt = p.value("tilt_deg", 0.0) * M_PI / 180.0;
      prim.yaw = p.value("yaw_deg", 0.0) * M_PI / 180.0;
      scene.primitives.emplace_back(prim);
    } else {
      throw Error("io", "unknown primitive type: " + type);
    }
  }
  return scene;
}

std::string scene_to_json(const Scene& scene) {
  nlohmann::json j;
  j["primitives"] = nlohmann::json::array();
  for (const Primitive& prim : scene.primitives) {
    nlohmann::json p;
    if (const auto* plane = std::get_if<PlanePrim>(&prim)) {
      p["type"] = "plane";
      p["normal"] = {plane->normal.x(), plane->normal.y(), plane->normal.z()};
      p["offset"] = plane->offset;
    } else if (const auto* box = std::get_if<BoxPrim>(&prim)) {
      p["type"] = "box";
      p["min"] = {box->min.x(), box->min.y(), box->min.z()};
      p["max"] = {box->max.x(), box->max.y(), box->max.z()};
    } else if (const auto* sph = std::get_if<SpherePrim>(&prim)) {
      p["type"] = "sphere";
      p["center"] = {sph->center.x(), sph->center.y(), sph->center.z()};
      p["radius"] = sph->radius;
    } else if (const auto* ramp = std::get_if<RampPrim>(&prim)) {
      p["type"] = "ramp";
      p["center"] = {ramp->center.x(), ramp->center.y(), ramp->center.z()};
      p["half_x"] = ramp->half_x;
      p["half_y"] = ramp->half_y;
      p["tilt_deg"] = ramp->tilt * 180.0 / M_PI;
      p["yaw_deg"] = ramp->yaw * 180.0 / M_PI;
    }
    j["primitives"].push_back(p);
  }
  return j.dump(2);
}

Scene random_rubble_scene(uint64_t seed, const RandomSceneOptions& opts) {
  Rng rng(seed * 0x2545f4914f6cdd1dull + 7);
  Scene scene;
  scene.primitives.emplace_back(PlanePrim{});  // ground at z = 0

  const int count = opts.min_obstacles +
                    static_cast<int>(rng.next_u64() %
                                     static_cast<uint64_t>(opts.max_obstacles - opts.min_obstacles + 1));
  struct Placed {
    Eigen::Vector2d center;
    double radius;
  };
  std::vector<Placed> placed;

  int added = 0;
  int attempts = 0;
  while (added < count && attempts < 1000) {
    ++attempts;
    const Eigen::Vector2d c(rng.uniform(-opts.area_half, opts.area_half),
                            rng.uniform(-opts.area_half, opts.area_half));
    const int kind = static_cast<int>(rng.next_u64() % 3);
    Primitive prim;
    double radius = 0.0;
    if (kind == 0) {
      const double hx = rng.uniform(opts.box_half_min, opts.box_half_max);
      const double hy = rng.uniform(opts.box_half_min, opts.box_half_max);
      const double h = rng.uniform(opts.box_height_min, opts.box_height_max);
      prim = BoxPrim{{c.x() - hx, c.y() - hy, 0.0}, {c.x() + hx, c.y() + hy, h}};
      radius = std::hypot(hx, hy);
    } else if (kind == 1) {
      const double r = rng.uniform(opts.sphere_radius_min, opts.sphere_radius_max);
      prim = SpherePrim{{c.x(), c.y(), r}, r};
      radius = r;
    } else {
      RampPrim ramp;
      ramp.center = {c.x(), c.y(), rng.uniform(1.0, 2.5)};
      ramp.half_x = rng.uniform(1.0, 2.0);
      ramp.half_y = rng.uniform(1.0, 2.0);
      ramp.tilt = rng.uniform(opts.ramp_tilt_min_deg, opts.ramp_tilt_max_deg) * M_PI / 180.0;
      ramp.yaw = rng.uniform(0.0, 2.0 * M_PI);
      prim = ramp;
      radius = std::hypot(ramp.half_x, ramp.half_y);
    }
    bool ok = true;
    for (const Placed& q : placed) {
      if ((q.center - c).norm() < q.radius + radius + opts.min_separation) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    placed.push_back({c, radius});
    scene.primitives.push_back(prim);
    ++added;
  }
  return scene;
}

}  // namespace uavland
