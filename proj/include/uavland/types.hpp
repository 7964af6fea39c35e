#pragma once

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace uavland {

/// Error with a stable machine-readable code ("invalid-depth", "no-sites", ...).
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(code + ": " + message), code_(std::move(code)) {}

  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

/// Pinhole camera model, no distortion.
struct CameraIntrinsics {
  double fx = 0.0;  ///< focal length, pixels
  double fy = 0.0;
  double cx = 0.0;  ///< principal point, pixels
  double cy = 0.0;
  int width = 0;  ///< image size, pixels
  int height = 0;

  bool valid() const {
    return fx > 0.0 && fy > 0.0 && width > 0 && height > 0 && cx >= 0.0 &&
           cx < width && cy >= 0.0 && cy < height;
  }
};

/// Rigid body pose, camera/body -> world.
struct Pose {
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();
  Eigen::Quaterniond rotation = Eigen::Quaterniond::Identity();

  static Pose identity() { return Pose{}; }

  /// Pose looking straight down (camera +z maps to world -z, +x to +x).
  static Pose nadir(const Eigen::Vector3d& position) {
    Pose p;
    p.translation = position;
    p.rotation = Eigen::Quaterniond(Eigen::AngleAxisd(M_PI, Eigen::Vector3d::UnitX()));
    return p;
  }

  Eigen::Vector3d apply(const Eigen::Vector3d& v) const {
    return rotation * v + translation;
  }

  Eigen::Vector3d apply_inverse(const Eigen::Vector3d& v) const {
    return rotation.conjugate() * (v - translation);
  }

  /// Composition: (a * b).apply(v) == a.apply(b.apply(v)).
  Pose operator*(const Pose& other) const {
    Pose out;
    out.rotation = rotation * other.rotation;
    out.translation = rotation * other.translation + translation;
    return out;
  }

  bool unit_rotation(double tol = 1e-9) const {
    return std::abs(rotation.norm() - 1.0) <= tol;
  }
};

/// Row-major z-depth image in meters. Depth is distance along the optical
/// axis, not ray range. Out-of-range / missing pixels carry NaN.
struct DepthMap {
  int width = 0;
  int height = 0;
  float d_min = 0.0f;  ///< valid sensor range, meters
  float d_max = 0.0f;
  std::vector<float> data;

  static constexpr float kInvalid = std::numeric_limits<float>::quiet_NaN();

  DepthMap() = default;
  DepthMap(int w, int h, float dmin, float dmax)
      : width(w), height(h), d_min(dmin), d_max(dmax),
        data(static_cast<size_t>(w) * h, kInvalid) {}

  float& at(int x, int y) { return data[static_cast<size_t>(y) * width + x]; }
  float at(int x, int y) const { return data[static_cast<size_t>(y) * width + x]; }

  bool in_bounds(int x, int y) const {
    return x >= 0 && x < width && y >= 0 && y < height;
  }

  bool valid(int x, int y) const {
    const float d = at(x, y);
    return std::isfinite(d) && d >= d_min && d <= d_max;
  }

  size_t size() const { return data.size(); }
};

/// Per-pixel score grid aligned with a source depth map. Scores of invalid
/// pixels are undefined; the mask is authoritative.
struct Costmap {
  int width = 0;
  int height = 0;
  std::vector<float> data;
  std::vector<uint8_t> mask;  ///< 1 = valid

  Costmap() = default;
  Costmap(int w, int h)
      : width(w), height(h), data(static_cast<size_t>(w) * h, 0.0f),
        mask(static_cast<size_t>(w) * h, 0) {}

  float& at(int x, int y) { return data[static_cast<size_t>(y) * width + x]; }
  float at(int x, int y) const { return data[static_cast<size_t>(y) * width + x]; }

  bool valid(int x, int y) const { return mask[static_cast<size_t>(y) * width + x] != 0; }
  void set(int x, int y, float v) {
    const size_t i = static_cast<size_t>(y) * width + x;
    data[i] = v;
    mask[i] = 1;
  }

  bool same_shape(const Costmap& other) const {
    return width == other.width && height == other.height;
  }
};

/// Decision map is a costmap fused from the individual hazard maps.
using DecisionMap = Costmap;

/// Per-pixel world-frame unit normals; invalid where depth support is missing.
struct NormalMap {
  int width = 0;
  int height = 0;
  std::vector<Eigen::Vector3f> normals;
  std::vector<uint8_t> mask;

  NormalMap() = default;
  NormalMap(int w, int h)
      : width(w), height(h), normals(static_cast<size_t>(w) * h, Eigen::Vector3f::Zero()),
        mask(static_cast<size_t>(w) * h, 0) {}

  const Eigen::Vector3f& at(int x, int y) const {
    return normals[static_cast<size_t>(y) * width + x];
  }
  bool valid(int x, int y) const { return mask[static_cast<size_t>(y) * width + x] != 0; }
  void set(int x, int y, const Eigen::Vector3f& n) {
    const size_t i = static_cast<size_t>(y) * width + x;
    normals[i] = n;
    mask[i] = 1;
  }
};

}  // namespace uavland
