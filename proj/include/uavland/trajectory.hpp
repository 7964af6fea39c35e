#pragma once

#include "uavland/types.hpp"

#include <string>
#include <vector>

namespace uavland {

enum class DerivativeObjective {
  kJerk,  ///< quintic segments, C2 at knots
  kSnap,  ///< degree-7 segments, C3 at knots
};

struct TrajectorySample {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  Eigen::Vector3d velocity = Eigen::Vector3d::Zero();
  Eigen::Vector3d acceleration = Eigen::Vector3d::Zero();
  Eigen::Vector3d jerk = Eigen::Vector3d::Zero();
  bool clamped = false;  ///< query time was outside [0, duration]
};

/// Piecewise-polynomial trajectory, one polynomial per axis per segment.
/// Position is continuous everywhere; velocity and acceleration are
/// continuous at interior waypoints and zero at both ends.
class PolynomialTrajectory {
 public:
  struct Segment {
    double duration = 0.0;
    // Rows x/y/z, columns are t^0..t^degree coefficients.
    Eigen::Matrix<double, 3, Eigen::Dynamic> coeffs;
  };

  PolynomialTrajectory() = default;
  PolynomialTrajectory(std::vector<Segment> segments, std::vector<Eigen::Vector3d> waypoints);

  TrajectorySample sample(double t) const;

  /// Integral of the squared k-th derivative magnitude over the whole
  /// trajectory, evaluated analytically.
  double derivative_cost(int k) const;

  const std::vector<Segment>& segments() const { return segments_; }
  const std::vector<Eigen::Vector3d>& waypoints() const { return waypoints_; }
  double total_duration() const { return total_duration_; }

  /// Knot time of waypoint i (0 <= i < waypoints.size()).
  double knot_time(size_t i) const;

  std::string to_csv(double rate_hz) const;
  std::string to_coeff_json() const;

 private:
  std::vector<Segment> segments_;
  std::vector<Eigen::Vector3d> waypoints_;
  double total_duration_ = 0.0;
};

/// Segment durations proportional to length at the nominal speed, with a
/// 0.5 s floor.
std::vector<double> allocate_durations(const std::vector<Eigen::Vector3d>& waypoints,
                                       double v_nom);

/// Minimum-jerk (or minimum-snap) trajectory through the waypoints:
/// interpolates every waypoint, rest-to-rest, interior knot derivatives
/// chosen to minimize the integral of the squared jerk (snap). Duplicate
/// consecutive waypoints are dropped; a single point yields a constant
/// trajectory. Throws Error("invalid-params") on empty input or v_nom <= 0.
PolynomialTrajectory min_jerk_trajectory(const std::vector<Eigen::Vector3d>& waypoints,
                                         double v_nom,
                                         DerivativeObjective objective = DerivativeObjective::kJerk);

/// Quintic Hermite spline from explicit knot velocities and accelerations
/// (sizes must match the waypoints). Interpolation and C2 continuity hold for
/// any choice of states; min_jerk_trajectory picks the cost-optimal ones.
PolynomialTrajectory trajectory_from_knot_states(const std::vector<Eigen::Vector3d>& waypoints,
                                                 const std::vector<double>& durations,
                                                 const std::vector<Eigen::Vector3d>& velocities,
                                                 const std::vector<Eigen::Vector3d>& accelerations);

}  // namespace uavland
