#include "uavland/trajectory.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>

namespace uavland {

namespace {

double falling_factorial(int i, int k) {
  double f = 1.0;
  for (int j = 0; j < k; ++j) f *= (i - j);
  return f;
}

// Gram matrix of the squared k-th derivative of t^0..t^degree over [0, T].
Eigen::MatrixXd derivative_gram(int degree, int k, double t) {
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(degree + 1, degree + 1);
  for (int i = k; i <= degree; ++i) {
    for (int j = k; j <= degree; ++j) {
      const int pw = i + j - 2 * k + 1;
      q(i, j) = falling_factorial(i, k) * falling_factorial(j, k) * std::pow(t, pw) / pw;
    }
  }
  return q;
}

// Quintic through (p0,v0,a0) at 0 and (p1,v1,a1) at T.
Eigen::Matrix<double, 6, 1> hermite_quintic(double p0, double v0, double a0, double p1,
                                            double v1, double a1, double t) {
  Eigen::Matrix<double, 6, 1> c;
  c(0) = p0;
  c(1) = v0;
  c(2) = 0.5 * a0;
  Eigen::Matrix3d m;
  const double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
  m << t3, t4, t5, 3 * t2, 4 * t3, 5 * t4, 6 * t, 12 * t2, 20 * t3;
  Eigen::Vector3d rhs(p1 - (c(0) + c(1) * t + c(2) * t2), v1 - (c(1) + 2 * c(2) * t),
                      a1 - 2 * c(2));
  const Eigen::Vector3d tail = m.fullPivLu().solve(rhs);
  c(3) = tail(0);
  c(4) = tail(1);
  c(5) = tail(2);
  return c;
}

// Degree-7 through (p,v,a,j) at both ends.
Eigen::Matrix<double, 8, 1> hermite_septic(const Eigen::Vector4d& s0, const Eigen::Vector4d& s1,
                                           double t) {
  Eigen::Matrix<double, 8, 1> c;
  c(0) = s0(0);
  c(1) = s0(1);
  c(2) = 0.5 * s0(2);
  c(3) = s0(3) / 6.0;
  Eigen::Matrix4d m;
  Eigen::Vector4d rhs;
  for (int d = 0; d < 4; ++d) {
    for (int i = 4; i <= 7; ++i) {
      m(d, i - 4) = falling_factorial(i, d) * std::pow(t, i - d);
    }
    double head = 0.0;
    for (int i = d; i <= 3; ++i) head += falling_factorial(i, d) * c(i) * std::pow(t, i - d);
    rhs(d) = s1(d) - head;
  }
  const Eigen::Vector4d tail = m.fullPivLu().solve(rhs);
  for (int i = 0; i < 4; ++i) c(4 + i) = tail(i);
  return c;
}

std::vector<Eigen::Vector3d> drop_duplicates(const std::vector<Eigen::Vector3d>& pts) {
  std::vector<Eigen::Vector3d> out;
  for (const Eigen::Vector3d& p : pts) {
    if (out.empty() || (p - out.back()).norm() > 1e-12) out.push_back(p);
  }
  return out;
}

PolynomialTrajectory constant_trajectory(const Eigen::Vector3d& p) {
  PolynomialTrajectory::Segment seg;
  seg.duration = 0.0;
  seg.coeffs = Eigen::Matrix<double, 3, Eigen::Dynamic>::Zero(3, 1);
  seg.coeffs.col(0) = p;
  return PolynomialTrajectory({seg}, {p, p});
}

// Unconstrained quadratic minimization over the free knot derivatives. Every
// segment polynomial is the Hermite interpolant of its end states, so the
// derivative cost is an exact quadratic in the stacked free states.
PolynomialTrajectory solve_spline(const std::vector<Eigen::Vector3d>& wps,
                                  const std::vector<double>& durations,
                                  DerivativeObjective objective) {
  const int n_seg = static_cast<int>(wps.size()) - 1;
  const int deriv_per_knot = objective == DerivativeObjective::kJerk ? 2 : 3;  // v,a[,j]
  const int degree = objective == DerivativeObjective::kJerk ? 5 : 7;
  const int cost_order = objective == DerivativeObjective::kJerk ? 3 : 4;
  const int n_knots = n_seg + 1;

  // Free-variable ids per (knot, derivative); -1 means pinned to zero.
  // Velocity and acceleration are pinned at both trajectory ends; the end
  // jerk of the snap variant stays free.
  std::vector<std::vector<int>> var_id(static_cast<size_t>(n_knots),
                                       std::vector<int>(static_cast<size_t>(deriv_per_knot), -1));
  int n_free = 0;
  for (int i = 0; i < n_knots; ++i) {
    for (int d = 0; d < deriv_per_knot; ++d) {
      const bool end_knot = i == 0 || i == n_knots - 1;
      const bool pinned = end_knot && d < 2;
      if (!pinned) var_id[static_cast<size_t>(i)][static_cast<size_t>(d)] = n_free++;
    }
  }

  // Segment cost in the stacked end states y = [p0, d0...; p1, d1...].
  const int states_per_knot = deriv_per_knot + 1;
  const int ny = 2 * states_per_knot;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n_free, n_free);
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n_free, 3);
  std::vector<Eigen::MatrixXd> seg_gram(static_cast<size_t>(n_seg));

  for (int s = 0; s < n_seg; ++s) {
    const double t = durations[static_cast<size_t>(s)];
    // Hermite map: columns of M are coefficients for unit state entries.
    Eigen::MatrixXd m(degree + 1, ny);
    for (int col = 0; col < ny; ++col) {
      Eigen::VectorXd y = Eigen::VectorXd::Zero(ny);
      y(col) = 1.0;
      if (degree == 5) {
        m.col(col) = hermite_quintic(y(0), y(1), y(2), y(3), y(4), y(5), t);
      } else {
        m.col(col) = hermite_septic(y.segment<4>(0), y.segment<4>(4), t);
      }
    }
    const Eigen::MatrixXd q = derivative_gram(degree, cost_order, t);
    seg_gram[static_cast<size_t>(s)] = m.transpose() * q * m;  // ny x ny

    // Scatter into the free-variable quadratic; positions are fixed values.
    auto slot_var = [&](int local) {
      const int knot = s + local / states_per_knot;
      const int comp = local % states_per_knot;
      return comp == 0 ? -1 : var_id[static_cast<size_t>(knot)][static_cast<size_t>(comp - 1)];
    };
    auto slot_fixed = [&](int local, int axis) {
      const int knot = s + local / states_per_knot;
      const int comp = local % states_per_knot;
      return comp == 0 ? wps[static_cast<size_t>(knot)][axis] : 0.0;
    };
    const Eigen::MatrixXd& gs = seg_gram[static_cast<size_t>(s)];
    for (int a = 0; a < ny; ++a) {
      const int va = slot_var(a);
      for (int b = 0; b < ny; ++b) {
        const int vb = slot_var(b);
        if (va >= 0 && vb >= 0) {
          h(va, vb) += gs(a, b);
        } else if (va >= 0 && vb < 0) {
          for (int axis = 0; axis < 3; ++axis) g(va, axis) += gs(a, b) * slot_fixed(b, axis);
        }
      }
    }
  }

  Eigen::MatrixXd d_free(std::max(n_free, 1), 3);
  if (n_free > 0) {
    d_free = Eigen::LDLT<Eigen::MatrixXd>(h).solve(-g);
  }

  // Knot states, then Hermite segments.
  std::vector<Eigen::Vector3d> vel(static_cast<size_t>(n_knots), Eigen::Vector3d::Zero());
  std::vector<Eigen::Vector3d> acc(static_cast<size_t>(n_knots), Eigen::Vector3d::Zero());
  std::vector<Eigen::Vector3d> jrk(static_cast<size_t>(n_knots), Eigen::Vector3d::Zero());
  for (int i = 0; i < n_knots; ++i) {
    for (int d = 0; d < deriv_per_knot; ++d) {
      const int v = var_id[static_cast<size_t>(i)][static_cast<size_t>(d)];
      if (v < 0) continue;
      Eigen::Vector3d& target = d == 0 ? vel[static_cast<size_t>(i)]
                               : d == 1 ? acc[static_cast<size_t>(i)]
                                        : jrk[static_cast<size_t>(i)];
      for (int axis = 0; axis < 3; ++axis) target[axis] = d_free(v, axis);
    }
  }

  std::vector<PolynomialTrajectory::Segment> segments;
  for (int s = 0; s < n_seg; ++s) {
    PolynomialTrajectory::Segment seg;
    seg.duration = durations[static_cast<size_t>(s)];
    seg.coeffs = Eigen::Matrix<double, 3, Eigen::Dynamic>::Zero(3, degree + 1);
    for (int axis = 0; axis < 3; ++axis) {
      if (degree == 5) {
        seg.coeffs.row(axis) =
            hermite_quintic(wps[static_cast<size_t>(s)][axis], vel[static_cast<size_t>(s)][axis],
                            acc[static_cast<size_t>(s)][axis], wps[static_cast<size_t>(s) + 1][axis],
                            vel[static_cast<size_t>(s) + 1][axis],
                            acc[static_cast<size_t>(s) + 1][axis], seg.duration)
                .transpose();
      } else {
        const Eigen::Vector4d s0(wps[static_cast<size_t>(s)][axis],
                                 vel[static_cast<size_t>(s)][axis],
                                 acc[static_cast<size_t>(s)][axis],
                                 jrk[static_cast<size_t>(s)][axis]);
        const Eigen::Vector4d s1(wps[static_cast<size_t>(s) + 1][axis],
                                 vel[static_cast<size_t>(s) + 1][axis],
                                 acc[static_cast<size_t>(s) + 1][axis],
                                 jrk[static_cast<size_t>(s) + 1][axis]);
        seg.coeffs.row(axis) = hermite_septic(s0, s1, seg.duration).transpose();
      }
    }
    segments.push_back(std::move(seg));
  }
  return PolynomialTrajectory(std::move(segments), wps);
}

}  // namespace

PolynomialTrajectory::PolynomialTrajectory(std::vector<Segment> segments,
                                           std::vector<Eigen::Vector3d> waypoints)
    : segments_(std::move(segments)), waypoints_(std::move(waypoints)) {
  total_duration_ = 0.0;
  for (const Segment& s : segments_) total_duration_ += s.duration;
}

double PolynomialTrajectory::knot_time(size_t i) const {
  double t = 0.0;
  for (size_t s = 0; s < i && s < segments_.size(); ++s) t += segments_[s].duration;
  return t;
}

TrajectorySample PolynomialTrajectory::sample(double t) const {
  TrajectorySample out;
  if (segments_.empty()) return out;
  if (t < 0.0) {
    out.clamped = true;
    t = 0.0;
  } else if (t > total_duration_) {
    out.clamped = true;
    t = total_duration_;
  }
  size_t s = 0;
  double local = t;
  while (s + 1 < segments_.size() && local > segments_[s].duration) {
    local -= segments_[s].duration;
    ++s;
  }
  const Segment& seg = segments_[s];
  local = std::clamp(local, 0.0, seg.duration);
  const int degree = static_cast<int>(seg.coeffs.cols()) - 1;
  for (int axis = 0; axis < 3; ++axis) {
    double p = 0.0, v = 0.0, a = 0.0, j = 0.0;
    for (int i = degree; i >= 0; --i) {
      const double c = seg.coeffs(axis, i);
      p = p * local + c;
      if (i >= 1) v = v * local + c * i;
      if (i >= 2) a = a * local + c * i * (i - 1);
      if (i >= 3) j = j * local + c * i * (i - 1) * (i - 2);
    }
    out.position[axis] = p;
    out.velocity[axis] = v;
    out.acceleration[axis] = a;
    out.jerk[axis] = j;
  }
  return out;
}

double PolynomialTrajectory::derivative_cost(int k) const {
  double cost = 0.0;
  for (const Segment& seg : segments_) {
    if (seg.duration <= 0.0) continue;
    const int degree = static_cast<int>(seg.coeffs.cols()) - 1;
    const Eigen::MatrixXd q = derivative_gram(degree, k, seg.duration);
    for (int axis = 0; axis < 3; ++axis) {
      const Eigen::VectorXd c = seg.coeffs.row(axis).transpose();
      cost += c.dot(q * c);
    }
  }
  return cost;
}

std::string PolynomialTrajectory::to_csv(double rate_hz) const {
  std::string out = "t,x,y,z,vx,vy,vz,ax,ay,az\n";
  const double dt = 1.0 / rate_hz;
  char row[256];
  for (double t = 0.0;; t += dt) {
    const bool last = t >= total_duration_;
    const TrajectorySample s = sample(std::min(t, total_duration_));
    std::snprintf(row, sizeof(row),
                  "%.6f,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g\n",
                  std::min(t, total_duration_), s.position.x(), s.position.y(), s.position.z(),
                  s.velocity.x(), s.velocity.y(), s.velocity.z(), s.acceleration.x(),
                  s.acceleration.y(), s.acceleration.z());
    out += row;
    if (last) break;
  }
  return out;
}

std::string PolynomialTrajectory::to_coeff_json() const {
  nlohmann::json j;
  j["total_duration"] = total_duration_;
  j["waypoints"] = nlohmann::json::array();
  for (const Eigen::Vector3d& w : waypoints_) {
    j["waypoints"].push_back({w.x(), w.y(), w.z()});
  }
  j["segments"] = nlohmann::json::array();
  for (const Segment& s : segments_) {
    nlohmann::json seg;
    seg["duration"] = s.duration;
    for (int axis = 0; axis < 3; ++axis) {
      std::vector<double> c(static_cast<size_t>(s.coeffs.cols()));
      for (int i = 0; i < s.coeffs.cols(); ++i) c[static_cast<size_t>(i)] = s.coeffs(axis, i);
      seg[axis == 0 ? "x" : axis == 1 ? "y" : "z"] = c;
    }
    j["segments"].push_back(seg);
  }
  return j.dump(2);
}

std::vector<double> allocate_durations(const std::vector<Eigen::Vector3d>& waypoints,
                                       double v_nom) {
  std::vector<double> durations;
  for (size_t i = 1; i < waypoints.size(); ++i) {
    const double len = (waypoints[i] - waypoints[i - 1]).norm();
    durations.push_back(std::max(len / v_nom, 0.5));
  }
  return durations;
}

PolynomialTrajectory min_jerk_trajectory(const std::vector<Eigen::Vector3d>& waypoints,
                                         double v_nom, DerivativeObjective objective) {
  if (waypoints.empty()) throw Error("invalid-params", "no waypoints");
  if (!(v_nom > 0.0)) throw Error("invalid-params", "nominal speed must be positive");
  const std::vector<Eigen::Vector3d> wps = drop_duplicates(waypoints);
  if (wps.size() == 1) return constant_trajectory(wps[0]);
  return solve_spline(wps, allocate_durations(wps, v_nom), objective);
}

PolynomialTrajectory trajectory_from_knot_states(const std::vector<Eigen::Vector3d>& waypoints,
                                                 const std::vector<double>& durations,
                                                 const std::vector<Eigen::Vector3d>& velocities,
                                                 const std::vector<Eigen::Vector3d>& accelerations) {
  if (waypoints.size() < 2 || durations.size() != waypoints.size() - 1 ||
      velocities.size() != waypoints.size() || accelerations.size() != waypoints.size()) {
    throw Error("invalid-params", "knot state sizes do not match waypoints");
  }
  std::vector<PolynomialTrajectory::Segment> segments;
  for (size_t s = 0; s + 1 < waypoints.size(); ++s) {
    PolynomialTrajectory::Segment seg;
    seg.duration = durations[s];
    seg.coeffs = Eigen::Matrix<double, 3, Eigen::Dynamic>::Zero(3, 6);
    for (int axis = 0; axis < 3; ++axis) {
      seg.coeffs.row(axis) =
          hermite_quintic(waypoints[s][axis], velocities[s][axis], accelerations[s][axis],
                          waypoints[s + 1][axis], velocities[s + 1][axis],
                          accelerations[s + 1][axis], seg.duration)
              .transpose();
    }
    segments.push_back(std::move(seg));
  }
  return PolynomialTrajectory(std::move(segments), waypoints);
}

}  // namespace uavland
