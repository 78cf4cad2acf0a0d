#pragma once

#include <Eigen/Core>
#include <cmath>

namespace fgnav {

/// Wraps an angle into (-pi, pi].
inline double wrap_angle(double a) {
  a = std::fmod(a + M_PI, 2.0 * M_PI);
  if (a <= 0.0) {
    a += 2.0 * M_PI;
  }
  return a - M_PI;
}

/// Planar rigid-body pose (x, y, theta), theta kept in (-pi, pi].
struct Se2Pose {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;

  Eigen::Vector2d translation() const { return {x, y}; }

  Eigen::Matrix2d rotation() const {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    Eigen::Matrix2d r;
    r << c, -s, s, c;
    return r;
  }

  /// Maps a point from this frame into the parent frame: R * p + t.
  Eigen::Vector2d transform(const Eigen::Vector2d& p) const {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    return {x + c * p.x() - s * p.y(), y + s * p.x() + c * p.y()};
  }

  /// Maps a point from the parent frame into this frame.
  Eigen::Vector2d inverse_transform(const Eigen::Vector2d& p) const {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const double dx = p.x() - x;
    const double dy = p.y() - y;
    return {c * dx + s * dy, -s * dx + c * dy};
  }

  Eigen::Vector3d to_vector() const { return {x, y, theta}; }

  static Se2Pose from_vector(const Eigen::Vector3d& v) {
    return {v.x(), v.y(), wrap_angle(v.z())};
  }

  Se2Pose normalized() const { return {x, y, wrap_angle(theta)}; }
};

inline double distance(const Se2Pose& a, const Se2Pose& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

}  // namespace fgnav
