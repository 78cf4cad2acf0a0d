#pragma once

#include <Eigen/Core>
#include <cmath>

#include "fgnav/se2.hpp"

namespace fgnav {

/// Unicycle command: forward velocity and yaw rate.
struct ControlInput {
  double v = 0.0;
  double omega = 0.0;

  Eigen::Vector2d to_vector() const { return {v, omega}; }
  static ControlInput from_vector(const Eigen::Vector2d& u) {
    return {u.x(), u.y()};
  }
};

/// Second-order Runge-Kutta step of the unicycle kinematics:
///   x' = x + v T cos(theta + omega T / 2)
///   y' = y + v T sin(theta + omega T / 2)
///   theta' = theta + omega T (wrapped)
inline Se2Pose unicycle_step(const Se2Pose& x, const ControlInput& u,
                             double dt) {
  const double mid = x.theta + 0.5 * u.omega * dt;
  return {x.x + u.v * dt * std::cos(mid), x.y + u.v * dt * std::sin(mid),
          wrap_angle(x.theta + u.omega * dt)};
}

/// Jacobians of the step with respect to the state and the control.
inline void unicycle_jacobians(const Se2Pose& x, const ControlInput& u,
                               double dt, Eigen::Matrix3d& df_dx,
                               Eigen::Matrix<double, 3, 2>& df_du) {
  const double mid = x.theta + 0.5 * u.omega * dt;
  const double c = std::cos(mid);
  const double s = std::sin(mid);
  df_dx.setIdentity();
  df_dx(0, 2) = -u.v * dt * s;
  df_dx(1, 2) = u.v * dt * c;
  df_du << dt * c, -0.5 * u.v * dt * dt * s,  //
      dt * s, 0.5 * u.v * dt * dt * c,        //
      0.0, dt;
}

}  // namespace fgnav
