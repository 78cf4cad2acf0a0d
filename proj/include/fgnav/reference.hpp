#pragma once

#include <optional>
#include <vector>

#include "fgnav/distance_field.hpp"
#include "fgnav/global_planner.hpp"
#include "fgnav/unicycle.hpp"

namespace fgnav {

struct MpcConfig {
  int horizon = 20;   // N: states x_0..x_N, controls u_0..u_{N-1}
  double ts = 0.1;    // integration interval, seconds
  double v_max = 1.0;
  double omega_max = 1.0;
  Eigen::Vector3d state_weights = {1.0, 1.0, 0.1};     // diag of Omega_x
  Eigen::Vector2d control_weights = {0.1, 0.05};       // diag of Omega_u
  Eigen::Vector3d motion_weights = {1e3, 1e3, 1e3};    // diag of Omega_p
  double obstacle_weight = 50.0;                       // Omega_o, scalar
  PotentialParams potential;
  double v_ref = 0.8;  // nominal cruise speed
};

/// Desired states and controls over the horizon, resampled from the global
/// path. `goal_heading_free` zeroes the heading weight of the terminal state
/// prior.
struct ReferenceTrajectory {
  std::vector<Se2Pose> states;        // N + 1
  std::vector<ControlInput> controls;  // N
  bool goal_heading_free = true;
};

/// Projects the current pose onto the path, then resamples N+1 poses ahead at
/// arc-length spacing v_ref * ts. Headings follow the segment tangents; the
/// tail clamps to the goal (reference controls zero there). A goal heading,
/// when given, fixes the terminal reference heading.
ReferenceTrajectory make_reference(const GlobalPath& path,
                                   const Se2Pose& current_pose,
                                   const MpcConfig& config,
                                   std::optional<double> goal_heading = {});

}  // namespace fgnav
