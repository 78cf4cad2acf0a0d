#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fgnav/mpc.hpp"
#include "fgnav/sim_world.hpp"

namespace fgnav {

struct GoalSpec {
  Eigen::Vector2d position;
  std::optional<double> heading;
};

struct NavConfig {
  Se2Pose start;
  MpcConfig mpc;
  ConstrainedSolverConfig mpc_solver;
  LocalizerConfig localizer;
  SolverConfig localizer_solver;
  Eigen::Matrix3d odometry_information =
      Eigen::Vector3d(25.0, 25.0, 100.0).asDiagonal();
  double goal_tolerance = 0.2;          // meters
  double goal_heading_tolerance = 0.15;  // radians, only when the goal has one
  double goal_timeout = 60.0;           // seconds of sim time per goal
  double replan_period = 2.0;           // seconds between global replans
  double inflation_radius = 0.25;       // meters
  double field_d_max = 2.0;             // distance-field clamp
  double unexplained_distance = 0.3;    // endpoint off the static map beyond this
  double overlay_obstacle_radius = 0.10;  // rasterization radius per endpoint
  double overlay_span = 4.0;            // half-extent of the local overlay grid

  // The vortex-deflected obstacle Jacobian is intentionally not the cost
  // gradient, so the MPC solver runs damped without step halving; the
  // localizer cost is a plain least squares and keeps the halving safeguard.
  NavConfig() {
    mpc_solver.max_outer_iterations = 250;
    mpc_solver.damping = 0.1;
    localizer_solver.max_iterations = 40;
    localizer_solver.step_halving = true;
  }
};

struct TimedPose {
  double t = 0.0;
  Se2Pose pose;
};

struct TimedControl {
  double t = 0.0;
  ControlInput commanded;
  double noise_v = 0.0;      // actuation noise applied during this step
  double noise_omega = 0.0;
};

struct NavEvent {
  enum class Kind { GoalReached, GoalAborted };
  Kind kind = Kind::GoalReached;
  int goal_index = 0;
  double t = 0.0;
};

/// One simulated navigation episode.
struct NavRun {
  std::vector<GoalSpec> goals;
  std::vector<TimedPose> ground_truth;
  std::vector<TimedPose> estimated;
  std::vector<TimedControl> controls;
  std::vector<NavEvent> events;
  double min_clearance = std::numeric_limits<double>::infinity();
  bool safety_violation = false;  // ground truth entered an occupied cell
  int mpc_converged_solves = 0;
  int mpc_failed_solves = 0;
  int mpc_clamp_fired = 0;
  std::vector<ControlInput> all_horizon_controls;  // from converged solves
};

/// Closed-loop localize -> plan -> control episode at period mpc.ts.
/// Per cycle: record poses, sense, localize from the dead-reckoned prior,
/// rebuild the dynamic overlay, replan when due or blocked, run the MPC and
/// integrate the plant with the commanded control plus actuation noise.
/// Aborted goals are recorded and the run continues with the next goal.
NavRun run_navigation(const SimWorld& world, const std::vector<GoalSpec>& goals,
                      const NavConfig& config);

struct MomentStats {
  double mean = 0.0;
  double stddev = 0.0;
};

struct Metrics {
  double path_length = 0.0;  // meters, over ground truth
  double duration = 0.0;     // seconds
  MomentStats ape_translation;  // meters
  MomentStats ape_rotation;     // radians, absolute wrapped
  double min_clearance = 0.0;
};

/// Whole-run metrics; throws on mismatched trajectory timestamps.
Metrics compute_metrics(const NavRun& run);

/// Metrics per goal segment, split at the recorded events.
std::vector<Metrics> compute_segment_metrics(const NavRun& run);

}  // namespace fgnav
