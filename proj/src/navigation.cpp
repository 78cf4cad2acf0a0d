#include "fgnav/navigation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fgnav/global_planner.hpp"

namespace fgnav {

namespace {

/// Rasterizes endpoints that the static map cannot explain into a local grid
/// around the robot and returns its distance field, or nullopt when every
/// endpoint is accounted for.
std::optional<DistanceField> build_overlay(const Scan& scan,
                                           const Se2Pose& estimate,
                                           const DistanceField& static_field,
                                           const SimWorld& world,
                                           const NavConfig& config) {
  const double span = config.overlay_span;
  std::vector<Eigen::Vector2d> unexplained;
  for (const Eigen::Vector2d& endpoint : scan.endpoints) {
    const Eigen::Vector2d p = estimate.transform(endpoint);
    if (static_field.distance_at(p) >= config.unexplained_distance &&
        (p - estimate.translation()).lpNorm<Eigen::Infinity>() < span) {
      unexplained.push_back(p);
    }
  }
  if (unexplained.empty()) {
    return std::nullopt;
  }
  const double res = world.static_map.resolution;
  GridMap local = GridMap::make(
      static_cast<int>(std::ceil(2.0 * span / res)),
      static_cast<int>(std::ceil(2.0 * span / res)), res,
      {estimate.x - span, estimate.y - span, 0.0});
  const int paint = std::max(
      1, static_cast<int>(std::round(config.overlay_obstacle_radius / res)));
  for (const Eigen::Vector2d& p : unexplained) {
    const auto cell = local.world_to_cell(p);
    if (!cell) {
      continue;
    }
    for (int dy = -paint; dy <= paint; ++dy) {
      for (int dx = -paint; dx <= paint; ++dx) {
        const int cx = (*cell)[0] + dx;
        const int cy = (*cell)[1] + dy;
        if (local.inside(cx, cy) && dx * dx + dy * dy <= paint * paint) {
          local.set(cx, cy, CellState::Occupied);
        }
      }
    }
  }
  return DistanceField::build(local, config.field_d_max,
                              UnknownPolicy::AsFree,
                              FieldProvenance::DynamicOverlay);
}

/// True when the remaining path passes too close to an overlay obstacle.
bool path_blocked(const GlobalPath& path, const Se2Pose& estimate,
                  const DistanceField& overlay, double clearance) {
  bool passed_robot = false;
  for (const Eigen::Vector2d& wp : path.waypoints) {
    if (!passed_robot &&
        (wp - estimate.translation()).norm() < 2.0 * clearance) {
      passed_robot = true;
    }
    if (passed_robot && overlay.distance_at(wp) < clearance) {
      return true;
    }
  }
  return false;
}

MomentStats moments(const std::vector<double>& samples) {
  MomentStats stats;
  if (samples.empty()) {
    return stats;
  }
  double sum = 0.0;
  for (double s : samples) {
    sum += s;
  }
  stats.mean = sum / samples.size();
  double sq = 0.0;
  for (double s : samples) {
    sq += (s - stats.mean) * (s - stats.mean);
  }
  stats.stddev = std::sqrt(sq / samples.size());
  return stats;
}

Metrics metrics_over(const NavRun& run, size_t begin, size_t end) {
  Metrics m;
  m.min_clearance = run.min_clearance;
  if (begin >= end || end > run.ground_truth.size()) {
    return m;
  }
  std::vector<double> trans, rot;
  trans.reserve(end - begin);
  rot.reserve(end - begin);
  for (size_t i = begin; i < end; ++i) {
    if (run.ground_truth[i].t != run.estimated[i].t) {
      throw std::invalid_argument(
          "compute_metrics: trajectories do not share timestamps");
    }
    if (i > begin) {
      m.path_length += distance(run.ground_truth[i].pose,
                                run.ground_truth[i - 1].pose);
    }
    trans.push_back(distance(run.ground_truth[i].pose, run.estimated[i].pose));
    rot.push_back(std::abs(wrap_angle(run.ground_truth[i].pose.theta -
                                      run.estimated[i].pose.theta)));
  }
  m.duration = run.ground_truth[end - 1].t - run.ground_truth[begin].t;
  m.ape_translation = moments(trans);
  m.ape_rotation = moments(rot);
  return m;
}

}  // namespace

NavRun run_navigation(const SimWorld& world, const std::vector<GoalSpec>& goals,
                      const NavConfig& config) {
  NavRun run;
  run.goals = goals;
  std::mt19937_64 rng(world.rng_seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  const DistanceField field_localize = DistanceField::build(
      world.static_map, config.field_d_max, UnknownPolicy::AsFree);
  const DistanceField field_plan = DistanceField::build(
      world.static_map, config.field_d_max, UnknownPolicy::AsOccupied);

  Se2Pose truth = config.start.normalized();
  Se2Pose estimate = truth;
  const double dt = config.mpc.ts;
  double t = 0.0;

  auto track_clearance = [&](const Se2Pose& pose) {
    const double map_clearance =
        field_plan.distance_at(pose.translation());
    const double extra_clearance = obstacle_clearance(world, pose.translation());
    run.min_clearance =
        std::min({run.min_clearance, map_clearance, extra_clearance});
    const auto cell = world.static_map.world_to_cell(pose.translation());
    if (!cell || world.static_map.at((*cell)[0], (*cell)[1]) ==
                     CellState::Occupied ||
        extra_clearance < 0.0) {
      run.safety_violation = true;
    }
  };

  for (size_t goal_index = 0; goal_index < goals.size(); ++goal_index) {
    const GoalSpec& goal = goals[goal_index];
    MpcController controller(config.mpc, config.mpc_solver);
    GlobalPath path;
    bool have_path = false;
    double last_plan_time = -config.replan_period;
    const double goal_start = t;
    bool terminal_recorded = false;

    while (t - goal_start < config.goal_timeout) {
      // One pose sample per time step; the first cycle of the next goal
      // starts at the previous goal's terminal time.
      if (run.ground_truth.empty() || run.ground_truth.back().t < t) {
        run.ground_truth.push_back({t, truth});
        run.estimated.push_back({t, estimate});
        track_clearance(truth);
      }

      // Sense and localize from the dead-reckoned prior.
      const Scan scan = raycast_scan(world, truth, rng);
      OdometryPrior prior;
      prior.predicted_pose = estimate;
      prior.information = config.odometry_information;
      const LocalizeResult loc =
          localize(scan, prior, field_localize, config.localizer,
                   config.localizer_solver);
      estimate = loc.pose;

      const auto overlay =
          build_overlay(scan, estimate, field_plan, world, config);
      const ObstacleField field(field_plan, overlay ? &*overlay : nullptr);

      // Goal check on the estimate.
      const bool position_ok =
          (estimate.translation() - goal.position).norm() <
          config.goal_tolerance;
      const bool heading_ok =
          !goal.heading ||
          std::abs(wrap_angle(estimate.theta - *goal.heading)) <
              config.goal_heading_tolerance;
      if (position_ok && heading_ok) {
        run.events.push_back({NavEvent::Kind::GoalReached,
                              static_cast<int>(goal_index), t});
        terminal_recorded = true;
        break;
      }

      // Global replan when due or when the overlay blocks the current path.
      const bool due = t - last_plan_time >= config.replan_period;
      const bool blocked =
          have_path && overlay &&
          path_blocked(path, estimate, *overlay, config.inflation_radius);
      if (!have_path || due || blocked) {
        try {
          path = plan_global(world.static_map, estimate.translation(),
                             goal.position, config.inflation_radius);
          have_path = true;
          last_plan_time = t;
          if (blocked) {
            controller.reset();
          }
        } catch (const PlanningError&) {
          if (!have_path) {
            break;  // unreachable goal, abort below
          }
        }
      }

      const MpcStepResult mpc = controller.step(estimate, path, field,
                                                goal.heading);
      if (mpc.converged) {
        ++run.mpc_converged_solves;
        if (mpc.clamp_fired) {
          ++run.mpc_clamp_fired;
        }
        for (const ControlInput& u : mpc.controls) {
          run.all_horizon_controls.push_back(u);
        }
      } else {
        ++run.mpc_failed_solves;
      }

      // Plant update: commanded control plus actuation noise; the odometry
      // dead-reckons with the commanded control only.
      const double noise_v = world.odom_noise.sigma_v * gauss(rng);
      const double noise_omega = world.odom_noise.sigma_omega * gauss(rng);
      run.controls.push_back({t, mpc.command, noise_v, noise_omega});
      const ControlInput executed{mpc.command.v + noise_v,
                                  mpc.command.omega + noise_omega};
      truth = unicycle_step(truth, executed, dt);
      estimate = unicycle_step(estimate, mpc.command, dt);
      t += dt;
    }

    if (!terminal_recorded) {
      run.events.push_back({NavEvent::Kind::GoalAborted,
                            static_cast<int>(goal_index), t});
    }
  }
  return run;
}

Metrics compute_metrics(const NavRun& run) {
  if (run.ground_truth.empty() || run.estimated.empty()) {
    throw std::invalid_argument("compute_metrics: empty trajectories");
  }
  if (run.ground_truth.size() != run.estimated.size()) {
    throw std::invalid_argument(
        "compute_metrics: trajectories differ in length");
  }
  return metrics_over(run, 0, run.ground_truth.size());
}

std::vector<Metrics> compute_segment_metrics(const NavRun& run) {
  if (run.ground_truth.size() != run.estimated.size()) {
    throw std::invalid_argument(
        "compute_metrics: trajectories differ in length");
  }
  std::vector<Metrics> out;
  size_t begin = 0;
  for (const NavEvent& event : run.events) {
    // Segment ends at the first sample past the event time.
    size_t end = begin;
    while (end < run.ground_truth.size() &&
           run.ground_truth[end].t <= event.t) {
      ++end;
    }
    out.push_back(metrics_over(run, begin, end));
    begin = end;
  }
  return out;
}

}  // namespace fgnav
