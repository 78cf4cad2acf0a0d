#pragma once

#include <Eigen/Core>
#include <vector>

#include "fgnav/distance_field.hpp"
#include "fgnav/factor_graph.hpp"
#include "fgnav/solver.hpp"

namespace fgnav {

/// One lidar sweep as endpoints in the robot frame.
struct Scan {
  std::vector<Eigen::Vector2d> endpoints;
  double max_range = 10.0;
  double timestamp = 0.0;
};

struct OdometryPrior {
  Se2Pose predicted_pose;
  Eigen::Matrix3d information =
      Eigen::Vector3d(25.0, 25.0, 100.0).asDiagonal();
};

struct LocalizerConfig {
  double low_distance_scale = 0.25;   // cost scale where d < map resolution
  double discard_distance = 0.3;      // endpoints with d beyond this drop out
  double max_endpoint_range = 10.0;   // endpoints beyond this never enter
  double map_resolution_threshold = 0.05;  // equals the map resolution
};

struct LocalizeResult {
  Se2Pose pose;
  OptimizeReport report;
  int retained_endpoints = 0;   // active endpoint factors at the final pose
  bool prior_only = false;      // no endpoint retained when the graph was built
  bool fell_back_to_prior = false;  // singular system, pose = prior mean
};

/// One pose variable at the odometry prediction, a prior factor, and one
/// scalar distance factor per retained endpoint. Endpoints beyond
/// max_endpoint_range or whose distance at the build pose exceeds
/// discard_distance contribute no factor; endpoints under the map resolution
/// get their cost scaled down by low_distance_scale. Requires a field built
/// from the static map (never the dynamic overlay).
FactorGraph build_localization_graph(const Scan& scan,
                                     const OdometryPrior& prior,
                                     const DistanceField& field,
                                     const LocalizerConfig& config);

/// Same, with the retention decisions evaluated at an explicit pose (used by
/// localize to refresh the filtering each iteration).
FactorGraph build_localization_graph(const Scan& scan,
                                     const Se2Pose& linearization_pose,
                                     const OdometryPrior& prior,
                                     const DistanceField& field,
                                     const LocalizerConfig& config);

/// Registers the scan against the distance field starting from the odometry
/// prediction. Falls back to the prior mean when the system is singular
/// (e.g. a featureless corridor).
LocalizeResult localize(const Scan& scan, const OdometryPrior& prior,
                        const DistanceField& field,
                        const LocalizerConfig& config,
                        const SolverConfig& solver_config);

/// Active endpoint factors of a localization graph at its current values.
int count_retained_endpoints(const FactorGraph& graph);

}  // namespace fgnav
