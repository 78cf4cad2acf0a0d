#include "fgnav/localizer.hpp"

#include <cmath>
#include <stdexcept>

namespace fgnav {

namespace {

CostFactor make_pose_prior(VariableId id, const Se2Pose& mean,
                           const Eigen::Matrix3d& information) {
  CostFactor f;
  f.variables = {id};
  f.residual_dim = 3;
  f.information = information;
  f.error = [mean](const ValueList& values) -> std::optional<Eigen::VectorXd> {
    Eigen::Vector3d e;
    e << values[0][0] - mean.x, values[0][1] - mean.y,
        wrap_angle(values[0][2] - mean.theta);
    return e;
  };
  f.jacobian = [](const ValueList&) {
    return std::vector<Eigen::MatrixXd>{Eigen::Matrix3d::Identity()};
  };
  return f;
}

/// Scalar distance residual e = scale * d(X z). The retention decision and
/// the low-distance scale are frozen at graph construction; localize
/// re-evaluates them by rebuilding the graph at every iteration.
CostFactor make_endpoint_factor(VariableId id, const Eigen::Vector2d& endpoint,
                                const DistanceField& field, double scale,
                                double information) {
  CostFactor f;
  f.variables = {id};
  f.residual_dim = 1;
  f.information = Eigen::MatrixXd::Constant(1, 1, information);
  const DistanceField* df = &field;
  f.error = [endpoint, df,
             scale](const ValueList& values) -> std::optional<Eigen::VectorXd> {
    const Se2Pose pose{values[0][0], values[0][1], values[0][2]};
    return Eigen::VectorXd::Constant(
        1, scale * df->distance_at(pose.transform(endpoint)));
  };
  f.jacobian = [endpoint, df, scale](const ValueList& values) {
    const Se2Pose pose{values[0][0], values[0][1], values[0][2]};
    const Eigen::Vector2d p = pose.transform(endpoint);
    const Eigen::Vector2d grad = df->distance_gradient(p);
    const double c = std::cos(pose.theta);
    const double s = std::sin(pose.theta);
    // d/dtheta of R(theta) * z
    const Eigen::Vector2d dp_dtheta(-s * endpoint.x() - c * endpoint.y(),
                                    c * endpoint.x() - s * endpoint.y());
    Eigen::MatrixXd jac(1, 3);
    jac << scale * grad.x(), scale * grad.y(), scale * grad.dot(dp_dtheta);
    return std::vector<Eigen::MatrixXd>{jac};
  };
  return f;
}

}  // namespace

FactorGraph build_localization_graph(const Scan& scan,
                                     const OdometryPrior& prior,
                                     const DistanceField& field,
                                     const LocalizerConfig& config) {
  return build_localization_graph(scan, prior.predicted_pose.normalized(),
                                  prior, field, config);
}

FactorGraph build_localization_graph(const Scan& scan,
                                     const Se2Pose& linearization_pose,
                                     const OdometryPrior& prior,
                                     const DistanceField& field,
                                     const LocalizerConfig& config) {
  if (field.provenance() != FieldProvenance::StaticMap) {
    throw std::invalid_argument(
        "localization requires a distance field built from the static map");
  }
  FactorGraph graph;
  const Se2Pose at = linearization_pose.normalized();
  const VariableId pose_id = graph.add_se2_variable(at);
  graph.add_factor(make_pose_prior(pose_id, prior.predicted_pose.normalized(),
                                   prior.information));
  const double sigma = config.map_resolution_threshold;
  const double information = 1.0 / (sigma * sigma);
  for (const Eigen::Vector2d& endpoint : scan.endpoints) {
    if (endpoint.norm() > config.max_endpoint_range) {
      continue;
    }
    const double d = field.distance_at(at.transform(endpoint));
    if (d >= config.discard_distance) {
      continue;  // unexpected obstacle or off-map at the current estimate
    }
    const double scale = d < config.map_resolution_threshold
                             ? std::sqrt(config.low_distance_scale)
                             : 1.0;
    graph.add_factor(
        make_endpoint_factor(pose_id, endpoint, field, scale, information));
  }
  return graph;
}

int count_retained_endpoints(const FactorGraph& graph) {
  return graph.num_factors() - 1;  // everything but the pose prior
}

LocalizeResult localize(const Scan& scan, const OdometryPrior& prior,
                        const DistanceField& field,
                        const LocalizerConfig& config,
                        const SolverConfig& solver_config) {
  LocalizeResult result;
  Se2Pose estimate = prior.predicted_pose.normalized();
  result.pose = estimate;
  result.prior_only =
      count_retained_endpoints(build_localization_graph(
          scan, estimate, prior, field, config)) == 0;

  SolverConfig single_step = solver_config;
  single_step.max_iterations = 1;

  try {
    for (int it = 0; it < solver_config.max_iterations; ++it) {
      // Endpoint filtering is re-evaluated here, once per iteration.
      FactorGraph graph =
          build_localization_graph(scan, estimate, prior, field, config);
      const auto outcome = detail::gn_step(graph, single_step, false);
      estimate = graph.variable(0).pose();
      result.report.iterations = it + 1;
      result.report.per_iteration_cost.push_back(total_cost(graph));
      if (outcome.converged(solver_config.dx_tolerance)) {
        result.report.converged = true;
        break;
      }
      if (!outcome.applied) {
        break;
      }
    }
    result.pose = estimate;
  } catch (const SingularSystemError&) {
    result.fell_back_to_prior = true;
    result.pose = prior.predicted_pose.normalized();
  }

  const FactorGraph final_graph =
      build_localization_graph(scan, result.pose, prior, field, config);
  result.retained_endpoints = count_retained_endpoints(final_graph);
  result.report.final_cost = total_cost(final_graph);
  return result;
}

}  // namespace fgnav
