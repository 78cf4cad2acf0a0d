#include "fgnav/mpc.hpp"

#include <algorithm>
#include <cmath>

#include "fgnav/unicycle.hpp"

namespace fgnav {

namespace {

CostFactor make_state_prior(VariableId id, const Se2Pose& ref,
                            const Eigen::Vector3d& weights) {
  CostFactor f;
  f.variables = {id};
  f.residual_dim = 3;
  f.information = weights.asDiagonal();
  f.error = [ref](const ValueList& values) -> std::optional<Eigen::VectorXd> {
    Eigen::Vector3d e;
    e << values[0][0] - ref.x, values[0][1] - ref.y,
        wrap_angle(values[0][2] - ref.theta);
    return e;
  };
  f.jacobian = [](const ValueList&) {
    return std::vector<Eigen::MatrixXd>{Eigen::Matrix3d::Identity()};
  };
  return f;
}

CostFactor make_control_prior(VariableId id, const ControlInput& ref,
                              const Eigen::Vector2d& weights) {
  CostFactor f;
  f.variables = {id};
  f.residual_dim = 2;
  f.information = weights.asDiagonal();
  f.error = [ref](const ValueList& values) -> std::optional<Eigen::VectorXd> {
    Eigen::Vector2d e;
    e << values[0][0] - ref.v, values[0][1] - ref.omega;
    return e;
  };
  f.jacobian = [](const ValueList&) {
    return std::vector<Eigen::MatrixXd>{Eigen::Matrix2d::Identity()};
  };
  return f;
}

CostFactor make_motion_factor(VariableId state, VariableId control,
                              VariableId next_state, double dt,
                              const Eigen::Vector3d& weights) {
  CostFactor f;
  f.variables = {state, control, next_state};
  f.residual_dim = 3;
  f.information = weights.asDiagonal();
  f.error = [dt](const ValueList& values) -> std::optional<Eigen::VectorXd> {
    const Se2Pose x{values[0][0], values[0][1], values[0][2]};
    const ControlInput u{values[1][0], values[1][1]};
    const Se2Pose pred = unicycle_step(x, u, dt);
    Eigen::Vector3d e;
    e << values[2][0] - pred.x, values[2][1] - pred.y,
        wrap_angle(values[2][2] - pred.theta);
    return e;
  };
  f.jacobian = [dt](const ValueList& values) {
    const Se2Pose x{values[0][0], values[0][1], values[0][2]};
    const ControlInput u{values[1][0], values[1][1]};
    Eigen::Matrix3d df_dx;
    Eigen::Matrix<double, 3, 2> df_du;
    unicycle_jacobians(x, u, dt, df_dx, df_du);
    return std::vector<Eigen::MatrixXd>{-df_dx, -df_du,
                                        Eigen::Matrix3d::Identity()};
  };
  return f;
}

CostFactor make_obstacle_factor(VariableId id, const ObstacleField& field,
                                const PotentialParams& params,
                                const Eigen::Vector2d& heading_hint,
                                double weight) {
  CostFactor f;
  f.variables = {id};
  f.residual_dim = 1;
  f.information = Eigen::MatrixXd::Constant(1, 1, weight);
  const ObstacleField* fp = &field;
  f.error = [fp, params](const ValueList& values)
      -> std::optional<Eigen::VectorXd> {
    const Eigen::Vector2d p(values[0][0], values[0][1]);
    return Eigen::VectorXd::Constant(1, potential(*fp, params, p));
  };
  // The vortex-deflected gradient steers the step; the error stays g(x).
  f.jacobian = [fp, params, heading_hint](const ValueList& values) {
    const Eigen::Vector2d p(values[0][0], values[0][1]);
    const Eigen::Vector2d grad =
        potential_gradient_with_vortex(*fp, params, p, heading_hint);
    Eigen::MatrixXd jac(1, 3);
    jac << grad.x(), grad.y(), 0.0;
    return std::vector<Eigen::MatrixXd>{jac};
  };
  return f;
}

ConstraintBlock make_control_limits(VariableId id, double v_max,
                                    double omega_max) {
  ConstraintBlock block;
  block.variables = {id};
  block.residual_dim = 4;
  block.kind = ConstraintKind::Inequality;
  block.multiplier = Eigen::VectorXd::Zero(4);
  block.residual = [v_max, omega_max](const ValueList& values)
      -> std::optional<Eigen::VectorXd> {
    const double v = values[0][0];
    const double w = values[0][1];
    Eigen::VectorXd r(4);
    r << v - v_max, -v - v_max, w - omega_max, -w - omega_max;
    return r;
  };
  block.jacobian = [](const ValueList&) {
    Eigen::MatrixXd jac(4, 2);
    jac << 1, 0, -1, 0, 0, 1, 0, -1;
    return std::vector<Eigen::MatrixXd>{jac};
  };
  return block;
}

}  // namespace

FactorGraph build_mpc_graph(const Se2Pose& x0, const ReferenceTrajectory& ref,
                            const ObstacleField& field,
                            const MpcConfig& config) {
  const int n = config.horizon;
  if (static_cast<int>(ref.states.size()) != n + 1 ||
      static_cast<int>(ref.controls.size()) != n) {
    throw std::invalid_argument(
        "build_mpc_graph: reference lengths do not match the horizon");
  }

  FactorGraph graph;
  graph.add_se2_variable(x0.normalized(), /*fixed=*/true);
  for (int k = 0; k < n; ++k) {
    graph.add_vector_variable(ref.controls[k].to_vector());
    graph.add_se2_variable(ref.states[k + 1]);
  }

  for (int k = 0; k <= n; ++k) {
    Eigen::Vector3d weights = config.state_weights;
    if (k == n && ref.goal_heading_free) {
      weights.z() = 0.0;
    }
    graph.add_factor(make_state_prior(mpc_state_id(k), ref.states[k], weights));
  }
  for (int k = 0; k < n; ++k) {
    graph.add_factor(make_control_prior(mpc_control_id(k), ref.controls[k],
                                        config.control_weights));
  }
  for (int k = 0; k < n; ++k) {
    graph.add_factor(make_motion_factor(mpc_state_id(k), mpc_control_id(k),
                                        mpc_state_id(k + 1), config.ts,
                                        config.motion_weights));
  }
  for (int k = 1; k <= n; ++k) {
    const double heading = ref.states[k].theta;
    graph.add_factor(make_obstacle_factor(
        mpc_state_id(k), field, config.potential,
        {std::cos(heading), std::sin(heading)}, config.obstacle_weight));
  }
  for (int k = 0; k < n; ++k) {
    graph.add_constraint(
        make_control_limits(mpc_control_id(k), config.v_max, config.omega_max));
  }
  return graph;
}

namespace {

MpcStepResult solve_mpc(FactorGraph& graph, const MpcConfig& config,
                        const ConstrainedSolverConfig& solver_config) {
  MpcStepResult result;
  result.report = optimize_constrained(graph, solver_config);
  result.converged = result.report.converged;

  result.predicted.reserve(config.horizon + 1);
  for (int k = 0; k <= config.horizon; ++k) {
    result.predicted.push_back(graph.variable(mpc_state_id(k)).pose());
  }
  result.controls.reserve(config.horizon);
  for (int k = 0; k < config.horizon; ++k) {
    const auto& u = graph.variable(mpc_control_id(k)).value;
    result.controls.push_back({u[0], u[1]});
  }

  if (!result.converged) {
    result.safe_stop = true;
    result.command = {0.0, 0.0};
    return result;
  }

  const ControlInput raw = result.controls.front();
  result.command.v = std::clamp(raw.v, -config.v_max, config.v_max);
  result.command.omega =
      std::clamp(raw.omega, -config.omega_max, config.omega_max);
  const double overshoot =
      std::max(std::abs(raw.v) - config.v_max,
               std::abs(raw.omega) - config.omega_max);
  result.clamp_fired = overshoot > solver_config.ineq_tolerance;
  return result;
}

}  // namespace

MpcStepResult MpcController::step(const Se2Pose& x0, const GlobalPath& path,
                                  const ObstacleField& field,
                                  std::optional<double> goal_heading) {
  const ReferenceTrajectory ref =
      make_reference(path, x0, config_, goal_heading);
  FactorGraph graph = build_mpc_graph(x0, ref, field, config_);

  if (has_previous_) {
    // Previous horizon shifted by one step, last entries duplicated.
    for (int k = 1; k <= config_.horizon; ++k) {
      const int src = std::min(k + 1, config_.horizon);
      graph.variable(mpc_state_id(k)) = Variable::se2(previous_states_[src]);
    }
    for (int k = 0; k < config_.horizon; ++k) {
      const int src = std::min(k + 1, config_.horizon - 1);
      graph.variable(mpc_control_id(k)) =
          Variable::vector(previous_controls_[src].to_vector());
    }
  }

  MpcStepResult result = solve_mpc(graph, config_, solver_config_);
  if (result.converged) {
    previous_states_ = result.predicted;
    previous_controls_ = result.controls;
    has_previous_ = true;
  } else {
    has_previous_ = false;
  }
  return result;
}

MpcStepResult mpc_step(const Se2Pose& x0, const GlobalPath& path,
                       const ObstacleField& field, const MpcConfig& config,
                       const ConstrainedSolverConfig& solver_config,
                       std::optional<double> goal_heading) {
  const ReferenceTrajectory ref = make_reference(path, x0, config, goal_heading);
  FactorGraph graph = build_mpc_graph(x0, ref, field, config);
  return solve_mpc(graph, config, solver_config);
}

}  // namespace fgnav
