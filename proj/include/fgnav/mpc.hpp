#pragma once

#include <optional>
#include <vector>

#include "fgnav/constrained_solver.hpp"
#include "fgnav/distance_field.hpp"
#include "fgnav/factor_graph.hpp"
#include "fgnav/reference.hpp"

namespace fgnav {

/// Variable ids of the interleaved ordering x0, u0, x1, u1, ..., xN.
inline VariableId mpc_state_id(int n) { return 2 * n; }
inline VariableId mpc_control_id(int n) { return 2 * n + 1; }

/// Builds the receding-horizon graph: interleaved variables with x0 fixed at
/// the current estimate, N+1 state priors, N control priors, N motion-model
/// soft constraints, N obstacle factors on x1..xN, and one 4-row inequality
/// block per control implementing |v| <= v_max, |omega| <= omega_max.
FactorGraph build_mpc_graph(const Se2Pose& x0, const ReferenceTrajectory& ref,
                            const ObstacleField& field, const MpcConfig& config);

struct MpcStepResult {
  ControlInput command;              // first control, hard-clamped to limits
  std::vector<Se2Pose> predicted;    // optimized states x0..xN
  std::vector<ControlInput> controls;  // optimized controls u0..u_{N-1}
  ConstrainedReport report;
  bool converged = false;
  bool clamp_fired = false;  // limit exceeded by more than ineq_tolerance
  bool safe_stop = false;    // non-convergence, command forced to zero
};

/// Receding-horizon controller. Each step rebuilds the graph from the current
/// estimate, warm-starts states and controls from the previous solution
/// shifted by one (multipliers restart at zero), solves the constrained
/// problem and returns the first control.
class MpcController {
 public:
  MpcController(MpcConfig config, ConstrainedSolverConfig solver_config)
      : config_(std::move(config)), solver_config_(std::move(solver_config)) {}

  MpcStepResult step(const Se2Pose& x0, const GlobalPath& path,
                     const ObstacleField& field,
                     std::optional<double> goal_heading = {});

  /// Drops the warm start (e.g. after a new global plan).
  void reset() { has_previous_ = false; }

  const MpcConfig& config() const { return config_; }

 private:
  MpcConfig config_;
  ConstrainedSolverConfig solver_config_;
  bool has_previous_ = false;
  std::vector<Se2Pose> previous_states_;
  std::vector<ControlInput> previous_controls_;
};

/// Single solve without warm start; `initial guess` is the reference itself.
MpcStepResult mpc_step(const Se2Pose& x0, const GlobalPath& path,
                       const ObstacleField& field, const MpcConfig& config,
                       const ConstrainedSolverConfig& solver_config,
                       std::optional<double> goal_heading = {});

}  // namespace fgnav
