#pragma once

#include <vector>

#include "fgnav/solver.hpp"

namespace fgnav {

struct ConstrainedSolverConfig {
  int inner_gn_iterations = 1;
  int max_outer_iterations = 100;
  double dx_tolerance = 1e-4;    // eps_x
  double eq_tolerance = 1e-4;    // eps_c, on ||C x + c||_inf
  double ineq_tolerance = 1e-4;  // eps_d, on ||max(D x + d, 0)||_inf
  double rho_init = 1.0;
  double rho_growth = 1.0;  // >= 1; 1 keeps the penalty fixed
  double rho_max = 1e4;
  double damping = 0.0;
  bool step_halving = false;
  int max_step_halvings = 5;
};

struct ViolationSample {
  double eq = 0.0;
  double ineq = 0.0;
};

struct ConstrainedReport {
  int iterations = 0;  // outer iterations
  double final_cost = 0.0;  // cost factors only, Lagrangian terms excluded
  double max_eq_violation = 0.0;
  double max_ineq_violation = 0.0;
  bool converged = false;
  std::vector<double> per_iteration_cost;
  std::vector<ViolationSample> violation_trace;
};

/// Method-of-multipliers loop: alternates a primal step (inner GN iterations
/// with constraint contributions folded into the linear system) and a dual
/// step over all constraint blocks. Stops when |dx| < eps_x,
/// ||C x + c||_inf < eps_c and ||max(D x + d, 0)||_inf < eps_d all hold.
/// Multipliers are kept as-is on entry (zero for fresh blocks, warm otherwise)
/// and each block's penalty is reset to rho_init.
ConstrainedReport optimize_constrained(FactorGraph& graph,
                                       const ConstrainedSolverConfig& config);

/// Max-norm constraint violations at the current values.
ViolationSample measure_violations(const FactorGraph& graph);

}  // namespace fgnav
