#include "fgnav/constrained_solver.hpp"

#include <algorithm>
#include <cmath>

namespace fgnav {

ViolationSample measure_violations(const FactorGraph& graph) {
  ViolationSample sample;
  for (const ConstraintBlock& block : graph.constraints()) {
    const auto r = block.residual(graph.values_of(block.variables));
    if (!r) {
      continue;
    }
    if (block.kind == ConstraintKind::Equality) {
      sample.eq = std::max(sample.eq, r->cwiseAbs().maxCoeff());
    } else {
      sample.ineq = std::max(sample.ineq, r->cwiseMax(0.0).maxCoeff());
    }
  }
  return sample;
}

ConstrainedReport optimize_constrained(FactorGraph& graph,
                                       const ConstrainedSolverConfig& config) {
  for (ConstraintBlock& block : graph.constraints()) {
    block.penalty = config.rho_init;
  }

  SolverConfig inner;
  inner.dx_tolerance = config.dx_tolerance;
  inner.damping = config.damping;
  inner.step_halving = config.step_halving;
  inner.max_step_halvings = config.max_step_halvings;

  ConstrainedReport report;
  double previous_violation = std::numeric_limits<double>::infinity();

  for (int outer = 0; outer < config.max_outer_iterations; ++outer) {
    detail::GnStepOutcome outcome;
    for (int j = 0; j < config.inner_gn_iterations; ++j) {
      outcome = detail::gn_step(graph, inner, true);
      if (!outcome.applied || outcome.dx_norm < config.dx_tolerance) {
        break;
      }
    }

    for (ConstraintBlock& block : graph.constraints()) {
      block.multiplier = dual_update(block, graph.values_of(block.variables));
    }

    const ViolationSample violations = measure_violations(graph);
    report.iterations = outer + 1;
    report.per_iteration_cost.push_back(total_cost(graph));
    report.violation_trace.push_back(violations);

    if (outcome.converged(config.dx_tolerance) &&
        violations.eq < config.eq_tolerance &&
        violations.ineq < config.ineq_tolerance) {
      report.converged = true;
      break;
    }
    if (!outcome.applied) {
      break;  // step rejected even after halving; no further progress
    }

    // Optional penalty growth when the violation stops shrinking.
    if (config.rho_growth > 1.0) {
      const double violation = std::max(violations.eq, violations.ineq);
      if (violation > 0.5 * previous_violation) {
        for (ConstraintBlock& block : graph.constraints()) {
          block.penalty = std::min(block.penalty * config.rho_growth,
                                   config.rho_max);
        }
      }
      previous_violation = violation;
    }
  }

  const ViolationSample final_violations = measure_violations(graph);
  report.max_eq_violation = final_violations.eq;
  report.max_ineq_violation = final_violations.ineq;
  report.final_cost = total_cost(graph);
  return report;
}

}  // namespace fgnav
