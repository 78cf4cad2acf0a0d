#include "fgnav/solver.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <cmath>

#include "fgnav/constraints.hpp"

namespace fgnav {

BlockLayout BlockLayout::build(const FactorGraph& graph) {
  BlockLayout layout;
  layout.offset.resize(graph.num_variables());
  layout.dim.resize(graph.num_variables());
  int offset = 0;
  for (VariableId id = 0; id < graph.num_variables(); ++id) {
    const Variable& v = graph.variable(id);
    layout.dim[id] = v.dim();
    if (v.fixed) {
      layout.offset[id] = -1;
    } else {
      layout.offset[id] = offset;
      offset += v.dim();
    }
  }
  layout.total_dim = offset;
  return layout;
}

namespace {

void scatter_term(const BlockLayout& layout,
                  const std::vector<VariableId>& ids,
                  const std::vector<int>& dims, const Eigen::MatrixXd& h,
                  const Eigen::VectorXd& g,
                  std::vector<Eigen::Triplet<double>>& triplets,
                  Eigen::VectorXd& b) {
  std::vector<int> local_offset(ids.size());
  int acc = 0;
  for (size_t i = 0; i < ids.size(); ++i) {
    local_offset[i] = acc;
    acc += dims[i];
  }
  for (size_t i = 0; i < ids.size(); ++i) {
    const int row0 = layout.offset[ids[i]];
    if (row0 < 0) {
      continue;
    }
    b.segment(row0, dims[i]) += g.segment(local_offset[i], dims[i]);
    for (size_t j = 0; j < ids.size(); ++j) {
      const int col0 = layout.offset[ids[j]];
      if (col0 < 0) {
        continue;
      }
      for (int r = 0; r < dims[i]; ++r) {
        for (int c = 0; c < dims[j]; ++c) {
          const double value = h(local_offset[i] + r, local_offset[j] + c);
          if (value != 0.0) {
            triplets.emplace_back(row0 + r, col0 + c, value);
          }
        }
      }
    }
  }
}

}  // namespace

QuadraticSystem build_system(const FactorGraph& graph, double damping,
                             const std::vector<SystemTerm>* extra_terms) {
  QuadraticSystem system;
  system.layout = BlockLayout::build(graph);
  const int n = system.layout.total_dim;
  system.gradient = Eigen::VectorXd::Zero(n);
  std::vector<Eigen::Triplet<double>> triplets;

  for (const CostFactor& factor : graph.factors()) {
    const ValueList values = graph.values_of(factor.variables);
    const Linearization lin = linearize(factor, values);
    if (!lin.active) {
      continue;
    }
    const Eigen::MatrixXd omega =
        factor.information.size() > 0
            ? factor.information
            : Eigen::MatrixXd::Identity(factor.residual_dim,
                                        factor.residual_dim);
    system.constant += lin.residual.dot(omega * lin.residual);

    std::vector<int> dims(values.size());
    int joint = 0;
    for (size_t i = 0; i < values.size(); ++i) {
      dims[i] = static_cast<int>(values[i].size());
      joint += dims[i];
    }
    Eigen::MatrixXd joint_jac(factor.residual_dim, joint);
    int col = 0;
    for (size_t i = 0; i < lin.jacobians.size(); ++i) {
      joint_jac.middleCols(col, dims[i]) = lin.jacobians[i];
      col += dims[i];
    }
    const Eigen::MatrixXd weighted = joint_jac.transpose() * omega;
    scatter_term(system.layout, factor.variables, dims,
                 weighted * joint_jac, weighted * lin.residual, triplets,
                 system.gradient);
  }

  if (extra_terms != nullptr) {
    for (const SystemTerm& term : *extra_terms) {
      scatter_term(system.layout, term.variables, term.dims, term.hessian,
                   term.gradient, triplets, system.gradient);
    }
  }

  if (damping > 0.0) {
    for (int i = 0; i < n; ++i) {
      triplets.emplace_back(i, i, damping);
    }
  }

  system.hessian.resize(n, n);
  system.hessian.setFromTriplets(triplets.begin(), triplets.end());
  return system;
}

namespace {

/// Identifies the first variable block whose leading principal submatrix
/// fails a dense Cholesky. Diagnostic path only.
VariableId find_failing_block(const QuadraticSystem& system) {
  const Eigen::MatrixXd dense(system.hessian);
  for (size_t id = 0; id < system.layout.offset.size(); ++id) {
    const int off = system.layout.offset[id];
    if (off < 0) {
      continue;
    }
    const int upto = off + system.layout.dim[id];
    Eigen::LLT<Eigen::MatrixXd> llt(dense.topLeftCorner(upto, upto));
    if (llt.info() != Eigen::Success) {
      return static_cast<VariableId>(id);
    }
  }
  return static_cast<VariableId>(system.layout.offset.size()) - 1;
}

}  // namespace

Eigen::VectorXd solve_linear(const QuadraticSystem& system) {
  const int n = system.layout.total_dim;
  if (n == 0) {
    return Eigen::VectorXd();
  }

  Eigen::VectorXd dx;
  bool ok = true;
  if (n <= 16) {
    // The sparse factorization's symbolic analysis dominates tiny systems.
    const Eigen::LLT<Eigen::MatrixXd> llt(Eigen::MatrixXd(system.hessian));
    ok = llt.info() == Eigen::Success;
    if (ok) {
      dx = llt.solve(-system.gradient);
    }
  } else {
    Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt(system.hessian);
    ok = llt.info() == Eigen::Success;
    if (ok) {
      dx = llt.solve(-system.gradient);
    }
  }
  if (!ok || !dx.allFinite()) {
    const VariableId block = find_failing_block(system);
    throw SingularSystemError(
        block, "linear system not positive definite; first failing block is "
               "variable " +
                   std::to_string(block));
  }
  return dx;
}

void apply_step(FactorGraph& graph, const BlockLayout& layout,
                const Eigen::VectorXd& dx) {
  for (VariableId id = 0; id < graph.num_variables(); ++id) {
    const int off = layout.offset[id];
    if (off < 0) {
      continue;
    }
    Variable& v = graph.variable(id);
    v = box_plus(v, dx.segment(off, layout.dim[id]));
  }
}

double total_cost(const FactorGraph& graph) {
  double cost = 0.0;
  for (const CostFactor& factor : graph.factors()) {
    const auto residual = factor.error(graph.values_of(factor.variables));
    if (!residual) {
      continue;
    }
    if (factor.information.size() > 0) {
      cost += residual->dot(factor.information * *residual);
    } else {
      cost += residual->squaredNorm();
    }
  }
  return cost;
}

namespace detail {

double acceptance_objective(const FactorGraph& graph, bool with_constraints) {
  double objective = total_cost(graph);
  if (with_constraints) {
    for (const ConstraintBlock& block : graph.constraints()) {
      objective += lagrangian_terms(block, graph.values_of(block.variables));
    }
  }
  return objective;
}

GnStepOutcome gn_step(FactorGraph& graph, const SolverConfig& config,
                      bool with_constraints) {
  std::vector<SystemTerm> terms;
  if (with_constraints) {
    terms.reserve(graph.constraints().size());
    for (const ConstraintBlock& block : graph.constraints()) {
      terms.push_back(
          constraint_contribution(block, graph.values_of(block.variables)));
    }
  }
  const QuadraticSystem system =
      build_system(graph, config.damping, with_constraints ? &terms : nullptr);
  const Eigen::VectorXd full_dx = solve_linear(system);

  GnStepOutcome outcome;
  outcome.full_dx_norm = full_dx.norm();
  outcome.smallest_attempted_norm = outcome.full_dx_norm;

  if (!config.step_halving) {
    apply_step(graph, system.layout, full_dx);
    outcome.dx_norm = outcome.full_dx_norm;
    outcome.applied = true;
    return outcome;
  }

  const double reference = acceptance_objective(graph, with_constraints);
  const std::vector<Variable> snapshot = graph.variables();
  Eigen::VectorXd dx = full_dx;
  for (int attempt = 0; attempt <= config.max_step_halvings; ++attempt) {
    apply_step(graph, system.layout, dx);
    outcome.smallest_attempted_norm = dx.norm();
    if (acceptance_objective(graph, with_constraints) <= reference) {
      outcome.dx_norm = dx.norm();
      outcome.applied = true;
      outcome.halvings = attempt;
      return outcome;
    }
    graph.variables() = snapshot;
    dx *= 0.5;
  }
  outcome.halvings = config.max_step_halvings;
  return outcome;  // rejected; state unchanged
}

}  // namespace detail

OptimizeReport optimize(FactorGraph& graph, const SolverConfig& config) {
  OptimizeReport report;
  for (int it = 0; it < config.max_iterations; ++it) {
    const auto outcome = detail::gn_step(graph, config, false);
    report.iterations = it + 1;
    report.per_iteration_cost.push_back(total_cost(graph));
    if (outcome.converged(config.dx_tolerance)) {
      report.converged = true;
      break;
    }
    if (!outcome.applied) {
      break;
    }
  }
  report.final_cost = total_cost(graph);
  return report;
}

}  // namespace fgnav
