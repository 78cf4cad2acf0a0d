#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <stdexcept>
#include <string>
#include <vector>

#include "fgnav/factor_graph.hpp"

namespace fgnav {

/// Thrown when H (+ damping) is not positive definite on the free variables.
class SingularSystemError : public std::runtime_error {
 public:
  SingularSystemError(VariableId block, const std::string& what)
      : std::runtime_error(what), failing_block_(block) {}
  VariableId failing_block() const { return failing_block_; }

 private:
  VariableId failing_block_;
};

struct SolverConfig {
  int max_iterations = 50;
  double dx_tolerance = 1e-4;
  double damping = 0.0;        // added to diag(H)
  bool step_halving = false;   // reject steps that increase the cost
  int max_step_halvings = 5;
};

/// Column offsets of the free variables in the reduced linear system.
/// Fixed variables get offset -1 and contribute no columns.
struct BlockLayout {
  std::vector<int> offset;
  std::vector<int> dim;
  int total_dim = 0;

  static BlockLayout build(const FactorGraph& graph);
  bool is_free(VariableId id) const { return offset[id] >= 0; }
};

/// The quadratic model F(x + dx) ~= c + 2 b^T dx + dx^T H dx around the
/// current estimate; its minimizer solves H dx = -b.
struct QuadraticSystem {
  Eigen::SparseMatrix<double> hessian;
  Eigen::VectorXd gradient;
  double constant = 0.0;
  BlockLayout layout;
};

/// Assembles H = sum J^T Omega J (+ damping I) and b = sum J^T Omega e over
/// the active cost factors, plus any extra terms (constraint contributions).
QuadraticSystem build_system(const FactorGraph& graph, double damping = 0.0,
                             const std::vector<SystemTerm>* extra_terms = nullptr);

/// Solves H dx = -b with a sparse Cholesky factorization. Throws
/// SingularSystemError naming the first failing block when H is not PD.
Eigen::VectorXd solve_linear(const QuadraticSystem& system);

/// Applies a stacked perturbation to the free variables of the graph.
void apply_step(FactorGraph& graph, const BlockLayout& layout,
                const Eigen::VectorXd& dx);

/// F(x): total weighted squared error of the cost factors at the current
/// values. Inactive factors contribute zero.
double total_cost(const FactorGraph& graph);

struct OptimizeReport {
  int iterations = 0;
  double final_cost = 0.0;
  bool converged = false;
  std::vector<double> per_iteration_cost;
};

/// Gauss-Newton: linearize / build / solve / apply until |dx| < tolerance or
/// the iteration budget runs out. Constraint blocks in the graph are ignored.
OptimizeReport optimize(FactorGraph& graph, const SolverConfig& config);

namespace detail {

struct GnStepOutcome {
  double dx_norm = 0.0;       // norm of the applied (possibly halved) step
  double full_dx_norm = 0.0;  // norm of the unhalved solution
  double smallest_attempted_norm = 0.0;
  bool applied = false;
  int halvings = 0;

  /// A rejected step still counts as converged when even the smallest
  /// attempted perturbation fell under the tolerance: the cost cannot be
  /// reduced at that resolution.
  bool converged(double tolerance) const {
    return applied ? dx_norm < tolerance
                   : smallest_attempted_norm < tolerance;
  }
};

/// One linearize/build/solve/update step, shared by the unconstrained and
/// constrained solvers so that the two are bit-identical when no constraints
/// are present. `with_constraints` folds the graph's constraint blocks into
/// the system and into the step-acceptance objective.
GnStepOutcome gn_step(FactorGraph& graph, const SolverConfig& config,
                      bool with_constraints);

/// Step-acceptance objective: total_cost plus (optionally) the multiplier and
/// penalty terms of every constraint block.
double acceptance_objective(const FactorGraph& graph, bool with_constraints);

}  // namespace detail

}  // namespace fgnav
