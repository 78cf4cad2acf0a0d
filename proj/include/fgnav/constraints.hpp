#pragma once

#include <Eigen/Core>
#include <vector>

#include "fgnav/factor.hpp"

namespace fgnav {

enum class ConstraintKind { Equality, Inequality };

/// A constraint factor: residual r(x) with r = 0 (equality) or r <= 0
/// (inequality, componentwise). Carries its Lagrange multipliers and the
/// penalty weight of the augmented Lagrangian. For inequalities the
/// multiplier stays >= 0 componentwise.
struct ConstraintBlock {
  std::vector<VariableId> variables;
  int residual_dim = 0;
  ErrorFn residual;
  JacobianFn jacobian;
  ConstraintKind kind = ConstraintKind::Equality;
  Eigen::VectorXd multiplier;  // lambda, zero-initialized to residual_dim
  double penalty = 1.0;        // rho > 0
};

/// Dense contribution of one term to the linear system, expressed over the
/// joint perturbation of `variables` (dims listed per variable). Blocks are
/// scattered into H and b following the graph's variable ordering.
struct SystemTerm {
  std::vector<VariableId> variables;
  std::vector<int> dims;
  Eigen::MatrixXd hessian;
  Eigen::VectorXd gradient;
};

/// Quadratic-model contribution of a constraint at the current values:
/// H_add = (rho/2) J^T J, b_add = (rho/2) J^T r + (1/2) J^T lambda.
/// Inequality components enter only while active (lambda_i > 0 or r_i > 0);
/// satisfied inactive components add nothing.
SystemTerm constraint_contribution(const ConstraintBlock& block,
                                   const ValueList& values);

/// Multiplier update after a primal step: lambda += rho * r for equalities,
/// lambda = max(0, lambda + rho * r) componentwise for inequalities.
Eigen::VectorXd dual_update(const ConstraintBlock& block,
                            const ValueList& values);

/// Value of the multiplier + penalty terms of the augmented Lagrangian at the
/// current values (gated like constraint_contribution). Used for step
/// acceptance; excluded from reported costs.
double lagrangian_terms(const ConstraintBlock& block, const ValueList& values);

}  // namespace fgnav
