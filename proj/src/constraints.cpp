#include "fgnav/constraints.hpp"

#include <stdexcept>

namespace fgnav {

namespace {

Eigen::VectorXd eval_residual(const ConstraintBlock& block,
                              const ValueList& values) {
  const auto r = block.residual(values);
  if (!r) {
    throw std::invalid_argument(
        "constraint residual undefined at the current values");
  }
  if (r->size() != block.residual_dim) {
    throw std::invalid_argument("constraint residual dimension mismatch");
  }
  return *r;
}

std::vector<Eigen::MatrixXd> eval_jacobian(const ConstraintBlock& block,
                                           const ValueList& values) {
  if (block.jacobian) {
    return block.jacobian(values);
  }
  auto numeric = numeric_jacobian(block.residual, values, block.residual_dim);
  if (!numeric) {
    throw std::invalid_argument(
        "constraint jacobian undefined at the current values");
  }
  return *numeric;
}

/// Componentwise activity: equalities are always active, inequalities only
/// while violated or carrying a positive multiplier.
Eigen::ArrayXd active_mask(const ConstraintBlock& block,
                           const Eigen::VectorXd& r) {
  Eigen::ArrayXd mask = Eigen::ArrayXd::Ones(block.residual_dim);
  if (block.kind == ConstraintKind::Inequality) {
    for (int i = 0; i < block.residual_dim; ++i) {
      if (!(block.multiplier[i] > 0.0 || r[i] > 0.0)) {
        mask[i] = 0.0;
      }
    }
  }
  return mask;
}

}  // namespace

SystemTerm constraint_contribution(const ConstraintBlock& block,
                                   const ValueList& values) {
  const Eigen::VectorXd r = eval_residual(block, values);
  const auto jac = eval_jacobian(block, values);
  const Eigen::ArrayXd mask = active_mask(block, r);

  int joint_dim = 0;
  SystemTerm term;
  term.variables = block.variables;
  term.dims.reserve(values.size());
  for (const auto& v : values) {
    term.dims.push_back(static_cast<int>(v.size()));
    joint_dim += static_cast<int>(v.size());
  }

  Eigen::MatrixXd joint_jac(block.residual_dim, joint_dim);
  int col = 0;
  for (size_t i = 0; i < jac.size(); ++i) {
    joint_jac.middleCols(col, term.dims[i]) = jac[i];
    col += term.dims[i];
  }
  // Gate rows out by zeroing them; inactive components then add nothing.
  const Eigen::MatrixXd gated = mask.matrix().asDiagonal() * joint_jac;
  const Eigen::VectorXd gated_r = mask * r.array();
  const Eigen::VectorXd gated_lambda = mask * block.multiplier.array();

  const double rho = block.penalty;
  term.hessian = 0.5 * rho * gated.transpose() * gated;
  term.gradient =
      0.5 * rho * gated.transpose() * gated_r + 0.5 * gated.transpose() * gated_lambda;
  return term;
}

Eigen::VectorXd dual_update(const ConstraintBlock& block,
                            const ValueList& values) {
  const Eigen::VectorXd r = eval_residual(block, values);
  Eigen::VectorXd lambda = block.multiplier + block.penalty * r;
  if (block.kind == ConstraintKind::Inequality) {
    lambda = lambda.cwiseMax(0.0);
  }
  return lambda;
}

double lagrangian_terms(const ConstraintBlock& block, const ValueList& values) {
  const Eigen::VectorXd r = eval_residual(block, values);
  const Eigen::ArrayXd mask = active_mask(block, r);
  const Eigen::ArrayXd rg = mask * r.array();
  const Eigen::ArrayXd lg = mask * block.multiplier.array();
  return (lg * rg).sum() + 0.5 * block.penalty * (rg * rg).sum();
}

}  // namespace fgnav
