#pragma once

#include <stdexcept>
#include <vector>

#include "fgnav/constraints.hpp"
#include "fgnav/factor.hpp"
#include "fgnav/variable.hpp"

namespace fgnav {

/// Container of typed variables, cost factors and constraint factors.
/// Variable insertion order fixes the block ordering of the linear system.
class FactorGraph {
 public:
  VariableId add_variable(Variable v) {
    variables_.push_back(std::move(v));
    return static_cast<VariableId>(variables_.size()) - 1;
  }

  VariableId add_se2_variable(const Se2Pose& pose, bool fixed = false) {
    return add_variable(Variable::se2(pose, fixed));
  }

  VariableId add_vector_variable(const Eigen::VectorXd& value,
                                 bool fixed = false) {
    return add_variable(Variable::vector(value, fixed));
  }

  void add_factor(CostFactor f) {
    check_ids(f.variables);
    if (f.residual_dim <= 0) {
      throw std::invalid_argument("add_factor: residual_dim must be positive");
    }
    factors_.push_back(std::move(f));
  }

  void add_constraint(ConstraintBlock c) {
    check_ids(c.variables);
    if (c.residual_dim <= 0) {
      throw std::invalid_argument(
          "add_constraint: residual_dim must be positive");
    }
    if (c.multiplier.size() == 0) {
      c.multiplier = Eigen::VectorXd::Zero(c.residual_dim);
    }
    if (c.multiplier.size() != c.residual_dim) {
      throw std::invalid_argument(
          "add_constraint: multiplier dimension must equal residual_dim");
    }
    if (c.kind == ConstraintKind::Inequality && c.multiplier.minCoeff() < 0.0) {
      throw std::invalid_argument(
          "add_constraint: inequality multipliers must be non-negative");
    }
    if (c.penalty <= 0.0) {
      throw std::invalid_argument("add_constraint: penalty must be positive");
    }
    constraints_.push_back(std::move(c));
  }

  int num_variables() const { return static_cast<int>(variables_.size()); }
  int num_factors() const { return static_cast<int>(factors_.size()); }
  int num_constraints() const { return static_cast<int>(constraints_.size()); }

  const Variable& variable(VariableId id) const { return variables_.at(id); }
  Variable& variable(VariableId id) { return variables_.at(id); }

  const std::vector<Variable>& variables() const { return variables_; }
  std::vector<Variable>& variables() { return variables_; }
  const std::vector<CostFactor>& factors() const { return factors_; }
  const std::vector<ConstraintBlock>& constraints() const {
    return constraints_;
  }
  std::vector<ConstraintBlock>& constraints() { return constraints_; }

  /// Values of the listed variables, in order.
  ValueList values_of(const std::vector<VariableId>& ids) const {
    ValueList out;
    out.reserve(ids.size());
    for (VariableId id : ids) {
      out.push_back(variables_.at(id).value);
    }
    return out;
  }

 private:
  void check_ids(const std::vector<VariableId>& ids) const {
    for (VariableId id : ids) {
      if (id < 0 || id >= num_variables()) {
        throw std::invalid_argument("factor references unknown variable id " +
                                    std::to_string(id));
      }
    }
  }

  std::vector<Variable> variables_;
  std::vector<CostFactor> factors_;
  std::vector<ConstraintBlock> constraints_;
};

}  // namespace fgnav
