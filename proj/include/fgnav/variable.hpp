#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <string>

#include "fgnav/se2.hpp"

namespace fgnav {

/// Index of a variable inside a FactorGraph. Ids are dense 0..V-1 and their
/// order defines the block ordering of the linear system.
using VariableId = int;

enum class VariableKind { Se2Pose, VectorN };

/// A graph variable: either an SE(2) pose stored as (x, y, theta) or a free
/// real vector. Fixed variables contribute no columns to the linear system.
struct Variable {
  VariableKind kind = VariableKind::VectorN;
  Eigen::VectorXd value;
  bool fixed = false;

  int dim() const { return static_cast<int>(value.size()); }

  Se2Pose pose() const {
    return {value[0], value[1], value[2]};
  }

  static Variable se2(const Se2Pose& p, bool fixed = false) {
    Variable v;
    v.kind = VariableKind::Se2Pose;
    v.value = Eigen::Vector3d(p.x, p.y, wrap_angle(p.theta));
    v.fixed = fixed;
    return v;
  }

  static Variable vector(const Eigen::VectorXd& values, bool fixed = false) {
    Variable v;
    v.kind = VariableKind::VectorN;
    v.value = values;
    v.fixed = fixed;
    return v;
  }
};

/// Applies a perturbation to a variable: additive, with angle renormalization
/// for SE(2) poses. The fixed flag is preserved.
inline Variable box_plus(const Variable& v, const Eigen::VectorXd& delta) {
  if (delta.size() != v.value.size()) {
    throw std::invalid_argument("box_plus: perturbation dimension " +
                                std::to_string(delta.size()) +
                                " does not match variable dimension " +
                                std::to_string(v.value.size()));
  }
  Variable out = v;
  out.value += delta;
  if (out.kind == VariableKind::Se2Pose) {
    out.value[2] = wrap_angle(out.value[2]);
  }
  return out;
}

}  // namespace fgnav
