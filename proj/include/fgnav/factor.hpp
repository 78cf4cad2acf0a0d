#pragma once

#include <Eigen/Core>
#include <functional>
#include <optional>
#include <vector>

#include "fgnav/variable.hpp"

namespace fgnav {

/// Values of the variables a factor connects to, in the factor's order.
using ValueList = std::vector<Eigen::VectorXd>;

/// Residual function e(x). Returns nullopt where the error is undefined
/// (e.g. a query outside the map); the factor is then inactive for the
/// current iteration.
using ErrorFn = std::function<std::optional<Eigen::VectorXd>(const ValueList&)>;

/// Jacobian blocks, one m x dim_i matrix per connected variable.
using JacobianFn = std::function<std::vector<Eigen::MatrixXd>(const ValueList&)>;

/// Step for central-difference Jacobians.
inline constexpr double kNumericJacobianStep = 1e-5;

/// A weighted least-squares term <z, Omega, h(.)>: contributes
/// ||e(x)||^2_Omega to the graph cost. The measurement is embedded in the
/// error closure. If `jacobian` is empty the solver falls back to central
/// differences; if `information` is empty it defaults to identity.
struct CostFactor {
  std::vector<VariableId> variables;
  int residual_dim = 0;
  ErrorFn error;
  JacobianFn jacobian;
  Eigen::MatrixXd information;
};

struct Linearization {
  bool active = false;
  Eigen::VectorXd residual;
  std::vector<Eigen::MatrixXd> jacobians;
};

/// Central-difference Jacobian of `error` at `values`. Returns nullopt if the
/// error is undefined at any probe point.
std::optional<std::vector<Eigen::MatrixXd>> numeric_jacobian(
    const ErrorFn& error, const ValueList& values, int residual_dim,
    double step = kNumericJacobianStep);

/// Evaluates residual and Jacobian blocks of a factor at the given values.
/// An undefined error marks the factor inactive for this iteration.
Linearization linearize(const CostFactor& factor, const ValueList& values);

}  // namespace fgnav
