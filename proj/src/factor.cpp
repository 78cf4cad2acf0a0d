#include "fgnav/factor.hpp"

#include <stdexcept>
#include <string>

namespace fgnav {

std::optional<std::vector<Eigen::MatrixXd>> numeric_jacobian(
    const ErrorFn& error, const ValueList& values, int residual_dim,
    double step) {
  std::vector<Eigen::MatrixXd> blocks;
  blocks.reserve(values.size());
  ValueList probe = values;
  for (size_t i = 0; i < values.size(); ++i) {
    const int dim = static_cast<int>(values[i].size());
    Eigen::MatrixXd block(residual_dim, dim);
    for (int c = 0; c < dim; ++c) {
      const double original = probe[i][c];
      probe[i][c] = original + step;
      const auto plus = error(probe);
      probe[i][c] = original - step;
      const auto minus = error(probe);
      probe[i][c] = original;
      if (!plus || !minus) {
        return std::nullopt;
      }
      block.col(c) = (*plus - *minus) / (2.0 * step);
    }
    blocks.push_back(std::move(block));
  }
  return blocks;
}

Linearization linearize(const CostFactor& factor, const ValueList& values) {
  if (values.size() != factor.variables.size()) {
    throw std::invalid_argument("linearize: expected " +
                                std::to_string(factor.variables.size()) +
                                " value blocks, got " +
                                std::to_string(values.size()));
  }
  Linearization lin;
  const auto residual = factor.error(values);
  if (!residual) {
    return lin;  // inactive for this iteration
  }
  if (residual->size() != factor.residual_dim) {
    throw std::invalid_argument(
        "linearize: residual dimension " + std::to_string(residual->size()) +
        " does not match declared " + std::to_string(factor.residual_dim));
  }
  if (factor.jacobian) {
    lin.jacobians = factor.jacobian(values);
  } else {
    auto numeric = numeric_jacobian(factor.error, values, factor.residual_dim);
    if (!numeric) {
      return lin;  // undefined in the probe neighborhood
    }
    lin.jacobians = std::move(*numeric);
  }
  if (lin.jacobians.size() != values.size()) {
    throw std::invalid_argument("linearize: jacobian returned " +
                                std::to_string(lin.jacobians.size()) +
                                " blocks for " + std::to_string(values.size()) +
                                " variables");
  }
  lin.active = true;
  lin.residual = std::move(*residual);
  return lin;
}

}  // namespace fgnav
