#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <string>
#include <vector>

#include "fgnav/grid_map.hpp"

namespace fgnav {

class PlanningError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Start or goal outside the map or inside the inflated obstacle region.
class InvalidEndpointError : public PlanningError {
 public:
  using PlanningError::PlanningError;
};

/// Goal not reachable on the inflated grid.
class NoPathError : public PlanningError {
 public:
  using PlanningError::PlanningError;
};

/// Obstacle-free polyline of cell centers; consecutive waypoints are
/// 8-connected grid neighbors.
struct GlobalPath {
  std::vector<Eigen::Vector2d> waypoints;
  double total_length = 0.0;
};

/// Shortest 8-connected path by Dijkstra's algorithm on the inflated grid
/// (diagonal cost sqrt(2) * resolution). Cells within inflation_radius of an
/// Occupied or Unknown cell are blocked.
GlobalPath plan_global(const GridMap& map, const Eigen::Vector2d& start,
                       const Eigen::Vector2d& goal, double inflation_radius);

}  // namespace fgnav
