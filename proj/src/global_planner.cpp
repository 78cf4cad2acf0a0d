#include "fgnav/global_planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "fgnav/distance_field.hpp"

namespace fgnav {

namespace {

struct QueueEntry {
  double cost;
  int index;
  bool operator>(const QueueEntry& other) const {
    return cost > other.cost || (cost == other.cost && index > other.index);
  }
};

}  // namespace

GlobalPath plan_global(const GridMap& map, const Eigen::Vector2d& start,
                       const Eigen::Vector2d& goal, double inflation_radius) {
  const auto start_cell = map.world_to_cell(start);
  const auto goal_cell = map.world_to_cell(goal);
  if (!start_cell) {
    throw InvalidEndpointError("start is outside the map");
  }
  if (!goal_cell) {
    throw InvalidEndpointError("goal is outside the map");
  }

  // Exact Euclidean inflation via the distance transform.
  const DistanceField clearance = DistanceField::build(
      map, inflation_radius + 2.0 * map.resolution, UnknownPolicy::AsOccupied);
  auto blocked = [&](int cx, int cy) {
    return clearance.cell_value(cx, cy) <= inflation_radius;
  };
  if (blocked((*start_cell)[0], (*start_cell)[1])) {
    throw InvalidEndpointError("start is in collision on the inflated map");
  }
  if (blocked((*goal_cell)[0], (*goal_cell)[1])) {
    throw InvalidEndpointError("goal is in collision on the inflated map");
  }

  const int n = map.width * map.height;
  const int start_index = (*start_cell)[1] * map.width + (*start_cell)[0];
  const int goal_index = (*goal_cell)[1] * map.width + (*goal_cell)[0];
  std::vector<double> dist(n, std::numeric_limits<double>::infinity());
  std::vector<int> parent(n, -1);
  std::priority_queue<QueueEntry, std::vector<QueueEntry>,
                      std::greater<QueueEntry>>
      queue;
  dist[start_index] = 0.0;
  queue.push({0.0, start_index});

  const int dx[8] = {1, -1, 0, 0, 1, 1, -1, -1};
  const int dy[8] = {0, 0, 1, -1, 1, -1, 1, -1};
  const double diag = std::sqrt(2.0) * map.resolution;

  while (!queue.empty()) {
    const QueueEntry top = queue.top();
    queue.pop();
    if (top.cost > dist[top.index]) {
      continue;
    }
    if (top.index == goal_index) {
      break;
    }
    const int cx = top.index % map.width;
    const int cy = top.index / map.width;
    for (int k = 0; k < 8; ++k) {
      const int nx = cx + dx[k];
      const int ny = cy + dy[k];
      if (!map.inside(nx, ny) || blocked(nx, ny)) {
        continue;
      }
      const double step = k < 4 ? map.resolution : diag;
      const int ni = ny * map.width + nx;
      const double candidate = top.cost + step;
      if (candidate < dist[ni]) {
        dist[ni] = candidate;
        parent[ni] = top.index;
        queue.push({candidate, ni});
      }
    }
  }

  if (!std::isfinite(dist[goal_index])) {
    throw NoPathError("goal is unreachable on the inflated map");
  }

  GlobalPath path;
  path.total_length = dist[goal_index];
  std::vector<int> chain;
  for (int i = goal_index; i != -1; i = parent[i]) {
    chain.push_back(i);
  }
  std::reverse(chain.begin(), chain.end());
  path.waypoints.reserve(chain.size());
  for (int i : chain) {
    path.waypoints.push_back(map.cell_center(i % map.width, i / map.width));
  }
  return path;
}

}  // namespace fgnav
