#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <random>
#include <vector>

#include "fgnav/grid_map.hpp"
#include "fgnav/localizer.hpp"

namespace fgnav {

struct DiscObstacle {
  Eigen::Vector2d center;
  double radius = 0.0;
};

/// Closed polygon given as a vertex loop (last edge closes to the first).
struct PolygonObstacle {
  std::vector<Eigen::Vector2d> vertices;
};

struct LidarSpec {
  int n_beams = 180;
  double fov = 2.0 * M_PI;
  double max_range = 10.0;
  double noise_sigma = 0.01;  // range noise, meters
};

struct OdomNoise {
  double sigma_v = 0.05;      // per step, m/s
  double sigma_omega = 0.05;  // per step, rad/s
};

/// Deterministic simulation world: the static map plus obstacles the map does
/// not know about. The same seed reproduces an episode bit for bit.
struct SimWorld {
  GridMap static_map;
  std::vector<DiscObstacle> discs;
  std::vector<PolygonObstacle> polygons;
  LidarSpec lidar;
  OdomNoise odom_noise;
  std::uint64_t rng_seed = 0;
};

/// Casts all beams from the true pose: nearest hit against occupied cells and
/// the extra obstacles, Gaussian range noise from `rng`. Misses report
/// max_range and produce no endpoint.
Scan raycast_scan(const SimWorld& world, const Se2Pose& true_pose,
                  std::mt19937_64& rng);

/// Same, with a fresh generator seeded from world.rng_seed (deterministic
/// per call).
Scan raycast_scan(const SimWorld& world, const Se2Pose& true_pose);

/// Exact distance from the ray origin along `direction` (unit) to the first
/// occupied cell boundary, up to max_range; infinity when nothing is hit.
double raycast_grid(const GridMap& map, const Eigen::Vector2d& origin,
                    const Eigen::Vector2d& direction, double max_range);

/// Distance from a point to the obstacle set (discs, polygons); negative
/// inside a disc.
double obstacle_clearance(const SimWorld& world, const Eigen::Vector2d& p);

}  // namespace fgnav
