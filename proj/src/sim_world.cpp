#include "fgnav/sim_world.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fgnav {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Ray / circle intersection: smallest positive t with |o + t u - c| = r.
double ray_disc(const Eigen::Vector2d& origin, const Eigen::Vector2d& dir,
                const DiscObstacle& disc) {
  const Eigen::Vector2d oc = origin - disc.center;
  const double b = oc.dot(dir);
  const double c = oc.squaredNorm() - disc.radius * disc.radius;
  const double disc_term = b * b - c;
  if (disc_term < 0.0) {
    return kInf;
  }
  const double root = std::sqrt(disc_term);
  const double t0 = -b - root;
  if (t0 > 0.0) {
    return t0;
  }
  const double t1 = -b + root;
  return t1 > 0.0 ? t1 : kInf;
}

double ray_segment(const Eigen::Vector2d& origin, const Eigen::Vector2d& dir,
                   const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  const Eigen::Vector2d ab = b - a;
  const double denom = dir.x() * ab.y() - dir.y() * ab.x();
  if (std::abs(denom) < 1e-15) {
    return kInf;
  }
  const Eigen::Vector2d ao = a - origin;
  const double t = (ao.x() * ab.y() - ao.y() * ab.x()) / denom;
  const double s = (ao.x() * dir.y() - ao.y() * dir.x()) / denom;
  if (t > 0.0 && s >= 0.0 && s <= 1.0) {
    return t;
  }
  return kInf;
}

double point_segment_distance(const Eigen::Vector2d& p,
                              const Eigen::Vector2d& a,
                              const Eigen::Vector2d& b) {
  const Eigen::Vector2d ab = b - a;
  const double len2 = ab.squaredNorm();
  const double t =
      len2 > 0.0 ? std::clamp((p - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
  return (p - (a + t * ab)).norm();
}

}  // namespace

double raycast_grid(const GridMap& map, const Eigen::Vector2d& origin,
                    const Eigen::Vector2d& direction, double max_range) {
  // Amanatides-Woo traversal in grid coordinates. Unknown cells do not
  // reflect: the lidar only sees physical obstacles.
  const Eigen::Vector2d g0 = map.world_to_grid(origin);
  const Eigen::Vector2d g1 =
      map.world_to_grid(origin + direction * max_range);
  const Eigen::Vector2d dg = (g1 - g0) / max_range;  // cells per meter

  int cx = static_cast<int>(std::floor(g0.x()));
  int cy = static_cast<int>(std::floor(g0.y()));
  const int step_x = dg.x() > 0.0 ? 1 : -1;
  const int step_y = dg.y() > 0.0 ? 1 : -1;
  const double t_delta_x =
      dg.x() != 0.0 ? std::abs(1.0 / dg.x()) : kInf;
  const double t_delta_y =
      dg.y() != 0.0 ? std::abs(1.0 / dg.y()) : kInf;
  double t_max_x =
      dg.x() != 0.0
          ? ((step_x > 0 ? cx + 1 - g0.x() : g0.x() - cx) * t_delta_x)
          : kInf;
  double t_max_y =
      dg.y() != 0.0
          ? ((step_y > 0 ? cy + 1 - g0.y() : g0.y() - cy) * t_delta_y)
          : kInf;

  double t = 0.0;
  while (t <= max_range) {
    if (map.inside(cx, cy) && map.at(cx, cy) == CellState::Occupied) {
      return t;
    }
    if (t_max_x < t_max_y) {
      t = t_max_x;
      t_max_x += t_delta_x;
      cx += step_x;
    } else {
      t = t_max_y;
      t_max_y += t_delta_y;
      cy += step_y;
    }
  }
  return kInf;
}

Scan raycast_scan(const SimWorld& world, const Se2Pose& true_pose,
                  std::mt19937_64& rng) {
  Scan scan;
  scan.max_range = world.lidar.max_range;
  scan.endpoints.reserve(world.lidar.n_beams);
  std::normal_distribution<double> noise(0.0, 1.0);

  const Eigen::Vector2d origin = true_pose.translation();
  for (int i = 0; i < world.lidar.n_beams; ++i) {
    const double bearing =
        world.lidar.n_beams > 1
            ? -0.5 * world.lidar.fov +
                  world.lidar.fov * i / (world.lidar.n_beams - 1)
            : 0.0;
    const double angle = true_pose.theta + bearing;
    const Eigen::Vector2d dir(std::cos(angle), std::sin(angle));

    double range =
        raycast_grid(world.static_map, origin, dir, world.lidar.max_range);
    for (const DiscObstacle& disc : world.discs) {
      range = std::min(range, ray_disc(origin, dir, disc));
    }
    for (const PolygonObstacle& poly : world.polygons) {
      for (size_t k = 0; k < poly.vertices.size(); ++k) {
        const Eigen::Vector2d& a = poly.vertices[k];
        const Eigen::Vector2d& b =
            poly.vertices[(k + 1) % poly.vertices.size()];
        range = std::min(range, ray_segment(origin, dir, a, b));
      }
    }
    if (world.lidar.noise_sigma > 0.0 && std::isfinite(range)) {
      range = std::max(0.0, range + world.lidar.noise_sigma * noise(rng));
    }
    if (range < world.lidar.max_range) {
      scan.endpoints.emplace_back(range * std::cos(bearing),
                                  range * std::sin(bearing));
    }
  }
  return scan;
}

Scan raycast_scan(const SimWorld& world, const Se2Pose& true_pose) {
  std::mt19937_64 rng(world.rng_seed);
  return raycast_scan(world, true_pose, rng);
}

double obstacle_clearance(const SimWorld& world, const Eigen::Vector2d& p) {
  double clearance = kInf;
  for (const DiscObstacle& disc : world.discs) {
    clearance = std::min(clearance, (p - disc.center).norm() - disc.radius);
  }
  for (const PolygonObstacle& poly : world.polygons) {
    for (size_t k = 0; k < poly.vertices.size(); ++k) {
      clearance = std::min(
          clearance,
          point_segment_distance(p, poly.vertices[k],
                                 poly.vertices[(k + 1) % poly.vertices.size()]));
    }
  }
  return clearance;
}

}  // namespace fgnav
