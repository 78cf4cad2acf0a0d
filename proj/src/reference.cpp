#include "fgnav/reference.hpp"

#include <cmath>
#include <stdexcept>

namespace fgnav {

namespace {

struct PathSample {
  Eigen::Vector2d point;
  double tangent_heading;
};

/// Point and tangent at arc length s along the polyline (clamped to [0, L]).
PathSample sample_at(const std::vector<Eigen::Vector2d>& pts,
                     const std::vector<double>& cumulative, double s) {
  const double total = cumulative.back();
  s = std::clamp(s, 0.0, total);
  size_t seg = 0;
  while (seg + 2 < pts.size() && cumulative[seg + 1] < s) {
    ++seg;
  }
  const Eigen::Vector2d a = pts[seg];
  const Eigen::Vector2d b = pts[seg + 1];
  const double len = cumulative[seg + 1] - cumulative[seg];
  const double t = len > 0.0 ? (s - cumulative[seg]) / len : 0.0;
  const Eigen::Vector2d dir = b - a;
  return {a + t * dir, std::atan2(dir.y(), dir.x())};
}

}  // namespace

ReferenceTrajectory make_reference(const GlobalPath& path,
                                   const Se2Pose& current_pose,
                                   const MpcConfig& config,
                                   std::optional<double> goal_heading) {
  if (path.waypoints.empty()) {
    throw std::invalid_argument("make_reference: empty path");
  }
  ReferenceTrajectory ref;
  ref.goal_heading_free = !goal_heading.has_value();

  if (path.waypoints.size() == 1) {
    const Eigen::Vector2d p = path.waypoints.front();
    const double heading = goal_heading.value_or(current_pose.theta);
    ref.states.assign(config.horizon + 1, {p.x(), p.y(), heading});
    ref.controls.assign(config.horizon, {0.0, 0.0});
    return ref;
  }

  std::vector<double> cumulative(path.waypoints.size(), 0.0);
  for (size_t i = 1; i < path.waypoints.size(); ++i) {
    cumulative[i] = cumulative[i - 1] +
                    (path.waypoints[i] - path.waypoints[i - 1]).norm();
  }
  const double total = cumulative.back();

  // Arc length of the projection of the current position onto the path.
  double s0 = 0.0;
  double best = std::numeric_limits<double>::infinity();
  const Eigen::Vector2d p0 = current_pose.translation();
  for (size_t i = 0; i + 1 < path.waypoints.size(); ++i) {
    const Eigen::Vector2d a = path.waypoints[i];
    const Eigen::Vector2d ab = path.waypoints[i + 1] - a;
    const double len2 = ab.squaredNorm();
    const double t =
        len2 > 0.0 ? std::clamp((p0 - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
    const Eigen::Vector2d proj = a + t * ab;
    const double d2 = (p0 - proj).squaredNorm();
    if (d2 < best) {
      best = d2;
      s0 = cumulative[i] + t * std::sqrt(len2);
    }
  }

  const double spacing = config.v_ref * config.ts;
  ref.states.reserve(config.horizon + 1);
  for (int n = 0; n <= config.horizon; ++n) {
    const double s = s0 + n * spacing;
    const PathSample sample = sample_at(path.waypoints, cumulative, s);
    double heading = sample.tangent_heading;
    if (n == config.horizon && goal_heading) {
      heading = *goal_heading;
    }
    ref.states.push_back({sample.point.x(), sample.point.y(),
                          wrap_angle(heading)});
  }
  ref.controls.reserve(config.horizon);
  for (int n = 0; n < config.horizon; ++n) {
    const bool padded = s0 + n * spacing >= total;
    ref.controls.push_back({padded ? 0.0 : config.v_ref, 0.0});
  }
  return ref;
}

}  // namespace fgnav
