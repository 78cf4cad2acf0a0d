#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "fgnav/grid_map.hpp"

namespace fgnav {

/// How Unknown cells enter the distance transform. Planning and the potential
/// treat them as obstacles; localization ignores them.
enum class UnknownPolicy { AsOccupied, AsFree };

enum class FieldProvenance { StaticMap, DynamicOverlay };

/// Grid of nearest-obstacle distances (meters, clamped at d_max) with
/// bilinear sub-cell evaluation. Values are exact Euclidean distances between
/// cell centers. Immutable after build.
class DistanceField {
 public:
  static DistanceField build(const GridMap& map, double d_max,
                             UnknownPolicy policy = UnknownPolicy::AsOccupied,
                             FieldProvenance provenance =
                                 FieldProvenance::StaticMap);

  /// Bilinear interpolation of the four surrounding cell values; points
  /// outside the grid return d_max.
  double distance_at(const Eigen::Vector2d& world_p) const;

  /// Central differences of distance_at with step resolution/2.
  Eigen::Vector2d distance_gradient(const Eigen::Vector2d& world_p) const;

  double cell_value(int cx, int cy) const {
    return values_[static_cast<size_t>(cy) * width_ + cx];
  }

  int width() const { return width_; }
  int height() const { return height_; }
  double resolution() const { return resolution_; }
  const Se2Pose& origin() const { return origin_; }
  double d_max() const { return d_max_; }
  FieldProvenance provenance() const { return provenance_; }

  /// Binary dump: "DFLD" magic, u32 width, u32 height, f64 resolution,
  /// f64 origin (x, y, theta), then width*height row-major f32 distances.
  /// Little-endian throughout.
  void save(const std::string& path) const;

 private:
  int width_ = 0;
  int height_ = 0;
  double resolution_ = 0.05;
  Se2Pose origin_;
  double d_max_ = 0.0;
  FieldProvenance provenance_ = FieldProvenance::StaticMap;
  std::vector<double> values_;
};

/// Parameters of the repulsive potential g(d) and its vortex deflection.
/// Gains above ~0.5 make the tangential term strong enough to keep the
/// Gauss-Newton iteration on a limit cycle around blocking obstacles.
struct PotentialParams {
  double gain = 0.075;           // k
  double low_threshold = 0.05;   // mu, caps the potential below this distance
  double high_threshold = 0.8;   // rho, zero potential beyond this distance
  double vortex_gain = 0.25;     // kappa_v
};

/// g(d): gain * (1/mu - 1/rho) below mu, gain * (1/d - 1/rho) up to rho,
/// zero beyond.
double potential_of_distance(double d, const PotentialParams& params);

/// Analytic dg/dd (zero on the capped and zero-potential branches).
double potential_slope(double d, const PotentialParams& params);

/// Static field plus an optional per-cycle dynamic overlay; the effective
/// distance is the min of the two.
class ObstacleField {
 public:
  explicit ObstacleField(const DistanceField& static_field,
                         const DistanceField* dynamic_field = nullptr)
      : static_field_(&static_field), dynamic_field_(dynamic_field) {}

  double distance_at(const Eigen::Vector2d& p) const {
    double d = static_field_->distance_at(p);
    if (dynamic_field_ != nullptr) {
      d = std::min(d, dynamic_field_->distance_at(p));
    }
    return d;
  }

  Eigen::Vector2d distance_gradient(const Eigen::Vector2d& p) const;

  double resolution() const { return static_field_->resolution(); }
  const DistanceField& static_field() const { return *static_field_; }
  bool has_dynamic() const { return dynamic_field_ != nullptr; }

 private:
  const DistanceField* static_field_;
  const DistanceField* dynamic_field_;
};

/// g at a world point.
template <typename Field>
double potential(const Field& field, const PotentialParams& params,
                 const Eigen::Vector2d& p) {
  return potential_of_distance(field.distance_at(p), params);
}

/// Gradient of g plus the vortex term kappa_v * g * rot90(grad d / |grad d|),
/// with the rotation sign chosen so the tangent points along `heading_hint`
/// (ties break counterclockwise). Zero wherever g vanishes.
template <typename Field>
Eigen::Vector2d potential_gradient_with_vortex(
    const Field& field, const PotentialParams& params,
    const Eigen::Vector2d& p, const Eigen::Vector2d& heading_hint) {
  const double d = field.distance_at(p);
  const double g = potential_of_distance(d, params);
  if (g == 0.0) {
    return Eigen::Vector2d::Zero();
  }
  const Eigen::Vector2d grad_d = field.distance_gradient(p);
  Eigen::Vector2d out = potential_slope(d, params) * grad_d;
  const double norm = grad_d.norm();
  if (norm > 1e-12) {
    const Eigen::Vector2d unit = grad_d / norm;
    Eigen::Vector2d tangent(-unit.y(), unit.x());  // counterclockwise
    if (tangent.dot(heading_hint) < 0.0) {
      tangent = -tangent;
    }
    out += params.vortex_gain * g * tangent;
  }
  return out;
}

}  // namespace fgnav
