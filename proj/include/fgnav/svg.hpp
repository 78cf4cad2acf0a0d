#pragma once

#include <Eigen/Core>
#include <sstream>
#include <string>
#include <vector>

#include "fgnav/grid_map.hpp"

namespace fgnav {

/// Minimal SVG writer for map + trajectory figures. World y points up; the
/// writer flips into SVG screen coordinates.
class SvgPlot {
 public:
  SvgPlot(double min_x, double min_y, double max_x, double max_y,
          double pixels_per_meter = 60.0);

  void add_map(const GridMap& map);
  void add_polyline(const std::vector<Eigen::Vector2d>& points,
                    const std::string& color, double width_px = 2.0,
                    bool dashed = false);
  void add_circle(const Eigen::Vector2d& center, double radius_m,
                  const std::string& color, bool filled = false);
  void add_marker(const Eigen::Vector2d& position, const std::string& color);
  void add_label(const Eigen::Vector2d& position, const std::string& text);

  void save(const std::string& path) const;

 private:
  double to_px_x(double x) const { return (x - min_x_) * scale_; }
  double to_px_y(double y) const { return (max_y_ - y) * scale_; }

  double min_x_, min_y_, max_x_, max_y_, scale_;
  std::ostringstream body_;
};

}  // namespace fgnav
