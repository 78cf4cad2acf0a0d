#include "fgnav/svg.hpp"

#include <fstream>
#include <stdexcept>

namespace fgnav {

SvgPlot::SvgPlot(double min_x, double min_y, double max_x, double max_y,
                 double pixels_per_meter)
    : min_x_(min_x),
      min_y_(min_y),
      max_x_(max_x),
      max_y_(max_y),
      scale_(pixels_per_meter) {}

void SvgPlot::add_map(const GridMap& map) {
  // Merge occupied runs per row to keep the file small.
  const double res = map.resolution;
  for (int cy = 0; cy < map.height; ++cy) {
    int run_start = -1;
    for (int cx = 0; cx <= map.width; ++cx) {
      const bool occ =
          cx < map.width && map.at(cx, cy) != CellState::Free;
      if (occ && run_start < 0) {
        run_start = cx;
      } else if (!occ && run_start >= 0) {
        const Eigen::Vector2d a =
            map.origin.transform({run_start * res, cy * res});
        const double w = (cx - run_start) * res * scale_;
        const double h = res * scale_;
        body_ << "<rect x='" << to_px_x(a.x()) << "' y='"
              << to_px_y(a.y()) - h << "' width='" << w << "' height='" << h
              << "' fill='#444444'/>\n";
        run_start = -1;
      }
    }
  }
}

void SvgPlot::add_polyline(const std::vector<Eigen::Vector2d>& points,
                           const std::string& color, double width_px,
                           bool dashed) {
  if (points.size() < 2) {
    return;
  }
  body_ << "<polyline fill='none' stroke='" << color << "' stroke-width='"
        << width_px << "'";
  if (dashed) {
    body_ << " stroke-dasharray='6,4'";
  }
  body_ << " points='";
  for (const auto& p : points) {
    body_ << to_px_x(p.x()) << "," << to_px_y(p.y()) << " ";
  }
  body_ << "'/>\n";
}

void SvgPlot::add_circle(const Eigen::Vector2d& center, double radius_m,
                         const std::string& color, bool filled) {
  body_ << "<circle cx='" << to_px_x(center.x()) << "' cy='"
        << to_px_y(center.y()) << "' r='" << radius_m * scale_ << "' ";
  if (filled) {
    body_ << "fill='" << color << "' stroke='none'";
  } else {
    body_ << "fill='none' stroke='" << color << "' stroke-width='1.5'";
  }
  body_ << "/>\n";
}

void SvgPlot::add_marker(const Eigen::Vector2d& position,
                         const std::string& color) {
  body_ << "<circle cx='" << to_px_x(position.x()) << "' cy='"
        << to_px_y(position.y()) << "' r='4' fill='" << color << "'/>\n";
}

void SvgPlot::add_label(const Eigen::Vector2d& position,
                        const std::string& text) {
  body_ << "<text x='" << to_px_x(position.x()) + 6 << "' y='"
        << to_px_y(position.y()) - 6 << "' font-size='12' fill='#222222'>"
        << text << "</text>\n";
}

void SvgPlot::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write SVG: " + path);
  }
  const double w = (max_x_ - min_x_) * scale_;
  const double h = (max_y_ - min_y_) * scale_;
  out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << w
      << "' height='" << h << "' viewBox='0 0 " << w << " " << h << "'>\n";
  out << "<rect x='0' y='0' width='" << w << "' height='" << h
      << "' fill='#fafafa'/>\n";
  out << body_.str();
  out << "</svg>\n";
}

}  // namespace fgnav
