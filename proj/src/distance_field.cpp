#include "fgnav/distance_field.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace fgnav {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// 1D squared-distance transform (lower envelope of parabolas).
void transform_1d(const std::vector<double>& f, std::vector<double>& out,
                  std::vector<int>& hull, std::vector<double>& boundaries) {
  const int n = static_cast<int>(f.size());
  hull.assign(n, 0);
  boundaries.assign(n + 1, 0.0);
  int k = 0;
  hull[0] = 0;
  boundaries[0] = -kInf;
  boundaries[1] = kInf;
  for (int q = 1; q < n; ++q) {
    if (f[q] == kInf) {
      continue;
    }
    double s = 0.0;
    while (true) {
      const int p = hull[k];
      if (f[p] == kInf) {
        // Empty parabola on the hull; replace it outright.
        --k;
        if (k < 0) {
          break;
        }
        continue;
      }
      s = ((f[q] + q * q) - (f[p] + p * p)) / (2.0 * q - 2.0 * p);
      if (s > boundaries[k]) {
        break;
      }
      --k;
    }
    ++k;
    hull[k] = q;
    boundaries[k] = k > 0 ? s : -kInf;
    boundaries[k + 1] = kInf;
  }
  int j = 0;
  for (int q = 0; q < n; ++q) {
    while (boundaries[j + 1] < q) {
      ++j;
    }
    const int p = hull[j];
    out[q] = f[p] == kInf ? kInf : (q - p) * static_cast<double>(q - p) + f[p];
  }
}

}  // namespace

DistanceField DistanceField::build(const GridMap& map, double d_max,
                                   UnknownPolicy policy,
                                   FieldProvenance provenance) {
  if (d_max <= 0.0) {
    throw std::invalid_argument("distance field d_max must be positive");
  }
  DistanceField df;
  df.width_ = map.width;
  df.height_ = map.height;
  df.resolution_ = map.resolution;
  df.origin_ = map.origin;
  df.d_max_ = d_max;
  df.provenance_ = provenance;

  const size_t n = static_cast<size_t>(map.width) * map.height;
  std::vector<double> sq(n);
  for (size_t i = 0; i < n; ++i) {
    const CellState s = map.cells[i];
    const bool occupied =
        s == CellState::Occupied ||
        (s == CellState::Unknown && policy == UnknownPolicy::AsOccupied);
    sq[i] = occupied ? 0.0 : kInf;
  }

  // Exact Euclidean transform: 1D pass down columns, then along rows.
  std::vector<double> column(map.height), column_out(map.height);
  std::vector<int> hull;
  std::vector<double> boundaries;
  for (int cx = 0; cx < map.width; ++cx) {
    for (int cy = 0; cy < map.height; ++cy) {
      column[cy] = sq[static_cast<size_t>(cy) * map.width + cx];
    }
    transform_1d(column, column_out, hull, boundaries);
    for (int cy = 0; cy < map.height; ++cy) {
      sq[static_cast<size_t>(cy) * map.width + cx] = column_out[cy];
    }
  }
  std::vector<double> row(map.width), row_out(map.width);
  for (int cy = 0; cy < map.height; ++cy) {
    for (int cx = 0; cx < map.width; ++cx) {
      row[cx] = sq[static_cast<size_t>(cy) * map.width + cx];
    }
    transform_1d(row, row_out, hull, boundaries);
    for (int cx = 0; cx < map.width; ++cx) {
      sq[static_cast<size_t>(cy) * map.width + cx] = row_out[cx];
    }
  }

  df.values_.resize(n);
  for (size_t i = 0; i < n; ++i) {
    df.values_[i] =
        sq[i] == kInf ? d_max : std::min(map.resolution * std::sqrt(sq[i]), d_max);
  }
  return df;
}

double DistanceField::distance_at(const Eigen::Vector2d& world_p) const {
  const Eigen::Vector2d local = origin_.inverse_transform(world_p);
  const double span_x = width_ * resolution_;
  const double span_y = height_ * resolution_;
  if (local.x() < 0.0 || local.y() < 0.0 || local.x() > span_x ||
      local.y() > span_y) {
    return d_max_;
  }
  // Grid coordinates with cell centers at integers.
  double u = local.x() / resolution_ - 0.5;
  double v = local.y() / resolution_ - 0.5;
  u = std::clamp(u, 0.0, static_cast<double>(width_ - 1));
  v = std::clamp(v, 0.0, static_cast<double>(height_ - 1));
  const int x0 = std::min(static_cast<int>(u), width_ - 2 >= 0 ? width_ - 2 : 0);
  const int y0 =
      std::min(static_cast<int>(v), height_ - 2 >= 0 ? height_ - 2 : 0);
  const int x1 = std::min(x0 + 1, width_ - 1);
  const int y1 = std::min(y0 + 1, height_ - 1);
  const double fx = u - x0;
  const double fy = v - y0;
  const double v00 = cell_value(x0, y0);
  const double v10 = cell_value(x1, y0);
  const double v01 = cell_value(x0, y1);
  const double v11 = cell_value(x1, y1);
  return (1.0 - fx) * (1.0 - fy) * v00 + fx * (1.0 - fy) * v10 +
         (1.0 - fx) * fy * v01 + fx * fy * v11;
}

Eigen::Vector2d DistanceField::distance_gradient(
    const Eigen::Vector2d& world_p) const {
  const double h = 0.5 * resolution_;
  const double dx = distance_at({world_p.x() + h, world_p.y()}) -
                    distance_at({world_p.x() - h, world_p.y()});
  const double dy = distance_at({world_p.x(), world_p.y() + h}) -
                    distance_at({world_p.x(), world_p.y() - h});
  return {dx / (2.0 * h), dy / (2.0 * h)};
}

void DistanceField::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write distance field: " + path);
  }
  out.write("DFLD", 4);
  const std::uint32_t w = static_cast<std::uint32_t>(width_);
  const std::uint32_t h = static_cast<std::uint32_t>(height_);
  out.write(reinterpret_cast<const char*>(&w), sizeof(w));
  out.write(reinterpret_cast<const char*>(&h), sizeof(h));
  const double header[4] = {resolution_, origin_.x, origin_.y, origin_.theta};
  out.write(reinterpret_cast<const char*>(header), sizeof(header));
  std::vector<float> row(width_);
  for (int cy = 0; cy < height_; ++cy) {
    for (int cx = 0; cx < width_; ++cx) {
      row[cx] = static_cast<float>(cell_value(cx, cy));
    }
    out.write(reinterpret_cast<const char*>(row.data()),
              static_cast<std::streamsize>(row.size() * sizeof(float)));
  }
}

double potential_of_distance(double d, const PotentialParams& params) {
  if (d < params.low_threshold) {
    return params.gain * (1.0 / params.low_threshold - 1.0 / params.high_threshold);
  }
  if (d < params.high_threshold) {
    return params.gain * (1.0 / d - 1.0 / params.high_threshold);
  }
  return 0.0;
}

double potential_slope(double d, const PotentialParams& params) {
  if (d >= params.low_threshold && d < params.high_threshold) {
    return -params.gain / (d * d);
  }
  return 0.0;
}

Eigen::Vector2d ObstacleField::distance_gradient(
    const Eigen::Vector2d& p) const {
  const double h = 0.5 * resolution();
  const double dx = distance_at({p.x() + h, p.y()}) -
                    distance_at({p.x() - h, p.y()});
  const double dy = distance_at({p.x(), p.y() + h}) -
                    distance_at({p.x(), p.y() - h});
  return {dx / (2.0 * h), dy / (2.0 * h)};
}

}  // namespace fgnav
