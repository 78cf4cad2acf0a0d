#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fgnav/se2.hpp"

namespace fgnav {

enum class CellState : std::uint8_t { Free = 0, Occupied = 1, Unknown = 2 };

/// 2D occupancy grid. Cell (0, 0) sits at `origin`; cell (cx, cy) covers the
/// square [cx, cx+1) x [cy, cy+1) in grid units of `resolution` meters.
/// Storage is row-major with x fastest.
struct GridMap {
  int width = 0;
  int height = 0;
  double resolution = 0.05;
  Se2Pose origin;
  std::vector<CellState> cells;

  static GridMap make(int width, int height, double resolution,
                      const Se2Pose& origin = {},
                      CellState fill = CellState::Free) {
    GridMap map;
    map.width = width;
    map.height = height;
    map.resolution = resolution;
    map.origin = origin;
    map.cells.assign(static_cast<size_t>(width) * height, fill);
    return map;
  }

  bool inside(int cx, int cy) const {
    return cx >= 0 && cx < width && cy >= 0 && cy < height;
  }

  CellState at(int cx, int cy) const {
    return cells[static_cast<size_t>(cy) * width + cx];
  }

  void set(int cx, int cy, CellState s) {
    cells[static_cast<size_t>(cy) * width + cx] = s;
  }

  /// World position of the center of cell (cx, cy).
  Eigen::Vector2d cell_center(int cx, int cy) const {
    return origin.transform({(cx + 0.5) * resolution, (cy + 0.5) * resolution});
  }

  /// Continuous grid coordinates (units of cells) of a world point.
  Eigen::Vector2d world_to_grid(const Eigen::Vector2d& p) const {
    return origin.inverse_transform(p) / resolution;
  }

  /// Cell containing a world point, or nullopt when outside the grid.
  std::optional<std::array<int, 2>> world_to_cell(
      const Eigen::Vector2d& p) const {
    const Eigen::Vector2d g = world_to_grid(p);
    const int cx = static_cast<int>(std::floor(g.x()));
    const int cy = static_cast<int>(std::floor(g.y()));
    if (!inside(cx, cy)) {
      return std::nullopt;
    }
    return std::array<int, 2>{cx, cy};
  }

  int count(CellState s) const {
    int n = 0;
    for (CellState c : cells) {
      if (c == s) {
        ++n;
      }
    }
    return n;
  }
};

/// Loads a map from a YAML sidecar pointing at a P5 PGM image, following the
/// usual map_server conventions (occupied_thresh / free_thresh / negate;
/// image row 0 is the top of the map, grid row 0 the bottom).
GridMap load_map(const std::string& yaml_path);

/// Writes the map as PGM (P5) + YAML sidecar. `pgm_path` is stored in the
/// YAML by filename, so keep the two files side by side.
void save_map(const GridMap& map, const std::string& yaml_path,
              const std::string& pgm_path);

}  // namespace fgnav
