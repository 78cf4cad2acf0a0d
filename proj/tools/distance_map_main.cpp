// distance-map: precompute the nearest-obstacle distance field of a map.

#include <CLI11.hpp>
#include <iostream>

#include "fgnav/distance_field.hpp"
#include "fgnav/grid_map.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Distance-field tools"};
  app.require_subcommand(1);

  auto* build = app.add_subcommand("build", "build a field from a map");
  std::string map_path, out_path, unknown = "occupied";
  double d_max = 10.0;
  build->add_option("--map", map_path, "map YAML (PGM sidecar)")->required();
  build->add_option("--out", out_path, "output field (DFLD binary)")->required();
  build->add_option("--dmax", d_max, "distance clamp, meters");
  build->add_option("--unknown", unknown, "treat unknown cells as")
      ->check(CLI::IsMember({"occupied", "free"}));

  CLI11_PARSE(app, argc, argv);

  try {
    const fgnav::GridMap map = fgnav::load_map(map_path);
    const auto policy = unknown == "free" ? fgnav::UnknownPolicy::AsFree
                                          : fgnav::UnknownPolicy::AsOccupied;
    const fgnav::DistanceField field =
        fgnav::DistanceField::build(map, d_max, policy);
    field.save(out_path);
    std::cout << "wrote " << out_path << " (" << field.width() << "x"
              << field.height() << " @ " << field.resolution() << " m)\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
