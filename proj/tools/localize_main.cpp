// localize: register one scan against a map from an odometry prior.

#include <fstream>
#include <iostream>

#include "common.hpp"
#include "fgnav/json_io.hpp"

using namespace fgnav;

int main(int argc, char** argv) {
  CLI::App app{"Scan-to-map localization"};
  std::string map_path, scan_path, prior_text, config_path;
  app.add_option("--map", map_path, "map YAML")->required();
  app.add_option("--scan", scan_path, "scan JSON")->required();
  app.add_option("--prior", prior_text, "odometry prior \"x,y,theta\"")
      ->required();
  app.add_option("--cfg", config_path, "config file (TOML subset)");
  CLI11_PARSE(app, argc, argv);

  try {
    const ConfigFile cfg = tools::load_config_or_empty(config_path);
    const GridMap map = load_map(map_path);
    const DistanceField field =
        DistanceField::build(map, 2.0, UnknownPolicy::AsFree);

    std::ifstream scan_file(scan_path);
    if (!scan_file) {
      throw std::runtime_error("cannot open scan: " + scan_path);
    }
    const Scan scan = scan_from_json(nlohmann::json::parse(scan_file));

    OdometryPrior prior;
    prior.predicted_pose = tools::parse_pose(prior_text);
    double sigma_xy = 0.2, sigma_theta = 0.1;
    cfg.read("prior.sigma_xy", sigma_xy);
    cfg.read("prior.sigma_theta", sigma_theta);
    prior.information =
        Eigen::Vector3d(1.0 / (sigma_xy * sigma_xy), 1.0 / (sigma_xy * sigma_xy),
                        1.0 / (sigma_theta * sigma_theta))
            .asDiagonal();

    LocalizerConfig loc;
    loc.map_resolution_threshold = map.resolution;
    tools::apply_localizer(cfg, loc);

    SolverConfig solver;
    solver.max_iterations = 60;
    solver.step_halving = true;
    tools::apply_solver(cfg, "solver", solver);

    const LocalizeResult result = localize(scan, prior, field, loc, solver);
    nlohmann::json out{{"pose", to_json(result.pose)},
                       {"iterations", result.report.iterations},
                       {"converged", result.report.converged},
                       {"retained_endpoints", result.retained_endpoints},
                       {"cost", result.report.final_cost},
                       {"prior_only", result.prior_only},
                       {"fell_back_to_prior", result.fell_back_to_prior}};
    std::cout << out.dump(2) << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
