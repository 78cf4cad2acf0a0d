// mpc: solve one constrained receding-horizon problem on a map.

#include <fstream>
#include <iostream>
#include <optional>

#include "common.hpp"
#include "fgnav/global_planner.hpp"
#include "fgnav/json_io.hpp"
#include "fgnav/mpc.hpp"
#include "fgnav/svg.hpp"

using namespace fgnav;

namespace {

/// obs.json: {"discs": [{"x","y","r"}], "boxes": [{"x0","y0","x1","y1"}]};
/// shapes are rasterized into an overlay grid at the map resolution.
std::optional<DistanceField> overlay_from_json(const GridMap& map,
                                               const std::string& path,
                                               double d_max) {
  if (path.empty()) {
    return std::nullopt;
  }
  std::ifstream file(path);
  if (!file) {
    throw std::runtime_error("cannot open obstacles: " + path);
  }
  const auto j = nlohmann::json::parse(file);
  GridMap local = GridMap::make(map.width, map.height, map.resolution,
                                map.origin, CellState::Free);
  for (int cy = 0; cy < local.height; ++cy) {
    for (int cx = 0; cx < local.width; ++cx) {
      const Eigen::Vector2d c = local.cell_center(cx, cy);
      bool hit = false;
      if (j.contains("discs")) {
        for (const auto& d : j.at("discs")) {
          const Eigen::Vector2d center(d.at("x").get<double>(),
                                       d.at("y").get<double>());
          hit = hit || (c - center).norm() <= d.at("r").get<double>();
        }
      }
      if (j.contains("boxes")) {
        for (const auto& b : j.at("boxes")) {
          hit = hit || (c.x() >= b.at("x0").get<double>() &&
                        c.x() <= b.at("x1").get<double>() &&
                        c.y() >= b.at("y0").get<double>() &&
                        c.y() <= b.at("y1").get<double>());
        }
      }
      if (hit) {
        local.set(cx, cy, CellState::Occupied);
      }
    }
  }
  return DistanceField::build(local, d_max, UnknownPolicy::AsFree,
                              FieldProvenance::DynamicOverlay);
}

void plot_solution(const std::string& path, const GridMap& map,
                   const ReferenceTrajectory& ref,
                   const MpcStepResult& result, const GlobalPath& plan) {
  const Eigen::Vector2d lo = map.origin.translation();
  const double span_x = map.width * map.resolution;
  const double span_y = map.height * map.resolution;
  SvgPlot plot(lo.x(), lo.y(), lo.x() + span_x, lo.y() + span_y);
  plot.add_map(map);
  plot.add_polyline(plan.waypoints, "#bbbbbb", 1.0, true);
  std::vector<Eigen::Vector2d> guess, optimized;
  for (const Se2Pose& p : ref.states) {
    guess.push_back(p.translation());
  }
  for (const Se2Pose& p : result.predicted) {
    optimized.push_back(p.translation());
  }
  plot.add_polyline(guess, "#2ca02c", 2.0, true);   // initial guess
  plot.add_polyline(optimized, "#1f77b4", 2.5);     // optimized horizon
  plot.add_marker(optimized.front(), "#d62728");
  plot.add_label(optimized.front(), "x0");
  plot.save(path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Factor-graph MPC"};
  app.require_subcommand(1);
  auto* solve = app.add_subcommand("solve", "solve one horizon");

  std::string map_path, start_text, goal_text, obstacles_path, config_path,
      plot_path;
  solve->add_option("--map", map_path, "map YAML")->required();
  solve->add_option("--start", start_text, "start pose \"x,y,theta\"")
      ->required();
  solve->add_option("--goal", goal_text, "goal \"x,y\" or \"x,y,theta\"")
      ->required();
  solve->add_option("--obstacles", obstacles_path, "unmapped obstacles JSON");
  solve->add_option("--cfg", config_path, "config file (TOML subset)");
  solve->add_option("--plot", plot_path, "write an SVG of the solution");

  CLI11_PARSE(app, argc, argv);

  try {
    const ConfigFile cfg = tools::load_config_or_empty(config_path);
    const GridMap map = load_map(map_path);
    const Se2Pose start = tools::parse_pose(start_text);
    const auto goal_numbers = tools::parse_csv_numbers(goal_text);
    if (goal_numbers.size() < 2 || goal_numbers.size() > 3) {
      throw std::runtime_error("goal must be \"x,y\" or \"x,y,theta\"");
    }
    const Eigen::Vector2d goal(goal_numbers[0], goal_numbers[1]);
    std::optional<double> goal_heading;
    if (goal_numbers.size() == 3) {
      goal_heading = goal_numbers[2];
    }

    MpcConfig mpc_config;
    tools::apply_mpc(cfg, mpc_config);
    ConstrainedSolverConfig solver;
    solver.max_outer_iterations = 400;
    solver.damping = 0.1;
    tools::apply_constrained_solver(cfg, "solver", solver);
    double inflation_radius = 0.25, d_max = 2.0;
    cfg.read("nav.inflation_radius", inflation_radius);
    cfg.read("nav.field_d_max", d_max);

    const DistanceField field_static =
        DistanceField::build(map, d_max, UnknownPolicy::AsOccupied);
    const auto overlay = overlay_from_json(map, obstacles_path, d_max);
    const ObstacleField field(field_static, overlay ? &*overlay : nullptr);

    const GlobalPath plan =
        plan_global(map, start.translation(), goal, inflation_radius);
    const ReferenceTrajectory ref =
        make_reference(plan, start, mpc_config, goal_heading);
    const MpcStepResult result =
        mpc_step(start, plan, field, mpc_config, solver, goal_heading);

    nlohmann::json controls = nlohmann::json::array();
    for (const ControlInput& u : result.controls) {
      controls.push_back({u.v, u.omega});
    }
    nlohmann::json states = nlohmann::json::array();
    for (const Se2Pose& p : result.predicted) {
      states.push_back({p.x, p.y, p.theta});
    }
    nlohmann::json out{{"controls", controls},
                       {"states", states},
                       {"command", {result.command.v, result.command.omega}},
                       {"converged", result.converged},
                       {"clamp_fired", result.clamp_fired},
                       {"report", to_json(result.report)}};
    std::cout << out.dump(2) << "\n";

    if (!plot_path.empty()) {
      plot_solution(plot_path, map, ref, result, plan);
      std::cerr << "wrote " << plot_path << "\n";
    }
    return result.converged ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
