// navigate: closed-loop simulated navigation episodes and their reports.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>

#include "common.hpp"
#include "fgnav/json_io.hpp"
#include "fgnav/svg.hpp"

using namespace fgnav;

namespace {

int run_command(const std::string& map_path, const std::string& goals_path,
                std::uint64_t seed, int episodes, const std::string& out_dir,
                const std::string& config_path, const std::string& start_text,
                bool plot) {
  const ConfigFile cfg = tools::load_config_or_empty(config_path);

  SimWorld world;
  world.static_map = load_map(map_path);
  tools::apply_world(cfg, world);

  std::ifstream goals_file(goals_path);
  if (!goals_file) {
    throw std::runtime_error("cannot open goals: " + goals_path);
  }
  const auto goals_json = nlohmann::json::parse(goals_file);
  std::vector<GoalSpec> goals = goals_from_json(goals_json);
  if (goals_json.value("loop", false) && !goals.empty()) {
    goals.push_back(goals.front());  // close the circuit
  }

  NavConfig nav;
  nav.localizer.map_resolution_threshold = world.static_map.resolution;
  tools::apply_nav(cfg, nav);
  if (!start_text.empty()) {
    nav.start = tools::parse_pose(start_text);
  } else if (goals_json.contains("start")) {
    const auto& s = goals_json.at("start");
    nav.start = {s.at("x").get<double>(), s.at("y").get<double>(),
                 s.value("theta", 0.0)};
  } else {
    throw std::runtime_error("no start pose: pass --start or add a "
                             "\"start\" entry to the goals file");
  }

  std::filesystem::create_directories(out_dir);
  std::ofstream csv(std::filesystem::path(out_dir) / "aggregate.csv");
  csv << metrics_csv_header();

  for (int episode = 0; episode < episodes; ++episode) {
    world.rng_seed = seed + static_cast<std::uint64_t>(episode);
    const NavRun run = run_navigation(world, goals, nav);

    char name[64];
    std::snprintf(name, sizeof(name), "episode_%03d.json", episode);
    std::ofstream out(std::filesystem::path(out_dir) / name);
    out << to_json(run).dump(2) << "\n";

    const auto segments = compute_segment_metrics(run);
    for (size_t s = 0; s < segments.size(); ++s) {
      csv << metrics_csv_row(episode, static_cast<int>(s), segments[s]);
    }

    int reached = 0;
    for (const NavEvent& e : run.events) {
      reached += e.kind == NavEvent::Kind::GoalReached ? 1 : 0;
    }
    std::cout << "episode " << episode << ": " << reached << "/"
              << run.events.size() << " goals reached, "
              << run.mpc_failed_solves << " failed solves\n";

    if (plot && episode == 0) {
      const GridMap& map = world.static_map;
      SvgPlot svg(map.origin.x, map.origin.y,
                  map.origin.x + map.width * map.resolution,
                  map.origin.y + map.height * map.resolution);
      svg.add_map(map);
      std::vector<Eigen::Vector2d> gt, est;
      for (const TimedPose& p : run.ground_truth) {
        gt.push_back(p.pose.translation());
      }
      for (const TimedPose& p : run.estimated) {
        est.push_back(p.pose.translation());
      }
      svg.add_polyline(gt, "#1f77b4", 2.0);
      svg.add_polyline(est, "#ff7f0e", 1.5, true);
      for (size_t g = 0; g < goals.size(); ++g) {
        svg.add_circle(goals[g].position, nav.goal_tolerance, "#2ca02c");
        svg.add_label(goals[g].position, "g" + std::to_string(g));
      }
      svg.save((std::filesystem::path(out_dir) / "episode_000.svg").string());
    }
  }
  std::cout << "wrote " << out_dir << "\n";
  return 0;
}

struct Accumulator {
  std::vector<double> lengths;
  std::vector<double> durations;
};

int report_command(const std::string& dir) {
  std::ifstream csv(std::filesystem::path(dir) / "aggregate.csv");
  if (!csv) {
    throw std::runtime_error("no aggregate.csv under " + dir);
  }
  std::string line;
  std::getline(csv, line);  // header
  std::map<int, Accumulator> segments;
  while (std::getline(csv, line)) {
    std::stringstream row(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(row, field, ',')) {
      fields.push_back(field);
    }
    if (fields.size() < 4) {
      continue;
    }
    Accumulator& acc = segments[std::stoi(fields[1])];
    acc.lengths.push_back(std::stod(fields[2]));
    acc.durations.push_back(std::stod(fields[3]));
  }

  auto stats = [](const std::vector<double>& v) {
    double mean = 0.0;
    for (double x : v) {
      mean += x;
    }
    mean /= v.empty() ? 1.0 : v.size();
    double var = 0.0;
    for (double x : v) {
      var += (x - mean) * (x - mean);
    }
    var /= v.empty() ? 1.0 : v.size();
    return std::pair<double, double>(mean, std::sqrt(var));
  };

  std::cout << std::fixed << std::setprecision(2);
  std::cout << "segment |        path length (m) |          duration (s)\n";
  std::cout << "--------+------------------------+----------------------\n";
  for (const auto& [segment, acc] : segments) {
    const auto [lm, ls] = stats(acc.lengths);
    const auto [dm, ds] = stats(acc.durations);
    std::cout << std::setw(7) << segment << " | " << std::setw(8) << lm
              << " +- " << std::setw(5) << ls << " (" << std::setw(4)
              << (lm > 0 ? 100.0 * ls / lm : 0.0) << "%) | " << std::setw(7)
              << dm << " +- " << std::setw(5) << ds << " (" << std::setw(4)
              << (dm > 0 ? 100.0 * ds / dm : 0.0) << "%)\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulated factor-graph navigation"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run navigation episodes");
  std::string map_path, goals_path, out_dir = "runs", config_path, start_text;
  std::uint64_t seed = 0;
  int episodes = 1;
  bool plot = false;
  run->add_option("--map", map_path, "map YAML")->required();
  run->add_option("--goals", goals_path, "goals JSON")->required();
  run->add_option("--seed", seed, "base RNG seed");
  run->add_option("--episodes", episodes, "number of episodes");
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--cfg", config_path, "config file (TOML subset)");
  run->add_option("--start", start_text, "start pose \"x,y,theta\"");
  run->add_flag("--plot", plot, "write an SVG of the first episode");

  auto* report = app.add_subcommand("report", "summarize a run directory");
  std::string report_dir;
  report->add_option("dir", report_dir, "run directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(run)) {
      return run_command(map_path, goals_path, seed, episodes, out_dir,
                         config_path, start_text, plot);
    }
    return report_command(report_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
