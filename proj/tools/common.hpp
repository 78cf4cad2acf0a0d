#pragma once

// Shared helpers for the command-line tools: pose parsing and config-file
// application onto the library config structs.

#include <CLI11.hpp>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fgnav/config_file.hpp"
#include "fgnav/navigation.hpp"

namespace fgnav::tools {

/// Parses "x,y" or "x,y,theta".
inline std::vector<double> parse_csv_numbers(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string token;
  while (std::getline(in, token, ',')) {
    out.push_back(std::stod(token));
  }
  return out;
}

inline Se2Pose parse_pose(const std::string& text) {
  const auto v = parse_csv_numbers(text);
  if (v.size() != 3) {
    throw CLI::ValidationError("expected \"x,y,theta\", got: " + text);
  }
  return {v[0], v[1], v[2]};
}

inline void apply_solver(const ConfigFile& cfg, const std::string& prefix,
                         SolverConfig& out) {
  cfg.read(prefix + ".max_iterations", out.max_iterations);
  cfg.read(prefix + ".dx_tolerance", out.dx_tolerance);
  cfg.read(prefix + ".damping", out.damping);
  cfg.read(prefix + ".step_halving", out.step_halving);
}

inline void apply_constrained_solver(const ConfigFile& cfg,
                                     const std::string& prefix,
                                     ConstrainedSolverConfig& out) {
  cfg.read(prefix + ".inner_gn_iterations", out.inner_gn_iterations);
  cfg.read(prefix + ".max_outer_iterations", out.max_outer_iterations);
  cfg.read(prefix + ".dx_tolerance", out.dx_tolerance);
  cfg.read(prefix + ".eq_tolerance", out.eq_tolerance);
  cfg.read(prefix + ".ineq_tolerance", out.ineq_tolerance);
  cfg.read(prefix + ".rho_init", out.rho_init);
  cfg.read(prefix + ".rho_growth", out.rho_growth);
  cfg.read(prefix + ".rho_max", out.rho_max);
  cfg.read(prefix + ".damping", out.damping);
  cfg.read(prefix + ".step_halving", out.step_halving);
}

inline void apply_localizer(const ConfigFile& cfg, LocalizerConfig& out) {
  cfg.read("localizer.low_distance_scale", out.low_distance_scale);
  cfg.read("localizer.discard_distance", out.discard_distance);
  cfg.read("localizer.max_endpoint_range", out.max_endpoint_range);
}

inline void apply_potential(const ConfigFile& cfg, PotentialParams& out) {
  cfg.read("potential.gain", out.gain);
  cfg.read("potential.low_threshold", out.low_threshold);
  cfg.read("potential.high_threshold", out.high_threshold);
  cfg.read("potential.vortex_gain", out.vortex_gain);
}

inline void apply_mpc(const ConfigFile& cfg, MpcConfig& out) {
  cfg.read("mpc.horizon", out.horizon);
  cfg.read("mpc.ts", out.ts);
  cfg.read("mpc.v_max", out.v_max);
  cfg.read("mpc.omega_max", out.omega_max);
  cfg.read("mpc.v_ref", out.v_ref);
  cfg.read("mpc.obstacle_weight", out.obstacle_weight);
  if (const auto w = cfg.numbers("mpc.state_weights"); w && w->size() == 3) {
    out.state_weights = Eigen::Vector3d((*w)[0], (*w)[1], (*w)[2]);
  }
  if (const auto w = cfg.numbers("mpc.control_weights"); w && w->size() == 2) {
    out.control_weights = Eigen::Vector2d((*w)[0], (*w)[1]);
  }
  if (const auto w = cfg.numbers("mpc.motion_weights"); w && w->size() == 3) {
    out.motion_weights = Eigen::Vector3d((*w)[0], (*w)[1], (*w)[2]);
  }
  apply_potential(cfg, out.potential);
}

inline void apply_world(const ConfigFile& cfg, SimWorld& out) {
  cfg.read("lidar.n_beams", out.lidar.n_beams);
  cfg.read("lidar.fov", out.lidar.fov);
  cfg.read("lidar.max_range", out.lidar.max_range);
  cfg.read("lidar.noise_sigma", out.lidar.noise_sigma);
  cfg.read("odometry.sigma_v", out.odom_noise.sigma_v);
  cfg.read("odometry.sigma_omega", out.odom_noise.sigma_omega);
}

inline void apply_nav(const ConfigFile& cfg, NavConfig& out) {
  apply_mpc(cfg, out.mpc);
  apply_constrained_solver(cfg, "mpc_solver", out.mpc_solver);
  apply_localizer(cfg, out.localizer);
  apply_solver(cfg, "localizer_solver", out.localizer_solver);
  cfg.read("nav.goal_tolerance", out.goal_tolerance);
  cfg.read("nav.goal_heading_tolerance", out.goal_heading_tolerance);
  cfg.read("nav.goal_timeout", out.goal_timeout);
  cfg.read("nav.replan_period", out.replan_period);
  cfg.read("nav.inflation_radius", out.inflation_radius);
  cfg.read("nav.field_d_max", out.field_d_max);
}

inline ConfigFile load_config_or_empty(const std::string& path) {
  if (path.empty()) {
    return ConfigFile::parse("");
  }
  return ConfigFile::load(path);
}

}  // namespace fgnav::tools
