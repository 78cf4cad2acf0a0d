#include "fgnav/json_io.hpp"

#include <cmath>
#include <cstdio>

namespace fgnav {

using nlohmann::json;

json to_json(const OptimizeReport& report) {
  return json{{"iterations", report.iterations},
              {"final_cost", report.final_cost},
              {"converged", report.converged},
              {"per_iteration_cost", report.per_iteration_cost}};
}

json to_json(const ConstrainedReport& report) {
  json trace = json::array();
  for (const ViolationSample& v : report.violation_trace) {
    trace.push_back({{"eq", v.eq}, {"ineq", v.ineq}});
  }
  return json{{"iterations", report.iterations},
              {"final_cost", report.final_cost},
              {"converged", report.converged},
              {"max_eq_violation", report.max_eq_violation},
              {"max_ineq_violation", report.max_ineq_violation},
              {"per_iteration_cost", report.per_iteration_cost},
              {"violation_trace", trace}};
}

json to_json(const Se2Pose& pose) {
  return json{{"x", pose.x}, {"y", pose.y}, {"theta", pose.theta}};
}

json to_json(const Metrics& metrics) {
  return json{{"path_length_m", metrics.path_length},
              {"duration_s", metrics.duration},
              {"ape_trans", {{"mean", metrics.ape_translation.mean},
                             {"std", metrics.ape_translation.stddev}}},
              {"ape_rot", {{"mean", metrics.ape_rotation.mean},
                           {"std", metrics.ape_rotation.stddev}}},
              {"min_clearance", metrics.min_clearance}};
}

json to_json(const NavRun& run) {
  json goals = json::array();
  for (const GoalSpec& g : run.goals) {
    json entry{{"x", g.position.x()}, {"y", g.position.y()}};
    if (g.heading) {
      entry["theta"] = *g.heading;
    }
    goals.push_back(entry);
  }
  auto poses = [](const std::vector<TimedPose>& list) {
    json out = json::array();
    for (const TimedPose& p : list) {
      out.push_back({{"t", p.t},
                     {"x", p.pose.x},
                     {"y", p.pose.y},
                     {"theta", p.pose.theta}});
    }
    return out;
  };
  json controls = json::array();
  for (const TimedControl& c : run.controls) {
    controls.push_back({{"t", c.t},
                        {"v", c.commanded.v},
                        {"omega", c.commanded.omega},
                        {"noise_v", c.noise_v},
                        {"noise_omega", c.noise_omega}});
  }
  json events = json::array();
  for (const NavEvent& e : run.events) {
    events.push_back(
        {{"kind", e.kind == NavEvent::Kind::GoalReached ? "reached" : "aborted"},
         {"goal", e.goal_index},
         {"t", e.t}});
  }
  return json{{"goals", goals},
              {"ground_truth", poses(run.ground_truth)},
              {"estimated", poses(run.estimated)},
              {"controls", controls},
              {"events", events},
              {"min_clearance", run.min_clearance},
              {"safety_violation", run.safety_violation},
              {"mpc", {{"converged_solves", run.mpc_converged_solves},
                       {"failed_solves", run.mpc_failed_solves},
                       {"clamp_fired", run.mpc_clamp_fired}}}};
}

Scan scan_from_json(const json& j) {
  Scan scan;
  if (j.contains("points")) {
    for (const auto& p : j.at("points")) {
      scan.endpoints.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
    }
    if (j.contains("range_max")) {
      scan.max_range = j.at("range_max").get<double>();
    }
    return scan;
  }
  const double angle_min = j.at("angle_min").get<double>();
  const double increment = j.at("angle_increment").get<double>();
  scan.max_range = j.at("range_max").get<double>();
  int i = 0;
  for (const auto& r : j.at("ranges")) {
    const double range = r.get<double>();
    const double angle = angle_min + increment * i++;
    if (range > 0.0 && range < scan.max_range) {
      scan.endpoints.emplace_back(range * std::cos(angle),
                                  range * std::sin(angle));
    }
  }
  return scan;
}

std::vector<GoalSpec> goals_from_json(const json& j) {
  std::vector<GoalSpec> goals;
  for (const auto& g : j.at("goals")) {
    GoalSpec spec;
    spec.position = {g.at("x").get<double>(), g.at("y").get<double>()};
    if (g.contains("theta")) {
      spec.heading = g.at("theta").get<double>();
    }
    goals.push_back(spec);
  }
  return goals;
}

std::string metrics_csv_header() {
  return "episode,segment,path_length_m,duration_s,ape_trans_mean,"
         "ape_rot_mean,min_clearance\n";
}

std::string metrics_csv_row(int episode, int segment, const Metrics& m) {
  char buffer[256];
  std::snprintf(buffer, sizeof(buffer), "%d,%d,%.6f,%.6f,%.6f,%.6f,%.6f\n",
                episode, segment, m.path_length, m.duration,
                m.ape_translation.mean, m.ape_rotation.mean, m.min_clearance);
  return buffer;
}

}  // namespace fgnav
