#pragma once

#include <json.hpp>
#include <string>

#include "fgnav/constrained_solver.hpp"
#include "fgnav/localizer.hpp"
#include "fgnav/navigation.hpp"
#include "fgnav/solver.hpp"

namespace fgnav {

nlohmann::json to_json(const OptimizeReport& report);
nlohmann::json to_json(const ConstrainedReport& report);
nlohmann::json to_json(const Se2Pose& pose);
nlohmann::json to_json(const Metrics& metrics);
nlohmann::json to_json(const NavRun& run);

/// Scan JSON: either {angle_min, angle_increment, range_max, ranges: []}
/// (endpoints computed from the polar rays; ranges >= range_max are misses)
/// or {points: [[x, y], ...]}.
Scan scan_from_json(const nlohmann::json& j);

/// goals.json: {goals: [{x, y, theta?}, ...], loop: bool}. With loop, the
/// list is traversed `loops` times.
std::vector<GoalSpec> goals_from_json(const nlohmann::json& j);

/// Header line + one row per goal segment of each episode.
std::string metrics_csv_header();
std::string metrics_csv_row(int episode, int segment, const Metrics& metrics);

}  // namespace fgnav
