#include <doctest.h>

#include <random>

#include "fgnav/global_planner.hpp"
#include "fgnav/reference.hpp"
#include "fgnav/unicycle.hpp"
#include "helpers/oracles.hpp"
#include "helpers/worlds.hpp"

using namespace fgnav;

TEST_CASE("unicycle_step integrates the kinematics") {
  SUBCASE("straight motion") {
    const Se2Pose next = unicycle_step({0, 0, 0}, {1.0, 0.0}, 0.1);
    CHECK(next.x == doctest::Approx(0.1));
    CHECK(next.y == doctest::Approx(0.0));
    CHECK(next.theta == doctest::Approx(0.0));
  }
  SUBCASE("pure rotation") {
    const Se2Pose next = unicycle_step({0, 0, 0}, {0.0, 1.0}, 0.1);
    CHECK(next.x == doctest::Approx(0.0));
    CHECK(next.y == doctest::Approx(0.0));
    CHECK(next.theta == doctest::Approx(0.1));
  }
  SUBCASE("arc motion uses the midpoint heading") {
    const Se2Pose next = unicycle_step({0, 0, 0}, {1.0, 1.0}, 0.1);
    CHECK(next.x == doctest::Approx(0.1 * std::cos(0.05)));
    CHECK(next.y == doctest::Approx(0.1 * std::sin(0.05)));
    CHECK(next.theta == doctest::Approx(0.1));
  }
  SUBCASE("heading wraps") {
    const Se2Pose next = unicycle_step({0, 0, 3.1}, {0.0, 1.0}, 0.1);
    CHECK(next.theta == doctest::Approx(3.2 - 2.0 * M_PI));
  }
}

TEST_CASE("unicycle jacobians match central differences") {
  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const double h = 1e-6;
  for (int trial = 0; trial < 100; ++trial) {
    const Se2Pose x{3.0 * unit(rng), 3.0 * unit(rng), M_PI * unit(rng)};
    const ControlInput u{unit(rng), unit(rng)};
    const double dt = 0.05 + 0.1 * std::abs(unit(rng));

    Eigen::Matrix3d df_dx;
    Eigen::Matrix<double, 3, 2> df_du;
    unicycle_jacobians(x, u, dt, df_dx, df_du);

    auto flow = [&](const Eigen::Vector3d& state, const Eigen::Vector2d& ctrl) {
      // Unwrapped variant; the wrap only moves the result by 2 pi.
      const double mid = state.z() + 0.5 * ctrl.y() * dt;
      return Eigen::Vector3d(state.x() + ctrl.x() * dt * std::cos(mid),
                             state.y() + ctrl.x() * dt * std::sin(mid),
                             state.z() + ctrl.y() * dt);
    };
    const Eigen::Vector3d x0 = x.to_vector();
    const Eigen::Vector2d u0 = u.to_vector();
    for (int i = 0; i < 3; ++i) {
      Eigen::Vector3d plus = x0, minus = x0;
      plus[i] += h;
      minus[i] -= h;
      const Eigen::Vector3d fd = (flow(plus, u0) - flow(minus, u0)) / (2 * h);
      CHECK((fd - df_dx.col(i)).norm() < 1e-6);
    }
    for (int i = 0; i < 2; ++i) {
      Eigen::Vector2d plus = u0, minus = u0;
      plus[i] += h;
      minus[i] -= h;
      const Eigen::Vector3d fd = (flow(x0, plus) - flow(x0, minus)) / (2 * h);
      CHECK((fd - df_du.col(i)).norm() < 1e-6);
    }
  }
}

TEST_CASE("plan_global") {
  SUBCASE("straight line on an empty map") {
    GridMap map = GridMap::make(10, 10, 1.0);
    const GlobalPath path = plan_global(map, {0.0, 0.0}, {0.0, 9.0}, 0.0);
    CHECK(path.total_length == doctest::Approx(9.0));
    CHECK(path.waypoints.size() == 10);
  }

  SUBCASE("passes through a gap and matches the reference oracle") {
    GridMap map = GridMap::make(20, 20, 0.5);
    for (int cx = 0; cx < 20; ++cx) {
      if (cx != 10) {
        map.set(cx, 10, CellState::Occupied);
      }
    }
    const Eigen::Vector2d start = map.cell_center(3, 2);
    const Eigen::Vector2d goal = map.cell_center(16, 17);
    const GlobalPath path = plan_global(map, start, goal, 0.0);

    for (const Eigen::Vector2d& wp : path.waypoints) {
      const auto cell = map.world_to_cell(wp);
      REQUIRE(cell.has_value());
      CHECK(map.at((*cell)[0], (*cell)[1]) == CellState::Free);
    }
    std::vector<bool> blocked(400, false);
    for (int i = 0; i < 400; ++i) {
      blocked[i] = map.cells[i] != CellState::Free;
    }
    const double expected = fgnav::testing::dijkstra_reference_length(
        map, blocked, 2 * 20 + 3, 17 * 20 + 16);
    CHECK(path.total_length == doctest::Approx(expected).epsilon(1e-12));
  }

  SUBCASE("consecutive waypoints are 8-connected neighbors") {
    GridMap map = GridMap::make(15, 15, 0.25);
    map.set(7, 7, CellState::Occupied);
    const GlobalPath path =
        plan_global(map, map.cell_center(1, 1), map.cell_center(13, 13), 0.3);
    for (size_t i = 1; i < path.waypoints.size(); ++i) {
      const double step = (path.waypoints[i] - path.waypoints[i - 1]).norm();
      CHECK(step <= std::sqrt(2.0) * map.resolution + 1e-12);
    }
  }

  SUBCASE("unreachable goal raises a no-path error") {
    GridMap map = GridMap::make(11, 11, 1.0);
    for (int c = 0; c < 11; ++c) {
      map.set(5, c, CellState::Occupied);  // full wall
    }
    CHECK_THROWS_AS(plan_global(map, {1.0, 1.0}, {9.0, 9.0}, 0.0), NoPathError);
  }

  SUBCASE("endpoints in collision raise a distinct error") {
    GridMap map = GridMap::make(11, 11, 1.0);
    map.set(2, 2, CellState::Occupied);
    CHECK_THROWS_AS(plan_global(map, {2.5, 2.5}, {9.0, 9.0}, 0.0),
                    InvalidEndpointError);
    CHECK_THROWS_AS(plan_global(map, {9.0, 9.0}, {30.0, 2.5}, 0.0),
                    InvalidEndpointError);
  }

  SUBCASE("inflation blocks narrow passages") {
    GridMap map = GridMap::make(21, 21, 0.1);
    for (int cx = 0; cx < 21; ++cx) {
      if (cx < 9 || cx > 11) {
        map.set(cx, 10, CellState::Occupied);  // 0.3 m gap
      }
    }
    const Eigen::Vector2d start = map.cell_center(10, 2);
    const Eigen::Vector2d goal = map.cell_center(10, 18);
    CHECK_NOTHROW(plan_global(map, start, goal, 0.05));
    CHECK_THROWS_AS(plan_global(map, start, goal, 0.4), NoPathError);
  }
}

TEST_CASE("make_reference") {
  MpcConfig cfg;
  cfg.horizon = 10;
  cfg.ts = 0.1;
  cfg.v_ref = 1.0;

  SUBCASE("resamples a straight path at arc-length spacing") {
    GlobalPath path;
    path.waypoints = {{0.0, 0.0}, {10.0, 0.0}};
    path.total_length = 10.0;
    const ReferenceTrajectory ref =
        make_reference(path, {0.0, 0.0, 0.0}, cfg);
    REQUIRE(ref.states.size() == 11);
    REQUIRE(ref.controls.size() == 10);
    for (int n = 0; n <= 10; ++n) {
      CHECK(ref.states[n].x == doctest::Approx(0.1 * n));
      CHECK(ref.states[n].y == doctest::Approx(0.0));
      CHECK(ref.states[n].theta == doctest::Approx(0.0));
    }
    for (const ControlInput& u : ref.controls) {
      CHECK(u.v == doctest::Approx(1.0));
      CHECK(u.omega == doctest::Approx(0.0));
    }
  }

  SUBCASE("robot at the path end clamps everything to the goal") {
    GlobalPath path;
    path.waypoints = {{0.0, 0.0}, {2.0, 0.0}};
    path.total_length = 2.0;
    const ReferenceTrajectory ref =
        make_reference(path, {2.0, 0.0, 0.4}, cfg);
    for (const Se2Pose& s : ref.states) {
      CHECK(s.x == doctest::Approx(2.0));
      CHECK(s.y == doctest::Approx(0.0));
    }
    for (const ControlInput& u : ref.controls) {
      CHECK(u.v == doctest::Approx(0.0));
    }
  }

  SUBCASE("short paths pad the tail with the goal") {
    GlobalPath path;
    path.waypoints = {{0.0, 0.0}, {0.45, 0.0}};
    path.total_length = 0.45;
    const ReferenceTrajectory ref =
        make_reference(path, {0.0, 0.0, 0.0}, cfg);
    for (int n = 5; n <= 10; ++n) {
      CHECK(ref.states[n].x == doctest::Approx(0.45));
    }
    for (int n = 5; n < 10; ++n) {
      CHECK(ref.controls[n].v == doctest::Approx(0.0));
    }
    CHECK(ref.controls[0].v == doctest::Approx(1.0));
  }

  SUBCASE("goal heading pins the terminal reference") {
    GlobalPath path;
    path.waypoints = {{0.0, 0.0}, {1.0, 0.0}};
    path.total_length = 1.0;
    const ReferenceTrajectory free =
        make_reference(path, {0.0, 0.0, 0.0}, cfg);
    CHECK(free.goal_heading_free);
    const ReferenceTrajectory pinned =
        make_reference(path, {0.0, 0.0, 0.0}, cfg, 1.2);
    CHECK_FALSE(pinned.goal_heading_free);
    CHECK(pinned.states.back().theta == doctest::Approx(1.2));
  }
}
