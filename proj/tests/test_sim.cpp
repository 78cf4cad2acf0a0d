#include <doctest.h>

#include "fgnav/json_io.hpp"
#include "fgnav/navigation.hpp"
#include "helpers/worlds.hpp"

using namespace fgnav;
using fgnav::testing::make_room_world;

namespace {

NavConfig quick_nav_config(const SimWorld& world, const Se2Pose& start) {
  NavConfig cfg;
  cfg.start = start;
  cfg.localizer.map_resolution_threshold = world.static_map.resolution;
  cfg.goal_timeout = 30.0;
  return cfg;
}

}  // namespace

TEST_CASE("raycast_scan") {
  SimWorld world = make_room_world(10.0, 11);
  world.lidar.noise_sigma = 0.0;

  SUBCASE("beam perpendicular to a wall measures its distance") {
    world.lidar.n_beams = 1;
    const Se2Pose pose{2.0, 5.0, M_PI};  // west wall 2 m ahead
    const Scan scan = raycast_scan(world, pose);
    REQUIRE(scan.endpoints.size() == 1);
    CHECK(scan.endpoints[0].x() ==
          doctest::Approx(2.0).epsilon(world.static_map.resolution));
    CHECK(scan.endpoints[0].y() == doctest::Approx(0.0));
  }

  SUBCASE("beams into open space produce no endpoint") {
    world.lidar.n_beams = 1;
    world.lidar.max_range = 3.0;
    const Se2Pose pose{5.0, 5.0, 0.0};  // nearest wall 5 m away
    const Scan scan = raycast_scan(world, pose);
    CHECK(scan.endpoints.empty());
  }

  SUBCASE("same seed gives an identical scan") {
    world.lidar.noise_sigma = 0.02;
    const Se2Pose pose{4.0, 6.0, 0.7};
    const Scan a = raycast_scan(world, pose);
    const Scan b = raycast_scan(world, pose);
    REQUIRE(a.endpoints.size() == b.endpoints.size());
    for (size_t i = 0; i < a.endpoints.size(); ++i) {
      CHECK(a.endpoints[i] == b.endpoints[i]);
    }
  }

  SUBCASE("disc obstacles intercept beams") {
    world.lidar.n_beams = 1;
    world.discs.push_back({{4.0, 5.0}, 0.5});
    const Se2Pose pose{2.0, 5.0, 0.0};
    const Scan scan = raycast_scan(world, pose);
    REQUIRE(scan.endpoints.size() == 1);
    CHECK(scan.endpoints[0].x() == doctest::Approx(1.5));
  }
}

TEST_CASE("compute_metrics") {
  NavRun run;
  run.min_clearance = 0.4;

  SUBCASE("path length sums ground-truth displacements") {
    for (int i = 0; i < 3; ++i) {
      run.ground_truth.push_back({0.1 * i, {1.0 * i, 0.0, 0.0}});
      run.estimated.push_back({0.1 * i, {1.0 * i, 0.0, 0.0}});
    }
    const Metrics m = compute_metrics(run);
    CHECK(m.path_length == doctest::Approx(2.0));
    CHECK(m.duration == doctest::Approx(0.2));
    CHECK(m.ape_translation.mean == doctest::Approx(0.0));
    CHECK(m.ape_rotation.mean == doctest::Approx(0.0));
  }

  SUBCASE("constant offset shows up as mean with zero deviation") {
    for (int i = 0; i < 5; ++i) {
      run.ground_truth.push_back({0.1 * i, {1.0 * i, 2.0, 0.3}});
      run.estimated.push_back({0.1 * i, {1.0 * i + 0.1, 2.0, 0.3}});
    }
    const Metrics m = compute_metrics(run);
    CHECK(m.ape_translation.mean == doctest::Approx(0.1));
    CHECK(m.ape_translation.stddev == doctest::Approx(0.0));
  }

  SUBCASE("mismatched timestamps are a contract violation") {
    run.ground_truth.push_back({0.0, {}});
    run.estimated.push_back({0.5, {}});
    CHECK_THROWS_AS(compute_metrics(run), std::invalid_argument);
  }

  SUBCASE("empty trajectories are rejected") {
    CHECK_THROWS_AS(compute_metrics(run), std::invalid_argument);
  }
}

TEST_CASE("run_navigation reaches a goal straight ahead") {
  SimWorld world = make_room_world(10.0, 7001);
  const NavConfig cfg = quick_nav_config(world, {3.0, 5.0, 0.0});
  const NavRun run = run_navigation(world, {{{6.0, 5.0}, {}}}, cfg);

  REQUIRE(run.events.size() == 1);
  CHECK(run.events[0].kind == NavEvent::Kind::GoalReached);
  const Metrics m = compute_metrics(run);
  // The episode ends once the estimate enters the 0.2 m goal ball, so the
  // ground-truth length runs a little under the 3 m straight line.
  CHECK(m.path_length >= 3.0 - cfg.goal_tolerance - 0.1);
  CHECK(m.path_length <= 3.6);
  CHECK(run.safety_violation == false);
  CHECK(run.min_clearance >= 0.0);
  CHECK(run.mpc_clamp_fired == 0);

  SUBCASE("recorded controls respect the limits") {
    for (const TimedControl& c : run.controls) {
      CHECK(std::abs(c.commanded.v) <= cfg.mpc.v_max);
      CHECK(std::abs(c.commanded.omega) <= cfg.mpc.omega_max);
    }
  }

  SUBCASE("ground truth replays from the recorded controls and noise") {
    REQUIRE(run.ground_truth.size() == run.controls.size() + 1);
    Se2Pose pose = run.ground_truth.front().pose;
    for (size_t k = 0; k < run.controls.size(); ++k) {
      const TimedControl& c = run.controls[k];
      pose = unicycle_step(pose,
                           {c.commanded.v + c.noise_v,
                            c.commanded.omega + c.noise_omega},
                           cfg.mpc.ts);
      CHECK(distance(pose, run.ground_truth[k + 1].pose) < 1e-9);
      CHECK(std::abs(wrap_angle(pose.theta -
                                run.ground_truth[k + 1].pose.theta)) < 1e-9);
    }
  }
}

TEST_CASE("run_navigation generates backward motion for a goal behind") {
  SimWorld world = make_room_world(10.0, 7002);
  const NavConfig cfg = quick_nav_config(world, {6.0, 5.0, 0.0});
  const NavRun run = run_navigation(world, {{{3.5, 5.0}, {}}}, cfg);
  REQUIRE(run.events.size() == 1);
  CHECK(run.events[0].kind == NavEvent::Kind::GoalReached);
  bool any_backward = false;
  for (const TimedControl& c : run.controls) {
    any_backward = any_backward || c.commanded.v < -0.01;
  }
  CHECK(any_backward);
}

TEST_CASE("run_navigation avoids an unmapped disc on the route") {
  SimWorld world = make_room_world(10.0, 7003);
  world.discs.push_back({{4.5, 5.0}, 0.3});
  NavConfig cfg = quick_nav_config(world, {3.0, 5.0, 0.0});
  cfg.goal_timeout = 45.0;
  const NavRun run = run_navigation(world, {{{6.5, 5.0}, {}}}, cfg);
  REQUIRE(run.events.size() == 1);
  CHECK(run.events[0].kind == NavEvent::Kind::GoalReached);
  CHECK(run.safety_violation == false);
  CHECK(run.min_clearance >= cfg.mpc.potential.low_threshold);
}

TEST_CASE("unreachable goals abort and the run continues") {
  SimWorld world = make_room_world(10.0, 7004);
  fgnav::testing::fill_box(world.static_map, 7.0, 0.0, 7.2, 10.0);  // full wall
  NavConfig cfg = quick_nav_config(world, {3.0, 5.0, 0.0});
  cfg.goal_timeout = 5.0;
  const NavRun run = run_navigation(
      world, {{{8.5, 5.0}, {}}, {{4.0, 5.0}, {}}}, cfg);
  REQUIRE(run.events.size() == 2);
  CHECK(run.events[0].kind == NavEvent::Kind::GoalAborted);
  CHECK(run.events[1].kind == NavEvent::Kind::GoalReached);
}

TEST_CASE("identical seeds give byte-identical runs") {
  SimWorld world = make_room_world(8.0, 7005);
  world.discs.push_back({{4.1, 4.2}, 0.25});
  const NavConfig cfg = quick_nav_config(world, {2.0, 4.0, 0.2});
  const std::vector<GoalSpec> goals{{{6.0, 4.0}, {}}};
  const NavRun a = run_navigation(world, goals, cfg);
  const NavRun b = run_navigation(world, goals, cfg);
  CHECK(to_json(a).dump() == to_json(b).dump());

  SimWorld other = world;
  other.rng_seed = 7006;
  const NavRun c = run_navigation(other, goals, cfg);
  CHECK(to_json(a).dump() != to_json(c).dump());
}

TEST_CASE("segment metrics split at goal events") {
  SimWorld world = make_room_world(10.0, 7007);
  const NavConfig cfg = quick_nav_config(world, {3.0, 5.0, 0.0});
  const NavRun run =
      run_navigation(world, {{{5.0, 5.0}, {}}, {{5.0, 7.0}, {}}}, cfg);
  REQUIRE(run.events.size() == 2);
  const auto segments = compute_segment_metrics(run);
  REQUIRE(segments.size() == 2);
  CHECK(segments[0].path_length >= 1.5);
  CHECK(segments[1].path_length >= 1.5);
  const Metrics whole = compute_metrics(run);
  CHECK(whole.path_length ==
        doctest::Approx(segments[0].path_length + segments[1].path_length)
            .epsilon(0.1));
}
