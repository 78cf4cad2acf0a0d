#include <doctest.h>

#include <random>

#include "fgnav/localizer.hpp"
#include "fgnav/sim_world.hpp"
#include "helpers/worlds.hpp"

using namespace fgnav;
using fgnav::testing::make_room_world;
using fgnav::testing::make_square_room;

namespace {

LocalizerConfig room_config(const GridMap& map) {
  LocalizerConfig cfg;
  cfg.map_resolution_threshold = map.resolution;
  return cfg;
}

SolverConfig localization_solver() {
  SolverConfig cfg;
  cfg.max_iterations = 60;
  cfg.step_halving = true;
  return cfg;
}

}  // namespace

TEST_CASE("build_localization_graph filters endpoints") {
  SimWorld world = make_room_world(6.0, 5);
  world.static_map = make_square_room(6.0, 0.05, 0.05);
  world.lidar.noise_sigma = 0.0;
  const DistanceField field = DistanceField::build(
      world.static_map, 2.0, UnknownPolicy::AsFree);
  const LocalizerConfig cfg = room_config(world.static_map);
  const Se2Pose truth{3.0, 3.0, 0.3};
  OdometryPrior prior;
  prior.predicted_pose = truth;

  SUBCASE("far endpoints contribute no factor") {
    Scan scan;
    scan.endpoints = {{12.0, 0.0}, {2.9, 0.0}};
    const FactorGraph g = build_localization_graph(scan, prior, field, cfg);
    CHECK(g.num_factors() == 2);  // prior + one endpoint
  }

  SUBCASE("a perfectly localized scan has near-zero cost") {
    const Scan scan = raycast_scan(world, truth);
    const FactorGraph g = build_localization_graph(scan, prior, field, cfg);
    CHECK(count_retained_endpoints(g) > 100);
    // Raycast endpoints sit on cell boundaries, half a cell from the nearest
    // occupied center, so each retained factor costs about
    // Omega * (0.5 * res/2)^2 = 0.0625.
    CHECK(total_cost(g) < 0.15 * count_retained_endpoints(g));
    for (const CostFactor& f : g.factors()) {
      if (f.residual_dim != 1) {
        continue;
      }
      const auto e = f.error(g.values_of(f.variables));
      if (e) {
        CHECK(std::abs((*e)[0]) < world.static_map.resolution);
      }
    }
  }

  SUBCASE("an endpoint on an unmapped obstacle is discarded") {
    Scan scan;
    scan.endpoints = {{1.0, 0.0}};  // lands mid-room, d >= 0.3 there
    const FactorGraph g = build_localization_graph(scan, prior, field, cfg);
    CHECK(count_retained_endpoints(g) == 0);
  }

  SUBCASE("the overlay field is rejected") {
    const DistanceField overlay = DistanceField::build(
        world.static_map, 2.0, UnknownPolicy::AsFree,
        FieldProvenance::DynamicOverlay);
    Scan scan;
    CHECK_THROWS_AS(build_localization_graph(scan, prior, overlay, cfg),
                    std::invalid_argument);
  }

  SUBCASE("lowering discard_distance never retains more endpoints") {
    const Scan scan = raycast_scan(world, truth);
    LocalizerConfig loose = cfg;
    loose.discard_distance = 0.3;
    LocalizerConfig tight = cfg;
    tight.discard_distance = 0.15;
    const int n_loose = count_retained_endpoints(
        build_localization_graph(scan, prior, field, loose));
    const int n_tight = count_retained_endpoints(
        build_localization_graph(scan, prior, field, tight));
    CHECK(n_tight <= n_loose);
  }
}

TEST_CASE("localize") {
  SimWorld world = make_room_world(6.0, 6);
  world.static_map = make_square_room(6.0, 0.05, 0.05);
  world.lidar.noise_sigma = 0.0;
  const DistanceField field = DistanceField::build(
      world.static_map, 2.0, UnknownPolicy::AsFree);
  const LocalizerConfig cfg = room_config(world.static_map);
  const Se2Pose truth{2.5, 3.2, 0.4};
  const Scan scan = raycast_scan(world, truth);

  SUBCASE("recovers the pose from a perturbed prior") {
    OdometryPrior prior;
    prior.predicted_pose = {truth.x + 0.15, truth.y - 0.1, truth.theta + 0.05};
    SolverConfig run_to_convergence = localization_solver();
    run_to_convergence.max_iterations = 300;
    const LocalizeResult result =
        localize(scan, prior, field, cfg, run_to_convergence);
    CHECK_FALSE(result.fell_back_to_prior);
    CHECK(std::abs(result.pose.x - truth.x) < 0.02);
    CHECK(std::abs(result.pose.y - truth.y) < 0.02);
    CHECK(std::abs(wrap_angle(result.pose.theta - truth.theta)) < 0.01);
  }

  SUBCASE("prior already at ground truth barely moves") {
    OdometryPrior prior;
    prior.predicted_pose = truth;
    const LocalizeResult result =
        localize(scan, prior, field, cfg, localization_solver());
    CHECK(distance(result.pose, truth) < 1e-2);
    CHECK(result.report.converged);
  }

  SUBCASE("empty scan returns the prior mean") {
    OdometryPrior prior;
    prior.predicted_pose = {1.0, 2.0, 0.5};
    const LocalizeResult result =
        localize(Scan{}, prior, field, cfg, localization_solver());
    CHECK(result.prior_only);
    CHECK(result.pose.x == doctest::Approx(1.0));
    CHECK(result.pose.y == doctest::Approx(2.0));
    CHECK(result.pose.theta == doctest::Approx(0.5));
  }

  SUBCASE("singular system falls back to the prior with a flag") {
    OdometryPrior prior;
    prior.predicted_pose = {1.0, 2.0, 0.5};
    prior.information.setZero();  // nothing pins the pose
    const LocalizeResult result =
        localize(Scan{}, prior, field, cfg, localization_solver());
    CHECK(result.fell_back_to_prior);
    CHECK(result.pose.x == doctest::Approx(1.0));
  }

  SUBCASE("cost at the solution does not exceed cost at the prior") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> jitter(-0.15, 0.15);
    for (int trial = 0; trial < 5; ++trial) {
      OdometryPrior prior;
      prior.predicted_pose = {truth.x + jitter(rng), truth.y + jitter(rng),
                              truth.theta + jitter(rng) / 2.0};
      FactorGraph graph = build_localization_graph(scan, prior, field, cfg);
      const double cost_at_prior = total_cost(graph);
      const LocalizeResult result =
          localize(scan, prior, field, cfg, localization_solver());
      FactorGraph at_solution =
          build_localization_graph(scan, prior, field, cfg);
      at_solution.variable(0) = Variable::se2(result.pose);
      CHECK(total_cost(at_solution) <= cost_at_prior + 1e-9);
    }
  }
}

TEST_CASE("localization is equivariant under rigid shifts of the frame") {
  SimWorld world = make_room_world(6.0, 7);
  world.static_map = make_square_room(6.0, 0.05, 0.05);
  world.lidar.noise_sigma = 0.0;
  const Se2Pose truth{2.2, 2.8, -0.3};
  const Scan scan = raycast_scan(world, truth);
  const LocalizerConfig cfg = room_config(world.static_map);

  const DistanceField field = DistanceField::build(
      world.static_map, 2.0, UnknownPolicy::AsFree);
  OdometryPrior prior;
  prior.predicted_pose = {truth.x + 0.1, truth.y - 0.08, truth.theta + 0.04};
  const LocalizeResult base =
      localize(scan, prior, field, cfg, localization_solver());

  const Eigen::Vector2d shift(13.5, -4.25);
  GridMap shifted_map = world.static_map;
  shifted_map.origin.x += shift.x();
  shifted_map.origin.y += shift.y();
  const DistanceField shifted_field =
      DistanceField::build(shifted_map, 2.0, UnknownPolicy::AsFree);
  OdometryPrior shifted_prior = prior;
  shifted_prior.predicted_pose.x += shift.x();
  shifted_prior.predicted_pose.y += shift.y();
  const LocalizeResult moved = localize(scan, shifted_prior, shifted_field,
                                        cfg, localization_solver());

  CHECK(moved.pose.x - base.pose.x == doctest::Approx(shift.x()).epsilon(1e-6));
  CHECK(moved.pose.y - base.pose.y == doctest::Approx(shift.y()).epsilon(1e-6));
  CHECK(wrap_angle(moved.pose.theta - base.pose.theta) ==
        doctest::Approx(0.0).epsilon(1e-6));
}
