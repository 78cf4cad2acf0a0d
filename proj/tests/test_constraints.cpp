#include <doctest.h>

#include <random>

#include "fgnav/constrained_solver.hpp"
#include "helpers/oracles.hpp"

using namespace fgnav;
using fgnav::testing::make_linear_constraint;
using fgnav::testing::make_linear_factor;
using fgnav::testing::make_random_qp;
using fgnav::testing::solve_qp_active_set;

namespace {

/// r = x - offset on a single scalar variable.
ConstraintBlock scalar_constraint(VariableId id, double offset,
                                  ConstraintKind kind, double rho = 1.0,
                                  double lambda = 0.0) {
  ConstraintBlock block = make_linear_constraint(
      {id}, {Eigen::MatrixXd::Identity(1, 1)},
      Eigen::VectorXd::Constant(1, -offset), kind);
  block.penalty = rho;
  block.multiplier[0] = lambda;
  return block;
}

CostFactor quadratic_pull(VariableId id, double target, double weight = 1.0) {
  return make_linear_factor({id}, {Eigen::MatrixXd::Identity(1, 1)},
                            Eigen::VectorXd::Constant(1, target),
                            Eigen::MatrixXd::Constant(1, 1, weight));
}

}  // namespace

TEST_CASE("constraint_contribution matches the hand-computed terms") {
  FactorGraph g;
  const VariableId x = g.add_vector_variable(Eigen::VectorXd::Zero(1));

  SUBCASE("equality away from the target") {
    const auto block = scalar_constraint(x, 2.0, ConstraintKind::Equality, 2.0);
    const SystemTerm term = constraint_contribution(block, g.values_of({x}));
    CHECK(term.hessian(0, 0) == doctest::Approx(1.0));
    CHECK(term.gradient[0] == doctest::Approx(-2.0));
  }

  SUBCASE("equality at the target with a multiplier") {
    g.variable(x).value[0] = 2.0;
    const auto block =
        scalar_constraint(x, 2.0, ConstraintKind::Equality, 2.0, 4.0);
    const SystemTerm term = constraint_contribution(block, g.values_of({x}));
    CHECK(term.hessian(0, 0) == doctest::Approx(1.0));
    CHECK(term.gradient[0] == doctest::Approx(2.0));
  }

  SUBCASE("satisfied inactive inequality adds nothing") {
    const auto block = scalar_constraint(x, 1.0, ConstraintKind::Inequality);
    const SystemTerm term = constraint_contribution(block, g.values_of({x}));
    CHECK(term.hessian.norm() == doctest::Approx(0.0));
    CHECK(term.gradient.norm() == doctest::Approx(0.0));
  }
}

TEST_CASE("constraint insertion validates the block invariants") {
  FactorGraph g;
  const VariableId x = g.add_vector_variable(Eigen::VectorXd::Zero(1));
  auto block = scalar_constraint(x, 1.0, ConstraintKind::Inequality);
  block.multiplier[0] = -0.5;
  CHECK_THROWS_AS(g.add_constraint(block), std::invalid_argument);
  block.multiplier[0] = 0.0;
  block.penalty = 0.0;
  CHECK_THROWS_AS(g.add_constraint(block), std::invalid_argument);
  block.penalty = 1.0;
  CHECK_NOTHROW(g.add_constraint(block));
}

TEST_CASE("dual_update follows the multiplier laws") {
  FactorGraph g;
  const VariableId x = g.add_vector_variable(Eigen::VectorXd::Zero(1));

  SUBCASE("inequality accumulates on violation") {
    g.variable(x).value[0] = 1.5;  // r = 0.5
    const auto block = scalar_constraint(x, 1.0, ConstraintKind::Inequality);
    CHECK(dual_update(block, g.values_of({x}))[0] == doctest::Approx(0.5));
  }

  SUBCASE("inequality clamps at zero") {
    g.variable(x).value[0] = 0.0;  // r = -1
    const auto block =
        scalar_constraint(x, 1.0, ConstraintKind::Inequality, 1.0, 0.2);
    CHECK(dual_update(block, g.values_of({x}))[0] == doctest::Approx(0.0));
  }

  SUBCASE("equality update is unclamped") {
    g.variable(x).value[0] = 0.75;  // r = -0.25
    const auto block =
        scalar_constraint(x, 1.0, ConstraintKind::Equality, 2.0, 1.0);
    CHECK(dual_update(block, g.values_of({x}))[0] == doctest::Approx(0.5));
  }
}

TEST_CASE("optimize_constrained solves small problems") {
  SUBCASE("quadratic with an active upper bound") {
    FactorGraph g;
    const VariableId x = g.add_vector_variable(Eigen::VectorXd::Zero(1));
    g.add_factor(quadratic_pull(x, 3.0));
    g.add_constraint(scalar_constraint(x, 1.0, ConstraintKind::Inequality));
    ConstrainedSolverConfig cfg;
    cfg.max_outer_iterations = 300;
    const ConstrainedReport report = optimize_constrained(g, cfg);
    CHECK(report.converged);
    CHECK(g.variable(x).value[0] == doctest::Approx(1.0).epsilon(1e-3));
    // Stationarity at x = 1: 2 (x - 3) + lambda = 0.
    CHECK(g.constraints()[0].multiplier[0] == doctest::Approx(4.0).epsilon(1e-2));
  }

  SUBCASE("equality forces the solution") {
    FactorGraph g;
    const VariableId x = g.add_vector_variable(Eigen::VectorXd::Zero(1));
    g.add_factor(quadratic_pull(x, 0.0));
    g.add_constraint(scalar_constraint(x, 2.0, ConstraintKind::Equality));
    ConstrainedSolverConfig cfg;
    cfg.max_outer_iterations = 300;
    const ConstrainedReport report = optimize_constrained(g, cfg);
    CHECK(report.converged);
    CHECK(std::abs(g.variable(x).value[0] - 2.0) < 1e-4);
  }

  SUBCASE("two-variable QP matches the active-set oracle") {
    FactorGraph g;
    const VariableId x = g.add_vector_variable(Eigen::Vector2d::Zero());
    g.add_factor(make_linear_factor({x}, {Eigen::MatrixXd::Identity(2, 2)},
                                    Eigen::Vector2d(3.0, 3.0),
                                    Eigen::MatrixXd::Identity(2, 2)));
    Eigen::MatrixXd d(2, 2);
    d << 1, 0, 0, 1;
    g.add_constraint(make_linear_constraint({x}, {d},
                                            Eigen::Vector2d(-1.0, -1.0),
                                            ConstraintKind::Inequality));
    Eigen::MatrixXd c(1, 2);
    c << 1, 1;
    g.add_constraint(make_linear_constraint({x}, {c},
                                            Eigen::VectorXd::Constant(1, -1.0),
                                            ConstraintKind::Equality));

    fgnav::testing::QuadraticProgram qp;
    qp.p = Eigen::MatrixXd::Identity(2, 2);
    qp.q = Eigen::Vector2d(3.0, 3.0);
    qp.eq_a = c;
    qp.eq_b = Eigen::VectorXd::Constant(1, -1.0);
    qp.ineq_a = d;
    qp.ineq_b = Eigen::Vector2d(-1.0, -1.0);
    const auto oracle = solve_qp_active_set(qp);
    REQUIRE(oracle.has_value());

    ConstrainedSolverConfig cfg;
    cfg.max_outer_iterations = 500;
    const ConstrainedReport report = optimize_constrained(g, cfg);
    CHECK(report.converged);
    CHECK((g.variable(x).value - oracle->x).norm() < 1e-3);
  }

  SUBCASE("non-convergence reports instead of throwing") {
    FactorGraph g;
    const VariableId x = g.add_vector_variable(Eigen::VectorXd::Zero(1));
    g.add_factor(quadratic_pull(x, 3.0));
    g.add_constraint(scalar_constraint(x, 1.0, ConstraintKind::Inequality));
    ConstrainedSolverConfig cfg;
    cfg.max_outer_iterations = 2;
    const ConstrainedReport report = optimize_constrained(g, cfg);
    CHECK_FALSE(report.converged);
    CHECK(report.iterations == 2);
  }
}

TEST_CASE("inequality multipliers stay non-negative") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    auto problem = make_random_qp(rng);
    ConstrainedSolverConfig cfg;
    cfg.max_outer_iterations = 200;
    optimize_constrained(problem.graph, cfg);
    for (const ConstraintBlock& block : problem.graph.constraints()) {
      if (block.kind == ConstraintKind::Inequality) {
        CHECK(block.multiplier.minCoeff() >= 0.0);
      }
    }
  }
}

TEST_CASE("without constraints the two solvers agree bit for bit") {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 50; ++trial) {
    auto a = make_random_qp(rng, 6, 0);
    FactorGraph b;
    for (const Variable& v : a.graph.variables()) {
      b.add_variable(v);
    }
    for (const CostFactor& f : a.graph.factors()) {
      b.add_factor(f);
    }

    SolverConfig plain;
    plain.max_iterations = 20;
    const OptimizeReport plain_report = optimize(a.graph, plain);

    ConstrainedSolverConfig constrained;
    constrained.inner_gn_iterations = 1;
    constrained.max_outer_iterations = 20;
    const ConstrainedReport constrained_report =
        optimize_constrained(b, constrained);

    CHECK(plain_report.converged == constrained_report.converged);
    CHECK(plain_report.iterations == constrained_report.iterations);
    CHECK(plain_report.final_cost == constrained_report.final_cost);
    for (int id = 0; id < a.graph.num_variables(); ++id) {
      const auto& va = a.graph.variable(id).value;
      const auto& vb = b.variable(id).value;
      REQUIRE(va.size() == vb.size());
      for (int i = 0; i < va.size(); ++i) {
        CHECK(va[i] == vb[i]);  // exact
      }
    }
  }
}

TEST_CASE("converged QPs satisfy the oracle's KKT conditions") {
  std::mt19937_64 rng(33);
  int solved = 0;
  for (int trial = 0; trial < 40; ++trial) {
    auto problem = make_random_qp(rng);
    const auto oracle = solve_qp_active_set(problem.qp);
    REQUIRE(oracle.has_value());

    // Tighter feasibility than the reporting thresholds plus penalty growth,
    // so the multipliers settle enough for the slackness check.
    ConstrainedSolverConfig cfg;
    cfg.max_outer_iterations = 1000;
    cfg.eq_tolerance = 1e-6;
    cfg.ineq_tolerance = 1e-6;
    cfg.rho_growth = 1.5;
    const ConstrainedReport report = optimize_constrained(problem.graph, cfg);
    REQUIRE(report.converged);
    ++solved;

    const Eigen::VectorXd x = problem.stacked_values();
    CHECK((x - oracle->x).norm() < 1e-3);
    CHECK(report.max_eq_violation < 1e-4);
    CHECK(report.max_ineq_violation < 1e-4);

    // Stationarity and complementary slackness at the solver's own point.
    Eigen::VectorXd grad = 2.0 * problem.qp.p * x - 2.0 * problem.qp.q;
    for (const ConstraintBlock& block : problem.graph.constraints()) {
      const auto r =
          block.residual(problem.graph.values_of(block.variables));
      const Eigen::MatrixXd jac =
          block.kind == ConstraintKind::Equality ? problem.qp.eq_a
                                                 : problem.qp.ineq_a;
      grad += jac.transpose() * block.multiplier;
      if (block.kind == ConstraintKind::Inequality) {
        for (int i = 0; i < block.residual_dim; ++i) {
          CHECK(std::abs(block.multiplier[i] * (*r)[i]) < 1e-3);
        }
      }
    }
    CHECK(grad.lpNorm<Eigen::Infinity>() < 1e-3);
  }
  CHECK(solved == 40);
}

TEST_CASE("scaling all weights and penalties preserves the argmin") {
  std::mt19937_64 rng(34);
  for (int trial = 0; trial < 10; ++trial) {
    auto base = make_random_qp(rng);
    const double scale = 7.5;

    FactorGraph scaled;
    for (const Variable& v : base.graph.variables()) {
      scaled.add_variable(v);
    }
    for (CostFactor f : base.graph.factors()) {
      const int m = f.residual_dim;
      f.information = (f.information.size() > 0
                           ? Eigen::MatrixXd(scale * f.information)
                           : Eigen::MatrixXd(scale *
                                             Eigen::MatrixXd::Identity(m, m)));
      scaled.add_factor(std::move(f));
    }
    for (const ConstraintBlock& block : base.graph.constraints()) {
      scaled.add_constraint(block);
    }

    ConstrainedSolverConfig cfg;
    cfg.max_outer_iterations = 1000;
    const auto report_a = optimize_constrained(base.graph, cfg);

    ConstrainedSolverConfig cfg_scaled = cfg;
    cfg_scaled.rho_init = cfg.rho_init * scale;
    const auto report_b = optimize_constrained(scaled, cfg_scaled);

    REQUIRE(report_a.converged);
    REQUIRE(report_b.converged);
    for (int id = 0; id < base.graph.num_variables(); ++id) {
      CHECK((base.graph.variable(id).value - scaled.variable(id).value)
                .norm() < 1e-6);
    }
  }
}

TEST_CASE("inequality violation is non-increasing near convergence") {
  std::mt19937_64 rng(35);
  for (int trial = 0; trial < 10; ++trial) {
    auto problem = make_random_qp(rng);
    if (problem.qp.ineq_a.rows() == 0) {
      continue;
    }
    ConstrainedSolverConfig cfg;
    cfg.max_outer_iterations = 1000;
    const ConstrainedReport report = optimize_constrained(problem.graph, cfg);
    REQUIRE(report.converged);
    const auto& trace = report.violation_trace;
    if (trace.size() < 3) {
      continue;
    }
    for (size_t i = trace.size() - 2; i < trace.size(); ++i) {
      CHECK(trace[i].ineq <= trace[i - 1].ineq + 1e-9);
    }
  }
}
