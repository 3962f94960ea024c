#include <doctest.h>

#include "equidesign/io.hpp"
#include "equidesign/optimizer.hpp"

using namespace equidesign;

TEST_SUITE("optimizer") {

TEST_CASE("Fletcher-Reeves ratio") {
  PolarGrid g = build_grid(32, 24);
  Vec f = random_h10_field(g, 2, 1.0);
  CHECK(fr_beta(g, f, f) == 1.0);
  CHECK(fr_beta(g, Vec(2.0 * f), f) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(fr_beta(g, Vec::Zero(g.size()), f) == 0.0);
  CHECK_THROWS_AS(fr_beta(g, f, Vec::Zero(g.size())), std::invalid_argument);
}

TEST_CASE("Armijo accepts the exact minimizer of a quadratic") {
  // J(s) = 0.5*(1-s)^2 along d = -u from u = 1: J(1) = 0, dd = -1
  LineSearchParams ls;  // s0 = 1, c1 = 1e-4
  auto J_at = [](double s) { return 0.5 * (1.0 - s) * (1.0 - s); };
  ArmijoResult res = armijo_search(J_at, 0.5, -1.0, ls);
  CHECK(res.ok);
  CHECK(res.s == 1.0);
  CHECK(res.backtracks == 0);
  CHECK_THROWS_AS(armijo_search(J_at, 0.5, 1.0, ls), std::invalid_argument);
}

TEST_CASE("Armijo backtracks when the first trial is too long") {
  LineSearchParams ls;
  ls.s0 = 8.0;
  auto J_at = [](double s) { return 0.5 * (1.0 - s) * (1.0 - s); };
  ArmijoResult res = armijo_search(J_at, 0.5, -1.0, ls);
  CHECK(res.ok);
  CHECK(res.backtracks > 0);
  CHECK(res.J_trial < 0.5);
}

TEST_CASE("pure Tikhonov run drives the control to zero") {
  Discretization d = make_discretization(32, 24);
  Vec u0 = random_h10_field(d.grid, 7, 0.1);
  OptimizeConfig cfg;
  cfg.alpha = 0.01;
  cfg.tol = 1e-6;
  cfg.k_max = 50;
  cfg.ls.s0 = 100.0;
  OptimizeResult res = ncg_minimize(d, u0, Vec::Zero(d.grid.size()), cfg);
  CHECK(res.report.reason == StopReason::tol);
  CHECK(std::sqrt(h1_inner(d.grid, res.u, res.u)) <= 10.0 * cfg.tol);
  // J over accepted iterates is nonincreasing
  double prev = res.report.J0;
  for (const auto& it : res.report.iterates) {
    CHECK(it.J <= prev + 1e-15);
    prev = it.J;
  }
}

TEST_CASE("a degenerate box pins the control") {
  Discretization d = make_discretization(32, 24);
  Vec V = valley_eval(GaussianValley{1.0, 0.05, 0.0, 0.0}, d.grid);
  OptimizeConfig cfg;
  cfg.alpha = 0.01;
  cfg.tol = 1e-9;
  cfg.k_max = 3;
  cfg.box = {{0.0, 0.0}};
  OptimizeResult res = ncg_minimize(d, random_h10_field(d.grid, 5, 0.2), V, cfg);
  CHECK(res.u.isZero(0.0));
  EquilibriumState zero_state = solve_equilibrium(d, Vec::Zero(d.grid.size()));
  double J_zero = evaluate_J(d.grid, zero_state, V, cfg.alpha);
  CHECK(res.report.J0 == doctest::Approx(J_zero).epsilon(1e-14));
  for (const auto& it : res.report.iterates) CHECK(it.J == doctest::Approx(J_zero).epsilon(1e-12));
}

TEST_CASE("steepest descent and determinism") {
  Discretization d = make_discretization(32, 24);
  Vec V = valley_eval(GaussianValley{1.0, 0.05, 0.0, 0.0}, d.grid);
  OptimizeConfig cfg;
  cfg.alpha = 0.01;
  cfg.tol = 1e-3;
  cfg.k_max = 5;
  cfg.ls.s0 = 5.0;
  cfg.method = Method::steepest;

  OptimizeResult a = ncg_minimize(d, Vec::Zero(d.grid.size()), V, cfg);
  OptimizeResult b = ncg_minimize(d, Vec::Zero(d.grid.size()), V, cfg);
  REQUIRE(a.report.iterates.size() == b.report.iterates.size());
  for (std::size_t k = 0; k < a.report.iterates.size(); ++k) {
    CHECK(a.report.iterates[k].J == b.report.iterates[k].J);
    CHECK(a.report.iterates[k].step == b.report.iterates[k].step);
  }
  CHECK((a.u - b.u).isZero(0.0));
  CHECK(a.report.iterates.front().J < a.report.J0);  // first step decreases J
}

}  // TEST_SUITE
