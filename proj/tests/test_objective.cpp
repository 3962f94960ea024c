#include <doctest.h>

#include <cmath>
#include <numbers>

#include "equidesign/objective.hpp"

using namespace equidesign;

namespace {
constexpr double kPi = std::numbers::pi;

struct Node {
  int i, j;
  double r, phi;
};

Node nearest(const PolarGrid& g, double r_target, double phi_target) {
  Node best{0, 0, g.r[0], g.phi[0]};
  double cost = 1e300;
  for (int j = 0; j < g.n_radial; ++j)
    for (int i = 0; i < g.n_phi; ++i) {
      double dr = g.r[j] - r_target;
      double dp = std::remainder(g.phi[i] - phi_target, 2 * kPi);
      double c = dr * dr + g.r[j] * g.r[j] * dp * dp;
      if (c < cost) {
        cost = c;
        best = {i, j, g.r[j], g.phi[i]};
      }
    }
  return best;
}

double at(const PolarGrid& g, const Vec& f, double r_target, double phi_target) {
  Node n = nearest(g, r_target, phi_target);
  return f[g.flat(n.i, n.j)];
}
}  // namespace

TEST_SUITE("objective") {

TEST_CASE("radial gaussian valley values") {
  // closed-form reference points: -1 at the center, -e^{-1/2} at r = width
  double w = 0.05;
  auto formula = [&](double r) { return -std::exp(-r * r / (2.0 * w * w)); };
  CHECK(formula(0.0) == -1.0);
  CHECK(formula(w) == doctest::Approx(-std::exp(-0.5)).epsilon(1e-15));

  PolarGrid g = build_grid(128, 96);
  Vec V = valley_eval(GaussianValley{1.0, w, 0.0, 0.0}, g);
  CHECK(V[0] == doctest::Approx(-1.0).epsilon(1e-12));
  // sampled values agree with the formula at the node radius
  Node n = nearest(g, 0.05, 0.0);
  CHECK(at(g, V, 0.05, 0.0) == doctest::Approx(formula(n.r)).epsilon(1e-12));
  CHECK(V.maxCoeff() <= 0.0);
}

TEST_CASE("anisotropic valley values") {
  // closed-form reference at (r,phi) = (0.1, pi/2): -exp(-0.01/(2*0.09))
  double ax = 0.05, ay = 0.3;
  auto formula = [&](double r, double phi) {
    double c = std::cos(phi), s = std::sin(phi);
    return -std::exp(-r * r * (c * c / (2 * ax * ax) + s * s / (2 * ay * ay)));
  };
  CHECK(formula(0.1, kPi / 2) == doctest::Approx(-std::exp(-0.01 / 0.18)).epsilon(1e-15));

  PolarGrid g = build_grid(256, 128);
  Vec V = valley_eval(AnisotropicGaussianValley{ax, ay}, g);
  Node n = nearest(g, 0.1, kPi / 2);
  CHECK(at(g, V, 0.1, kPi / 2) == doctest::Approx(formula(n.r, n.phi)).epsilon(1e-12));
  CHECK(V.maxCoeff() <= 0.0);
}

TEST_CASE("clover indicator geometry") {
  PolarGrid g = build_grid(64, 48);
  Vec V = valley_eval(CloverValley{1.0, 0.7}, g);
  CHECK(at(g, V, 0.3, 0.0) == -1.0);       // on a petal axis, inside
  CHECK(at(g, V, 0.5, kPi / 4) == 0.0);    // |cos 2phi| = 0 there
  CHECK(at(g, V, 0.9, 0.0) == 0.0);        // beyond the petal tip
  CHECK(V.minCoeff() == -1.0);
}

TEST_CASE("ensemble term is the expectation of V") {
  PolarGrid g = build_grid(32, 24);
  Vec rho = Vec::Constant(g.size(), 1.0);
  rho /= integrate(g, rho);
  CHECK(ensemble_term(g, Vec::Constant(g.size(), -1.0), rho) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(ensemble_term(g, Vec::Zero(g.size()), rho) == 0.0);

  Vec V = valley_eval(GaussianValley{1.0, 0.05, 0.0, 0.0}, g);
  double e = ensemble_term(g, V, rho);
  CHECK(e >= V.minCoeff() - 1e-12);
  CHECK(e < 0.0);
}

TEST_CASE("J is the ensemble term plus the scaled H1 regularizer") {
  Discretization d = make_discretization(32, 24);
  EquilibriumState st = solve_equilibrium(d, Vec::Zero(d.grid.size()));
  CHECK(evaluate_J(d.grid, st, Vec::Zero(d.grid.size()), 0.5) == 0.0);
  CHECK(evaluate_J(d.grid, st, Vec::Constant(d.grid.size(), -1.0), 0.5) ==
        doctest::Approx(-1.0).epsilon(1e-12));

  Vec V = valley_eval(GaussianValley{1.0, 0.05, 0.0, 0.0}, d.grid);
  CHECK(evaluate_J(d.grid, st, V, 0.5) == doctest::Approx(ensemble_term(d.grid, V, st.rho)));
}

}  // TEST_SUITE
