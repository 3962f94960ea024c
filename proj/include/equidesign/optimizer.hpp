#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "equidesign/sensitivity.hpp"

namespace equidesign {

struct LineSearchParams {
  double c1 = 1e-4;
  double shrink = 0.5;
  double s0 = 1.0;
  int max_backtracks = 30;
};

enum class Method { ncg, steepest };

struct OptimizeConfig {
  double alpha = 1e-3;
  double tol = 1e-6;  // on the discrete-H1 norm of u^{k+1} - u^k
  int k_max = 100;
  LineSearchParams ls;
  int restart_period = 10;
  Method method = Method::ncg;
  std::optional<std::pair<double, double>> box;  // nodewise clip [M1, M2]
  FixedPointParams fp;
  DerivativeModel model = DerivativeModel::consistent;
};

enum class StopReason { tol, k_max, line_search_failure, fp_failure };
const char* to_string(StopReason r);

struct IterateRecord {
  int k;
  double J;
  double grad_h1;
  double step;
  int backtracks;
  double E;  // H1 norm of the accepted update
};

struct OptimizeReport {
  double J0 = 0.0;  // objective at the start iterate
  std::vector<IterateRecord> iterates;
  StopReason reason = StopReason::k_max;
  int iterations = 0;
};

struct OptimizeResult {
  Vec u;
  EquilibriumState state;
  OptimizeReport report;
};

// Fletcher-Reeves ratio h1(g_new,g_new)/h1(g_old,g_old).
double fr_beta(const PolarGrid& g, const Vec& g_new, const Vec& g_old);

struct ArmijoResult {
  double s = 0.0;
  int backtracks = 0;
  bool ok = false;
  double J_trial = 0.0;
};

// Backtracking search: largest s in {s0*shrink^n} with
// J(s) <= J0 + c1*s*dd. J_at(s) evaluates the objective at u + s*d.
// Requires dd < 0.
ArmijoResult armijo_search(const std::function<double(double)>& J_at, double J0,
                           double dd, const LineSearchParams& ls);

// Fletcher-Reeves NCG with Armijo backtracking, steepest-descent restarts
// every restart_period iterations and on non-descent directions, and
// optional box projection after each update. Aborts (report-so-far kept) on
// a fixed-point failure inside the line search or on a second consecutive
// line-search failure after a steepest reset.
OptimizeResult ncg_minimize(const Discretization& d, const Vec& u0, const Vec& V,
                            const OptimizeConfig& cfg);

}  // namespace equidesign
