#include "equidesign/optimizer.hpp"

#include <cmath>

#include "equidesign/kernels.hpp"
#include "equidesign/objective.hpp"

namespace equidesign {

const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::tol: return "tol";
    case StopReason::k_max: return "k_max";
    case StopReason::line_search_failure: return "line-search-failure";
    case StopReason::fp_failure: return "fp-failure";
  }
  return "unknown";
}

double fr_beta(const PolarGrid& g, const Vec& g_new, const Vec& g_old) {
  double denom = h1_inner(g, g_old, g_old);
  if (denom <= 0.0)
    throw std::invalid_argument("fr_beta: zero gradient denominator (already converged)");
  return h1_inner(g, g_new, g_new) / denom;
}

ArmijoResult armijo_search(const std::function<double(double)>& J_at, double J0, double dd,
                           const LineSearchParams& ls) {
  if (!(dd < 0.0)) throw std::invalid_argument("armijo_search: non-descent direction");
  ArmijoResult res;
  double s = ls.s0;
  for (int n = 0; n < ls.max_backtracks; ++n) {
    double Jt = J_at(s);
    if (Jt <= J0 + ls.c1 * s * dd) {
      res.s = s;
      res.backtracks = n;
      res.ok = true;
      res.J_trial = Jt;
      return res;
    }
    s *= ls.shrink;
  }
  res.backtracks = ls.max_backtracks;
  return res;
}

OptimizeResult ncg_minimize(const Discretization& d, const Vec& u0, const Vec& V,
                            const OptimizeConfig& cfg) {
  const PolarGrid& g = d.grid;
  auto project = [&](Vec& x) {
    if (cfg.box)
      kernels::clip(cfg.box->first, cfg.box->second, x.data(),
                    static_cast<std::size_t>(x.size()));
  };

  Vec u = u0;
  project(u);
  EquilibriumState state = solve_equilibrium(d, u, cfg.fp);  // initial failure propagates
  double J = evaluate_J(g, state, V, cfg.alpha);

  OptimizeResult out;
  out.report.J0 = J;
  out.report.reason = StopReason::k_max;

  GradientBundle bundle = reduced_gradient(d, state, V, cfg.alpha, cfg.model);
  Vec dir = -bundle.grad;
  double gn2 = h1_inner(g, bundle.grad, bundle.grad);

  int consecutive_ls_failures = 0;
  auto finish = [&](StopReason reason, int k) {
    out.u = std::move(u);
    out.state = std::move(state);
    out.report.reason = reason;
    out.report.iterations = k;
    return std::move(out);
  };

  for (int k = 0; k < cfg.k_max; ++k) {
    double ddv = directional_derivative(d, state, cfg.alpha, bundle, dir);
    if (ddv >= 0.0) {
      // Non-descent conjugate direction: reset to steepest descent.
      dir = -bundle.grad;
      ddv = directional_derivative(d, state, cfg.alpha, bundle, dir);
      if (ddv >= 0.0) return finish(StopReason::line_search_failure, k + 1);
    }

    Vec u_trial;
    EquilibriumState state_trial;
    auto J_at = [&](double s) {
      u_trial = u + s * dir;
      project(u_trial);
      state_trial = solve_equilibrium(d, u_trial, cfg.fp, &state.U);
      return evaluate_J(g, state_trial, V, cfg.alpha);
    };

    ArmijoResult ls;
    try {
      ls = armijo_search(J_at, J, ddv, cfg.ls);
    } catch (const FixedPointError&) {
      return finish(StopReason::fp_failure, k + 1);
    }
    if (!ls.ok) {
      if (++consecutive_ls_failures >= 2)
        return finish(StopReason::line_search_failure, k + 1);
      dir = -bundle.grad;  // one steepest retry before giving up
      continue;
    }
    consecutive_ls_failures = 0;

    Vec du = u_trial - u;
    double E = std::sqrt(h1_inner(g, du, du));
    u = std::move(u_trial);
    state = std::move(state_trial);
    J = ls.J_trial;

    GradientBundle next = reduced_gradient(d, state, V, cfg.alpha, cfg.model);
    double gn2_new = h1_inner(g, next.grad, next.grad);
    double beta = 0.0;
    if (cfg.method == Method::ncg && (k + 1) % cfg.restart_period != 0 && gn2 > 0.0)
      beta = gn2_new / gn2;
    dir = -next.grad + beta * dir;
    bundle = std::move(next);
    gn2 = gn2_new;

    out.report.iterates.push_back({k, J, std::sqrt(gn2_new), ls.s, ls.backtracks, E});
    if (E < cfg.tol) return finish(StopReason::tol, k + 1);
  }
  return finish(StopReason::k_max, cfg.k_max);
}

}  // namespace equidesign
