#include "equidesign/sensitivity.hpp"

#include <cmath>
#include <limits>

#include "equidesign/kernels.hpp"
#include "equidesign/objective.hpp"

namespace equidesign {

Vec solve_adjoint(const Discretization& d, const EquilibriumState& state, const Vec& V) {
  const PolarGrid& g = d.grid;
  if (V.size() != g.size()) throw std::invalid_argument("solve_adjoint: field length mismatch");
  Vec c = dphi_pointwise(state.rho);
  SparseSystem adj = assemble_reaction(g, d.lap, c);
  return solve(adj, scale_rhs(g, Vec(-V.cwiseProduct(c))));
}

Vec riesz_lift(const Discretization& d, const Vec& f) {
  return solve(d.helm, scale_rhs(d.grid, f));
}

namespace {

// Pointwise model: adjoint with the classical nodewise derivative
// rho^2 - rho, then the Riesz lift of (V - p) * drho.
GradientBundle gradient_pointwise(const Discretization& d, const EquilibriumState& state,
                                  const Vec& V, double alpha) {
  const PolarGrid& g = d.grid;
  GradientBundle b;
  b.p = solve_adjoint(d, state, V);
  Vec c = dphi_pointwise(state.rho);
  b.l2_form = (V - b.p).cwiseProduct(c);
  b.dual = g.quad_w.cwiseProduct(b.l2_form);
  b.mu = riesz_lift(d, b.l2_form);
  b.grad = alpha * state.u + b.mu;
  return b;
}

// Consistent model: exact derivative of the discrete normalized density.
// The normalizer makes the linearized forward operator a rank-one update of
// K = -A + diag(Rd*rho); the transposed solve plus a Sherman-Morrison
// correction gives the adjoint, and the resulting weighted form `q` is exact
// for the discrete objective (finite-difference match to round-off).
GradientBundle gradient_consistent(const Discretization& d, const EquilibriumState& state,
                                   const Vec& V, double alpha) {
  const PolarGrid& g = d.grid;
  const Vec& rho = state.rho;
  Vec w = g.quad_w;
  Vec Rd = rhs_diag(g);

  Vec bw = w.cwiseProduct(rho);              // quadrature-weighted density
  Vec a = Rd.cwiseProduct(rho);              // row-scaled density
  double cV = bw.dot(V);                     // ensemble term
  Vec gv = -w.cwiseProduct(V).cwiseProduct(rho) + cV * bw;

  SparseSystem K = assemble_reaction(g, d.lap, Vec(-rho));
  Vec z = solve_transpose(K, gv);
  Vec kb = solve_transpose(K, bw);
  double denom = 1.0 - a.dot(kb);
  Vec p = -(z + kb * (a.dot(z) / denom));

  Vec q = gv + Rd.cwiseProduct(p).cwiseProduct(rho) - p.dot(a) * bw;

  // Riesz form: q de-weighted where the quadrature weight is positive; the
  // origin ring (weight 0) carries the nodewise limit of the same integrand.
  Vec F = Vec::Zero(g.size());
  for (int k = 0; k < g.size(); ++k)
    if (w[k] > 0.0) F[k] = q[k] / w[k];
  double origin = rho[0] * (cV - V[0]) + p[0] * rho[0] - p.dot(a) * rho[0];
  for (int i = 0; i < g.n_phi; ++i) F[g.flat(i, 0)] = origin;

  GradientBundle b;
  b.p = std::move(p);
  b.l2_form = F;
  b.dual = std::move(q);
  b.mu = riesz_lift(d, F);
  b.grad = alpha * state.u + b.mu;
  return b;
}

}  // namespace

GradientBundle reduced_gradient(const Discretization& d, const EquilibriumState& state,
                                const Vec& V, double alpha, DerivativeModel model) {
  if (V.size() != d.grid.size())
    throw std::invalid_argument("reduced_gradient: field length mismatch");
  return model == DerivativeModel::consistent ? gradient_consistent(d, state, V, alpha)
                                              : gradient_pointwise(d, state, V, alpha);
}

double directional_derivative(const Discretization& d, const EquilibriumState& state,
                              double alpha, const GradientBundle& b, const Vec& v) {
  if (v.size() != d.grid.size())
    throw std::invalid_argument("directional_derivative: field length mismatch");
  double lin = kernels::dot(b.dual.data(), v.data(), static_cast<std::size_t>(v.size()));
  return lin + alpha * h1_inner(d.grid, state.u, v);
}

GradCheckReport gradient_check(const Discretization& d, const Vec& u, const Vec& V,
                               double alpha, const Vec& v, const std::vector<double>& steps,
                               DerivativeModel model, const FixedPointParams& fp) {
  EquilibriumState base = solve_equilibrium(d, u, fp);
  GradientBundle b = reduced_gradient(d, base, V, alpha, model);
  double dd = directional_derivative(d, base, alpha, b, v);

  GradCheckReport rep;
  rep.min_rel_err = std::numeric_limits<double>::infinity();
  for (double h : steps) {
    EquilibriumState plus = solve_equilibrium(d, Vec(u + h * v), fp);
    EquilibriumState minus = solve_equilibrium(d, Vec(u - h * v), fp);
    double fd = (evaluate_J(d.grid, plus, V, alpha) - evaluate_J(d.grid, minus, V, alpha)) /
                (2.0 * h);
    double rel = std::abs(fd - dd) / std::max(std::abs(dd), 1e-300);
    rep.steps.push_back({h, fd, dd, rel});
    rep.min_rel_err = std::min(rep.min_rel_err, rel);
  }
  return rep;
}

}  // namespace equidesign
