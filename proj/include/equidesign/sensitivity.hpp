#pragma once

#include <vector>

#include "equidesign/equilibrium.hpp"

namespace equidesign {

// Two derivative models for the density map:
//  - pointwise:  d(rho) = rho^2 - rho applied nodewise, ignoring the nonlocal
//    term coming from the normalizer. Cheap, but the resulting gradient only
//    matches finite differences to ~1e-3 relative.
//  - consistent: exact derivative of the discrete normalized density
//    (rank-one correction handled via Sherman-Morrison on the transposed
//    linearized system). Matches finite differences to round-off.
// The consistent model is the default everywhere.
enum class DerivativeModel { consistent, pointwise };

struct GradientBundle {
  Vec p;        // adjoint state
  Vec mu;       // H1-Riesz representative of the reduced derivative
  Vec grad;     // alpha*u + mu
  Vec l2_form;  // unweighted integrand of the directional derivative
  Vec dual;     // quadrature-weighted form: dJ[v] = dual.v + alpha*h1(u,v)
};

// Adjoint solve of the pointwise model: -Lap p - c*p = -V*c with
// c = rho^2 - rho and homogeneous Dirichlet data.
Vec solve_adjoint(const Discretization& d, const EquilibriumState& state, const Vec& V);

// Helmholtz Riesz lift: mu solving -Lap mu + mu = f, mu = 0 on the boundary.
Vec riesz_lift(const Discretization& d, const Vec& f);

GradientBundle reduced_gradient(const Discretization& d, const EquilibriumState& state,
                                const Vec& V, double alpha,
                                DerivativeModel model = DerivativeModel::consistent);

// Adjoint-based value of dJ[v]; v must vanish on the boundary ring.
double directional_derivative(const Discretization& d, const EquilibriumState& state,
                              double alpha, const GradientBundle& b, const Vec& v);

struct GradCheckStep {
  double h;
  double fd;       // central difference [J(u+hv) - J(u-hv)] / 2h
  double dd;       // adjoint directional derivative
  double rel_err;
};

struct GradCheckReport {
  std::vector<GradCheckStep> steps;
  double min_rel_err = 0.0;
};

GradCheckReport gradient_check(const Discretization& d, const Vec& u, const Vec& V,
                               double alpha, const Vec& v, const std::vector<double>& steps,
                               DerivativeModel model = DerivativeModel::consistent,
                               const FixedPointParams& fp = {});

}  // namespace equidesign
