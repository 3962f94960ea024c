#pragma once

#include <stdexcept>

#include "equidesign/operators.hpp"

namespace equidesign {

struct FixedPointError : std::runtime_error {
  double residual;
  int sweeps;
  FixedPointError(const std::string& what, double res, int k)
      : std::runtime_error(what), residual(res), sweeps(k) {}
};

struct FixedPointParams {
  double tol = 1e-10;   // max-norm update tolerance
  int max_sweeps = 200;
  double theta = 1.0;   // damping, U <- (1-theta)*U + theta*U_new
};

struct EquilibriumState {
  Vec u;    // control potential
  Vec U;    // self-consistent potential
  Vec rho;  // normalized density
  int fp_iterations = 0;
  double fp_residual = 0.0;
};

// Normalized Gibbs density exp(-(U+u)) / integral(exp(-(U+u))). Exponents are
// shifted by max(-(U+u)) before exponentiation; the discrete quadrature is
// used for the normalizer so the discrete mass is exactly 1.
Vec phi_density(const PolarGrid& g, const Vec& U, const Vec& u);

// Pointwise derivative model rho^2 - rho (same for the U and u slots).
Vec dphi_pointwise(const Vec& rho);

// Fixed-point solve of -Lap U = rho(U, u), optionally warm-started.
EquilibriumState solve_equilibrium(const Discretization& d, const Vec& u,
                                   const FixedPointParams& fp = {},
                                   const Vec* warm_start = nullptr);

}  // namespace equidesign
