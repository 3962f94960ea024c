#include "equidesign/equilibrium.hpp"

#include <cmath>

namespace equidesign {

Vec phi_density(const PolarGrid& g, const Vec& U, const Vec& u) {
  if (U.size() != g.size() || u.size() != g.size())
    throw std::invalid_argument("phi_density: field length mismatch");
  Vec e = -(U + u);
  e.array() -= e.maxCoeff();  // overflow guard; the normalizer absorbs the shift
  Vec z = e.array().exp();
  double mass = integrate(g, z);
  if (!(mass > 0.0)) throw std::runtime_error("phi_density: degenerate normalizer");
  return z / mass;
}

Vec dphi_pointwise(const Vec& rho) { return rho.cwiseProduct(rho) - rho; }

EquilibriumState solve_equilibrium(const Discretization& d, const Vec& u,
                                   const FixedPointParams& fp, const Vec* warm_start) {
  const PolarGrid& g = d.grid;
  Vec U = warm_start ? *warm_start : Vec::Zero(g.size());
  double res = 0.0;
  for (int k = 0; k < fp.max_sweeps; ++k) {
    Vec rho = phi_density(g, U, u);
    Vec Un = solve(d.lap, scale_rhs(g, rho));
    if (fp.theta != 1.0) Un = (1.0 - fp.theta) * U + fp.theta * Un;
    res = (Un - U).cwiseAbs().maxCoeff();
    U = std::move(Un);
    if (!std::isfinite(res))
      throw FixedPointError("fixed point diverged (non-finite update)", res, k + 1);
    if (res < fp.tol) {
      EquilibriumState st;
      st.u = u;
      st.U = std::move(U);
      st.rho = phi_density(g, st.U, u);
      st.fp_iterations = k + 1;
      st.fp_residual = res;
      return st;
    }
  }
  throw FixedPointError("fixed point did not converge within sweep cap", res, fp.max_sweeps);
}

}  // namespace equidesign
