#pragma once

#include <Eigen/SparseCore>
#include <memory>
#include <stdexcept>

#include "equidesign/grid.hpp"

namespace equidesign {

struct SolverError : std::runtime_error {
  double residual;
  explicit SolverError(const std::string& what, double res = -1.0)
      : std::runtime_error(what), residual(res) {}
};

// Interior diagonal, radial part: the printed formula
// (2r^2/(dr_j+dr_{j-1}))(1/dr_{j-1} - 1/dr_j) vanishes on uniform meshes and
// is inconsistent; the corrected variant -(...)(1/dr_{j-1} + 1/dr_j) passes
// the manufactured-solution order test and is the default. Both are kept so
// `validate` can adjudicate them against the oracle.
enum class StencilVariant { corrected, legacy };

namespace detail {
struct Factorization;
}

// Assembled system in the sign convention where the stored matrix is A and
// the solved linear system is -A x = f.
struct SparseSystem {
  Eigen::SparseMatrix<double> A;
  // LU of -A, built lazily on first solve; not safe to build concurrently.
  mutable std::shared_ptr<detail::Factorization> fact;
};

// Polar five-point Laplacian with the finite-volume origin row, the origin
// equality rows U_{i,0} = U_{0,0}, and identity rows on the Dirichlet
// boundary ring.
SparseSystem assemble_laplacian(const PolarGrid& g,
                                StencilVariant variant = StencilVariant::corrected);

// Diagonal row scaling of the right-hand side: r_j^2 on interior rings,
// pi*(dr_0/2)^2 at the origin node, 0 on equality and boundary rows.
Vec rhs_diag(const PolarGrid& g);
Vec scale_rhs(const PolarGrid& g, const Vec& f);

// base + diag(rhs_diag * c): realizes -Lap(x) - c*x = f after row scaling.
// Equality and boundary rows are untouched (their diagonal scaling is 0).
SparseSystem assemble_reaction(const PolarGrid& g, const SparseSystem& base, const Vec& c);

// Helmholtz operator -Lap + I, i.e. the reaction system with c = -1.
SparseSystem assemble_helmholtz(const PolarGrid& g, const SparseSystem& lap);

// Direct solve of -A x = rhs with a cached sparse LU; enforces a relative
// residual of 1e-10 and throws SolverError otherwise.
Vec solve(const SparseSystem& sys, const Vec& rhs);

// Solve of (-A)^T x = rhs on the same factorization (adjoint systems).
Vec solve_transpose(const SparseSystem& sys, const Vec& rhs);

// Smallest Dirichlet eigenvalue of -Lap by inverse power iteration in the
// r-weighted inner product, converged to 1e-6 relative change.
double smallest_eigenvalue(const SparseSystem& lap, const PolarGrid& g);

// Grid plus the two factorized systems every downstream module needs.
struct Discretization {
  PolarGrid grid;
  SparseSystem lap;
  SparseSystem helm;
  StencilVariant variant = StencilVariant::corrected;
};

Discretization make_discretization(int n_phi, int n_radial,
                                   StencilVariant variant = StencilVariant::corrected);

}  // namespace equidesign
