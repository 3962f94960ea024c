#include "equidesign/operators.hpp"

#include <Eigen/SparseLU>
#include <numbers>
#include <vector>

namespace equidesign {

namespace {
constexpr double kPi = std::numbers::pi;
}

namespace detail {
// LU of -A in compressed column form, shared by solve and solve_transpose.
struct Factorization {
  Eigen::SparseMatrix<double> negA;
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
};
}  // namespace detail

SparseSystem assemble_laplacian(const PolarGrid& g, StencilVariant variant) {
  int N = g.n_phi, M = g.n_radial;
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(5) * N * M);
  auto idx = [&](int i, int j) { return g.flat(i, j); };

  double h = 2.0 * kPi / N;
  for (int j = 1; j + 1 < M; ++j) {
    double hp = g.dr[j];       // r_{j+1} - r_j
    double hm = g.dr[j - 1];   // r_j - r_{j-1}
    double S = hp + hm;
    double rj = g.r[j];
    // Angular diagonal -2/(dphi_i*dphi_{i-1}) = -2/h^2 on the uniform mesh.
    double ang = -2.0 / (h * h);
    double rad = variant == StencilVariant::corrected
                     ? -(2.0 * rj * rj / S) * (1.0 / hp + 1.0 / hm)
                     : (2.0 * rj * rj / S) * (1.0 / hm - 1.0 / hp);
    double up = 2.0 * rj * rj / (S * hp) + rj / S;
    double dn = 2.0 * rj * rj / (S * hm) - rj / S;
    for (int i = 0; i < N; ++i) {
      int a = idx(i, j);
      trip.emplace_back(a, a, rad + ang);
      trip.emplace_back(a, idx(i + 1, j), 1.0 / (h * h));
      trip.emplace_back(a, idx(i - 1, j), 1.0 / (h * h));
      trip.emplace_back(a, idx(i, j + 1), up);
      trip.emplace_back(a, idx(i, j - 1), dn);
    }
  }
  // Origin row: finite-volume balance over the disk of radius dr_0/2.
  trip.emplace_back(0, 0, -kPi);
  for (int i = 0; i < N; ++i) trip.emplace_back(0, idx(i, 1), 0.5 * h);
  // Equality rows pin the origin ring to the origin node.
  for (int i = 1; i < N; ++i) {
    int a = idx(i, 0);
    trip.emplace_back(a, 0, -1.0);
    trip.emplace_back(a, a, 1.0);
  }
  // Dirichlet boundary ring: identity rows.
  for (int i = 0; i < N; ++i) trip.emplace_back(idx(i, M - 1), idx(i, M - 1), 1.0);

  SparseSystem sys;
  sys.A.resize(g.size(), g.size());
  sys.A.setFromTriplets(trip.begin(), trip.end());
  return sys;
}

Vec rhs_diag(const PolarGrid& g) {
  Vec d = Vec::Zero(g.size());
  double half = 0.5 * g.dr[0];
  d[0] = kPi * half * half;
  for (int j = 1; j + 1 < g.n_radial; ++j) {
    double rj2 = g.r[j] * g.r[j];
    for (int i = 0; i < g.n_phi; ++i) d[g.flat(i, j)] = rj2;
  }
  return d;
}

Vec scale_rhs(const PolarGrid& g, const Vec& f) {
  if (f.size() != g.size()) throw std::invalid_argument("scale_rhs: field length mismatch");
  return rhs_diag(g).cwiseProduct(f);
}

SparseSystem assemble_reaction(const PolarGrid& g, const SparseSystem& base, const Vec& c) {
  if (c.size() != g.size() || base.A.rows() != g.size())
    throw std::invalid_argument("assemble_reaction: dimension mismatch");
  SparseSystem sys;
  Vec d = rhs_diag(g).cwiseProduct(c);
  Eigen::SparseMatrix<double> diag(g.size(), g.size());
  std::vector<Eigen::Triplet<double>> trip;
  for (int k = 0; k < g.size(); ++k)
    if (d[k] != 0.0) trip.emplace_back(k, k, d[k]);
  diag.setFromTriplets(trip.begin(), trip.end());
  sys.A = base.A + diag;
  return sys;
}

SparseSystem assemble_helmholtz(const PolarGrid& g, const SparseSystem& lap) {
  return assemble_reaction(g, lap, Vec::Constant(g.size(), -1.0));
}

namespace {

detail::Factorization& factorize(const SparseSystem& sys) {
  if (!sys.fact) {
    auto f = std::make_shared<detail::Factorization>();
    f->negA = (-sys.A).eval();
    f->negA.makeCompressed();
    f->lu.compute(f->negA);
    if (f->lu.info() != Eigen::Success)
      throw SolverError("sparse LU factorization failed (singular system?)");
    sys.fact = std::move(f);
  }
  return *sys.fact;
}

void check_residual(const detail::Factorization& f, const Vec& x, const Vec& rhs,
                    bool transposed) {
  Vec res = transposed ? Vec(f.negA.transpose() * x - rhs) : Vec(f.negA * x - rhs);
  double rel = res.norm() / std::max(rhs.norm(), 1e-30);
  if (!(rel <= 1e-10))
    throw SolverError("linear solve residual above tolerance", rel);
}

}  // namespace

Vec solve(const SparseSystem& sys, const Vec& rhs) {
  if (rhs.size() != sys.A.rows()) throw std::invalid_argument("solve: rhs dimension mismatch");
  if (rhs.isZero(0.0)) return Vec::Zero(rhs.size());
  const auto& f = factorize(sys);
  Vec x = f.lu.solve(rhs);
  check_residual(f, x, rhs, false);
  return x;
}

Vec solve_transpose(const SparseSystem& sys, const Vec& rhs) {
  if (rhs.size() != sys.A.rows())
    throw std::invalid_argument("solve_transpose: rhs dimension mismatch");
  if (rhs.isZero(0.0)) return Vec::Zero(rhs.size());
  auto& f = factorize(sys);
  Vec x = f.lu.transpose().solve(rhs);
  check_residual(f, x, rhs, true);
  return x;
}

double smallest_eigenvalue(const SparseSystem& lap, const PolarGrid& g) {
  // Inverse power iteration on the generalized problem -A v = lambda R v,
  // R the rhs row scaling; Rayleigh quotient (v,Rv)/(w,Rv) with w = (-A)^{-1}Rv.
  Vec v = sample(g, [](double, double, double r, double) { return 1.0 - r * r; });
  double lam = 0.0;
  for (int it = 0; it < 500; ++it) {
    Vec Rv = scale_rhs(g, v);
    Vec w = solve(lap, Rv);
    double lam_new = v.dot(Rv) / w.dot(Rv);
    if (it > 0 && std::abs(lam_new - lam) <= 1e-6 * std::abs(lam_new)) return lam_new;
    lam = lam_new;
    v = w / w.norm();
  }
  throw SolverError("smallest_eigenvalue: inverse power iteration did not converge");
}

Discretization make_discretization(int n_phi, int n_radial, StencilVariant variant) {
  Discretization d;
  d.grid = build_grid(n_phi, n_radial);
  d.lap = assemble_laplacian(d.grid, variant);
  d.helm = assemble_helmholtz(d.grid, d.lap);
  d.variant = variant;
  return d;
}

}  // namespace equidesign
