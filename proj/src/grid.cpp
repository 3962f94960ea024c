#include "equidesign/grid.hpp"

#include <numbers>
#include <stdexcept>

#include "equidesign/kernels.hpp"

namespace equidesign {

namespace {
constexpr double kPi = std::numbers::pi;

void check_same(const PolarGrid& g, const Vec& f, const Vec& h) {
  if (f.size() != g.size() || h.size() != g.size())
    throw std::invalid_argument("grid mismatch: field length != n_phi * n_radial");
}
}  // namespace

double radial_coordinate(int j, int n_radial) {
  double s = static_cast<double>(j) / (n_radial - 1);
  return s * (2.0 - s);  // = -2(0.5 s^2 - s), written to avoid -0 at s=0
}

PolarGrid build_grid(int n_phi, int n_radial) {
  if (n_phi < 8) throw std::invalid_argument("build_grid: n_phi must be >= 8");
  if (n_radial < 4) throw std::invalid_argument("build_grid: n_radial must be >= 4");

  PolarGrid g;
  g.n_phi = n_phi;
  g.n_radial = n_radial;

  g.phi = Vec(n_phi);
  for (int i = 0; i < n_phi; ++i) g.phi[i] = 2.0 * kPi * i / n_phi;
  g.dphi = Vec::Constant(n_phi, 2.0 * kPi / n_phi);

  g.r = Vec(n_radial);
  for (int j = 0; j < n_radial; ++j) g.r[j] = radial_coordinate(j, n_radial);
  g.dr = Vec(n_radial - 1);
  for (int j = 0; j + 1 < n_radial; ++j) g.dr[j] = g.r[j + 1] - g.r[j];

  // Midpoint in phi times trapezoid in r on the integrand g*r; the origin
  // ring gets weight 0 automatically (r_0 = 0) but its value still enters
  // the PDE through the dedicated origin row.
  Vec tw(n_radial);
  tw[0] = 0.5 * g.dr[0];
  tw[n_radial - 1] = 0.5 * g.dr[n_radial - 2];
  for (int j = 1; j + 1 < n_radial; ++j) tw[j] = 0.5 * (g.r[j + 1] - g.r[j - 1]);

  g.quad_w = Vec(g.size());
  double h = 2.0 * kPi / n_phi;
  for (int j = 0; j < n_radial; ++j) {
    double wj = h * tw[j] * g.r[j];
    for (int i = 0; i < n_phi; ++i) g.quad_w[g.flat(i, j)] = wj;
  }
  return g;
}

double integrate(const PolarGrid& g, const Vec& f) {
  if (f.size() != g.size())
    throw std::invalid_argument("grid mismatch: field length != n_phi * n_radial");
  return kernels::dot(g.quad_w.data(), f.data(), static_cast<std::size_t>(f.size()));
}

double l2_inner(const PolarGrid& g, const Vec& f, const Vec& h) {
  check_same(g, f, h);
  return kernels::dot3(g.quad_w.data(), f.data(), h.data(),
                       static_cast<std::size_t>(f.size()));
}

Vec d_r(const PolarGrid& g, const Vec& f) {
  int N = g.n_phi, M = g.n_radial;
  Vec out(g.size());
  for (int i = 0; i < N; ++i) {
    out[g.flat(i, 0)] = (f[g.flat(i, 1)] - f[g.flat(i, 0)]) / g.dr[0];
    out[g.flat(i, M - 1)] = (f[g.flat(i, M - 1)] - f[g.flat(i, M - 2)]) / g.dr[M - 2];
  }
  for (int j = 1; j + 1 < M; ++j) {
    double span = g.r[j + 1] - g.r[j - 1];
    for (int i = 0; i < N; ++i)
      out[g.flat(i, j)] = (f[g.flat(i, j + 1)] - f[g.flat(i, j - 1)]) / span;
  }
  return out;
}

Vec d_phi(const PolarGrid& g, const Vec& f) {
  int N = g.n_phi, M = g.n_radial;
  double h = 2.0 * kPi / N;
  Vec out = Vec::Zero(g.size());
  for (int j = 1; j < M; ++j) {
    double inv = 1.0 / (2.0 * h * g.r[j]);
    for (int i = 0; i < N; ++i)
      out[g.flat(i, j)] = (f[g.flat(i + 1, j)] - f[g.flat(i - 1, j)]) * inv;
  }
  return out;
}

double h1_inner(const PolarGrid& g, const Vec& f, const Vec& h) {
  check_same(g, f, h);
  return l2_inner(g, f, h) + l2_inner(g, d_r(g, f), d_r(g, h)) +
         l2_inner(g, d_phi(g, f), d_phi(g, h));
}

}  // namespace equidesign
