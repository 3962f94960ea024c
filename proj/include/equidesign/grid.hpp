#pragma once

#include <Eigen/Dense>
#include <cmath>

namespace equidesign {

using Vec = Eigen::VectorXd;

// Polar mesh of the unit disk. Nodes are ordered ring by ring:
// flat(i,j) = i + j*n_phi, i = angular index, j = radial index (0-based).
// The j=0 ring collapses to the origin (r=0), j=n_radial-1 is the boundary r=1.
struct PolarGrid {
  int n_phi = 0;     // N
  int n_radial = 0;  // M
  Vec phi;           // phi_i = 2*pi*i/N
  Vec r;             // r_j = 2s - s^2, s = j/(M-1); r_0 = 0, r_{M-1} = 1
  Vec dphi;          // angular spacings, all 2*pi/N (wraparound included)
  Vec dr;            // radial spacings r_{j+1} - r_j, size M-1
  Vec quad_w;        // per-node quadrature weight for the area measure r dr dphi

  int flat(int i, int j) const {
    int n = n_phi;
    return ((i % n + n) % n) + j * n;
  }
  int size() const { return n_phi * n_radial; }
};

// r_j for the stretched radial mesh (0-based j, M nodes).
double radial_coordinate(int j, int n_radial);

// Builds the mesh and its quadrature: midpoint rule in phi times a
// trapezoidal rule in r applied to the integrand g*r. Rejects n_phi < 8
// or n_radial < 4.
PolarGrid build_grid(int n_phi, int n_radial);

// sum_k quad_w[k] * f[k]
double integrate(const PolarGrid& g, const Vec& f);

// Discrete L2 product integrate(f*g).
double l2_inner(const PolarGrid& g, const Vec& f, const Vec& h);

// Nonuniform central difference in r (one-sided at the first/last ring).
Vec d_r(const PolarGrid& g, const Vec& f);

// Periodic central difference in phi divided by r; 0 on the origin ring,
// where the nodal value is phi-independent.
Vec d_phi(const PolarGrid& g, const Vec& f);

// l2(f,h) + l2(d_r f, d_r h) + l2(d_phi f, d_phi h)
double h1_inner(const PolarGrid& g, const Vec& f, const Vec& h);

// Samples a function of (x, y, r, phi) at every node.
template <class F>
Vec sample(const PolarGrid& g, F&& fn) {
  Vec out(g.size());
  for (int j = 0; j < g.n_radial; ++j) {
    double rj = g.r[j];
    for (int i = 0; i < g.n_phi; ++i) {
      double ph = g.phi[i];
      out[g.flat(i, j)] = fn(rj * std::cos(ph), rj * std::sin(ph), rj, ph);
    }
  }
  return out;
}

}  // namespace equidesign
