#pragma once

#include <string>
#include <variant>

#include "equidesign/equilibrium.hpp"

namespace equidesign {

// Valley functions: nonpositive weights whose low regions are where the
// density should concentrate.
struct GaussianValley {
  double amplitude = 1.0;
  double width = 0.05;
  double cx = 0.0, cy = 0.0;
};

// -exp(-r^2 (cos^2(phi)/(2 ax^2) + sin^2(phi)/(2 ay^2)))
struct AnisotropicGaussianValley {
  double width_x = 0.05;
  double width_y = 0.3;
};

// -depth inside the four-petal rose region r <= scale*|cos 2phi|, 0 outside.
struct CloverValley {
  double depth = 1.0;
  double scale = 0.7;
};

struct FromFileValley {
  std::string path;
};

struct ZeroValley {};

using ValleySpec = std::variant<ZeroValley, GaussianValley, AnisotropicGaussianValley,
                                CloverValley, FromFileValley>;

Vec valley_eval(const ValleySpec& spec, const PolarGrid& g);

// Expected value of V under rho: l2_inner(V, rho).
double ensemble_term(const PolarGrid& g, const Vec& V, const Vec& rho);

// ensemble_term + (alpha/2) * h1(u, u)
double evaluate_J(const PolarGrid& g, const EquilibriumState& state, const Vec& V,
                  double alpha);

}  // namespace equidesign
