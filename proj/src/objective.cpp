#include "equidesign/objective.hpp"

#include <cmath>

#include "equidesign/io.hpp"

namespace equidesign {

Vec valley_eval(const ValleySpec& spec, const PolarGrid& g) {
  return std::visit(
      [&](const auto& s) -> Vec {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ZeroValley>) {
          return Vec::Zero(g.size());
        } else if constexpr (std::is_same_v<T, GaussianValley>) {
          return sample(g, [&](double x, double y, double, double) {
            double dx = x - s.cx, dy = y - s.cy;
            return -s.amplitude * std::exp(-(dx * dx + dy * dy) / (2.0 * s.width * s.width));
          });
        } else if constexpr (std::is_same_v<T, AnisotropicGaussianValley>) {
          return sample(g, [&](double, double, double r, double phi) {
            double c = std::cos(phi), sn = std::sin(phi);
            return -std::exp(-r * r * (c * c / (2.0 * s.width_x * s.width_x) +
                                       sn * sn / (2.0 * s.width_y * s.width_y)));
          });
        } else if constexpr (std::is_same_v<T, CloverValley>) {
          return sample(g, [&](double, double, double r, double phi) {
            return r <= s.scale * std::abs(std::cos(2.0 * phi)) ? -s.depth : 0.0;
          });
        } else {
          static_assert(std::is_same_v<T, FromFileValley>);
          return read_field_csv(s.path, g);
        }
      },
      spec);
}

double ensemble_term(const PolarGrid& g, const Vec& V, const Vec& rho) {
  return l2_inner(g, V, rho);
}

double evaluate_J(const PolarGrid& g, const EquilibriumState& state, const Vec& V,
                  double alpha) {
  return ensemble_term(g, V, state.rho) + 0.5 * alpha * h1_inner(g, state.u, state.u);
}

}  // namespace equidesign
