#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "wigflux/grid.hpp"
#include "wigflux/states.hpp"

namespace wigflux::testing {

inline constexpr double kPi = std::numbers::pi;

inline PhaseSpaceGrid default_grid() { return PhaseSpaceGrid(8.0, 256, 8.0, 256); }

/// pi^-1 exp(-(x-x0)^2 - (k-k0)^2)
inline double gaussian_wigner(double x, double k, double x0 = 0.0, double k0 = 0.0) {
  return std::exp(-(x - x0) * (x - x0) - (k - k0) * (k - k0)) / kPi;
}

/// First excited state: pi^-1 (2(x^2 + k^2) - 1) exp(-x^2 - k^2)
inline double first_excited_wigner(double x, double k) {
  const double r2 = x * x + k * k;
  return (2.0 * r2 - 1.0) * std::exp(-r2) / kPi;
}

inline WignerField wigner_of(const StateSpec& spec, const PhaseSpaceGrid& grid, double tau = 0.0) {
  return wigner_transform(evaluate_state(spec, coordinate_axis(grid), tau), grid);
}

inline ScalarField random_field(const PhaseSpaceGrid& grid, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ScalarField f(grid);
  for (double& v : f.values()) v = u(rng);
  return f;
}

inline double max_abs_diff(const ScalarField& a, const ScalarField& b) {
  double worst = 0.0;
  for (std::size_t n = 0; n < a.values().size(); ++n)
    worst = std::max(worst, std::abs(a.values()[n] - b.values()[n]));
  return worst;
}

}  // namespace wigflux::testing
