#include "wigflux/observables.hpp"

#include <cmath>
#include <numbers>

#include "wigflux/error.hpp"

namespace wigflux {

namespace {

void check_beta(double beta, const char* where) {
  if (!std::isfinite(beta) || !(beta > 0.0))
    reject_config(where, "beta must be positive, got ", beta);
  if (beta == 1.0) reject_config(where, "beta must differ from 1");
}

ScalarField map_nodes(const WignerField& w, const NodeMask* region, auto&& f) {
  ScalarField out(w.values.grid());
  const PhaseSpaceGrid& g = w.values.grid();
  if (region != nullptr && !region->matches(g))
    reject_config("observables", "region mask does not match the field grid");
  for (std::size_t i = 0; i < g.n_x(); ++i)
    for (std::size_t j = 0; j < g.n_k(); ++j)
      if (region == nullptr || (*region)(i, j)) out(i, j) = f(w.values(i, j));
  return out;
}

}  // namespace

WeylSymbol WeylSymbol::identity(const PhaseSpaceGrid& grid) {
  return {ScalarField(grid, 1.0), "1"};
}

WeylSymbol WeylSymbol::position(const PhaseSpaceGrid& grid) {
  return {ScalarField::from_function(grid, [](double x, double) { return x; }), "x"};
}

WeylSymbol WeylSymbol::momentum(const PhaseSpaceGrid& grid) {
  return {ScalarField::from_function(grid, [](double, double k) { return k; }), "k"};
}

WeylSymbol WeylSymbol::hamiltonian(const PhaseSpaceGrid& grid, const PotentialModel& potential) {
  return {ScalarField::from_function(
              grid, [&](double x, double k) { return 0.5 * k * k + potential.value(x); }),
          "H[" + potential.label() + "]"};
}

double expectation(const WignerField& w, const WeylSymbol& symbol) {
  if (!(w.values.grid() == symbol.values.grid()))
    reject_config("observables.expectation", "symbol '", symbol.label,
                  "' lives on a different grid than W");
  ScalarField product(w.values.grid());
  const auto a = w.values.values();
  const auto b = symbol.values.values();
  auto out = product.values();
  for (std::size_t n = 0; n < out.size(); ++n) {
    if (!std::isfinite(b[n]))
      reject_numerical("observables.expectation", "symbol '", symbol.label, "' not finite at node ", n);
    out[n] = a[n] * b[n];
  }
  return integrate_volume(product);
}

double purity(const WignerField& w, const NodeMask* region) {
  return 2.0 * std::numbers::pi *
         integrate_volume(map_nodes(w, region, [](double v) { return v * v; }), region);
}

double von_neumann_entropy(const WignerField& w, double epsilon, const NodeMask* region) {
  if (!(epsilon > 0.0))
    reject_config("observables.von_neumann_entropy", "epsilon must be positive, got ", epsilon);
  return -integrate_volume(map_nodes(w, region,
                                     [epsilon](double v) {
                                       const double a = std::abs(v);
                                       return a > epsilon ? v * std::log(a) : 0.0;
                                     }),
                           region);
}

bool is_integer(double v) noexcept { return std::isfinite(v) && std::floor(v) == v; }

double signed_power(double value, double exponent, double floor, const char* where) {
  if (exponent == 1.0) return value;
  if (is_integer(exponent)) return std::pow(value, exponent);
  if (value < -floor)
    reject_numerical(where, "negative Wigner value ", value, " with non-integer exponent ", exponent);
  if (value <= 0.0) return 0.0;
  return std::pow(value, exponent);
}

double power_integral(const WignerField& w, double beta, const NodeMask* region) {
  check_beta(beta, "observables.renyi_entropy");
  const double floor = kNegativityFloorRelative * w.values.max_abs();
  if (!is_integer(beta)) {
    std::size_t negative = 0;
    const PhaseSpaceGrid& g = w.values.grid();
    for (std::size_t i = 0; i < g.n_x(); ++i)
      for (std::size_t j = 0; j < g.n_k(); ++j)
        if ((region == nullptr || (*region)(i, j)) && w.values(i, j) < -floor) ++negative;
    if (negative > 0)
      reject_numerical("observables.renyi_entropy", negative,
                       " nodes carry negative W, non-integer beta=", beta, " is undefined there");
  }
  return integrate_volume(map_nodes(w, region,
                                    [&](double v) {
                                      return signed_power(v, beta, floor,
                                                          "observables.renyi_entropy");
                                    }),
                          region);
}

double renyi_entropy(const WignerField& w, double beta, const NodeMask* region) {
  const double integral = power_integral(w, beta, region);
  if (!(integral > 0.0))
    reject_numerical("observables.renyi_entropy", "int W^beta = ", integral,
                     " is not positive for beta=", beta);
  return std::log(integral) / (1.0 - beta);
}

}  // namespace wigflux
