#pragma once

#include <string>

#include "wigflux/grid.hpp"
#include "wigflux/potential.hpp"
#include "wigflux/states.hpp"

namespace wigflux {

/// Phase-space representative Q^W of an operator.
struct WeylSymbol {
  ScalarField values;
  std::string label;

  static WeylSymbol identity(const PhaseSpaceGrid& grid);
  static WeylSymbol position(const PhaseSpaceGrid& grid);
  static WeylSymbol momentum(const PhaseSpaceGrid& grid);
  /// k^2/2 + U(x)
  static WeylSymbol hamiltonian(const PhaseSpaceGrid& grid, const PotentialModel& potential);
};

/// <Q> = int dV W Q^W.
double expectation(const WignerField& w, const WeylSymbol& symbol);

/// 2 pi int dV W^2.
double purity(const WignerField& w, const NodeMask* region = nullptr);

inline constexpr double kDefaultEntropyEpsilon = 1e-30;

/// -int dV W ln|W| over nodes with |W| > epsilon.
double von_neumann_entropy(const WignerField& w, double epsilon = kDefaultEntropyEpsilon,
                           const NodeMask* region = nullptr);

/// Relative floor below which a negative Wigner value counts as numerical
/// noise rather than genuine negativity when a non-integer power is taken.
/// Sits above the tail error left by truncating the Wigner integral at the
/// coordinate box edge (about 1e-9 max|W| for displaced catalog states).
inline constexpr double kNegativityFloorRelative = 1e-8;

/// int dV W^beta, the argument of the Renyi logarithm. Integer beta uses
/// signed powers; non-integer beta rejects fields with values below
/// -floor (floor = kNegativityFloorRelative * max|W|) and treats the
/// remaining non-positive nodes as zero.
double power_integral(const WignerField& w, double beta, const NodeMask* region = nullptr);

/// (1 - beta)^-1 ln int dV W^beta, natural-log units; beta > 0, beta != 1.
double renyi_entropy(const WignerField& w, double beta, const NodeMask* region = nullptr);

/// W^exponent following the same integer/non-integer rules, for a single
/// value. `floor` is the absolute negativity floor.
double signed_power(double value, double exponent, double floor, const char* where);

bool is_integer(double v) noexcept;

}  // namespace wigflux
