#pragma once

#include "wigflux/grid.hpp"
#include "wigflux/potential.hpp"
#include "wigflux/states.hpp"

namespace wigflux {

/// Highest Moyal-series order accepted by current_k.
inline constexpr int kMaxSeriesOrder = kMaxDerivativeOrder / 2;
inline constexpr int kDefaultSeriesOrder = 2;

/// Wigner current (J_x, J_k) with the series truncation order used.
struct CurrentField {
  ScalarField jx;
  ScalarField jk;
  double tau = 0.0;
  int nu_max = 0;
};

/// A vector field with the nodes where it is defined.
struct MaskedVectorField {
  ScalarField x;
  ScalarField k;
  NodeMask valid;
};

struct MaskedScalarField {
  ScalarField values;
  NodeMask valid;
};

/// J_x = k W.
ScalarField current_x(const WignerField& w);

/// J_k = -sum_{nu=0}^{nu_max} (-1/4)^nu / (2nu+1)! U^(2nu+1)(x) d^{2nu}W/dk^{2nu}.
/// Terms whose potential derivative vanishes identically are skipped.
ScalarField current_k(const WignerField& w, const PotentialModel& potential, int nu_max);

/// Single nu >= 1 term of the series (zero field when it vanishes).
ScalarField series_term(const WignerField& w, const PotentialModel& potential, int nu);

CurrentField wigner_current(const WignerField& w, const PotentialModel& potential, int nu_max);

/// J - v W with v = (k, -U'): x component identically zero, k component the
/// nu >= 1 remainder.
CurrentField delta_current(const CurrentField& j, const WignerField& w,
                           const PotentialModel& potential);

/// Default exclusion threshold for w = J/W: 1e-12 max|W|.
double default_mask_epsilon(const WignerField& w);

/// w = J / W where |W| > epsilon.
MaskedVectorField phase_velocity(const CurrentField& j, const WignerField& w, double epsilon);

/// div w = (W div J - J . grad W) / W^2 where |W| > epsilon.
MaskedScalarField div_w(const CurrentField& j, const WignerField& w, double epsilon);

/// div J = dJ_x/dx + dJ_k/dk.
ScalarField divergence(const CurrentField& j);

struct ContinuityResidual {
  ScalarField residual;
  /// Max |residual| away from the edge band touched by the stencils.
  double interior_max = 0.0;
};

/// Nodes from each edge left out of interior norms.
inline constexpr std::size_t kInteriorMargin = 4;

/// (W+ - W-)/(2 dtau) + div J(W0), the discrete continuity balance.
ContinuityResidual continuity_residual(const WignerField& w_minus, const WignerField& w_0,
                                       const WignerField& w_plus, const PotentialModel& potential,
                                       int nu_max, double dtau);

/// Max |field| over nodes at least `margin` from every edge, restricted to
/// `valid` when given.
double interior_max_abs(const ScalarField& field, std::size_t margin,
                        const NodeMask* valid = nullptr);

}  // namespace wigflux
