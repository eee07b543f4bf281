#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "wigflux/classical.hpp"
#include "wigflux/currents.hpp"
#include "wigflux/grid.hpp"
#include "wigflux/potential.hpp"
#include "wigflux/states.hpp"

namespace wigflux {

/// Nodes per axis of the tensor Lagrange interpolant (quintic).
inline constexpr int kInterpolationPoints = 6;
/// Cells an interpolation point must keep from the grid edge.
inline constexpr int kInterpolationMargin = 3;

/// Tensor-product quintic Lagrange interpolation at (x, k) from the 6x6
/// surrounding nodes.
double interpolate(const ScalarField& field, double x, double k);

std::vector<double> interpolate_on_orbit(const ScalarField& field, const ClassicalOrbit& orbit);

/// Nodes enclosed by the orbit polygon (even-odd rule, column scanlines).
NodeMask orbit_interior_mask(const ClassicalOrbit& orbit, const PhaseSpaceGrid& grid);

/// Quadrature over the interior of the orbit polygon. Gauss-Legendre points
/// are placed per grid cell and clipped to the exact scanline crossings, so
/// the region boundary is resolved below the grid spacing; grid densities are
/// read through the same Lagrange interpolant.
class RegionQuadrature {
 public:
  static constexpr int kPointsPerCell = 4;

  RegionQuadrature(const ClassicalOrbit& orbit, const PhaseSpaceGrid& grid);

  double integrate(const ScalarField& density) const;
  /// Sum of the weights; the enclosed area.
  double area() const;
  std::size_t size() const noexcept { return points_.size(); }
  const PhaseSpaceGrid& grid() const noexcept { return grid_; }
  /// Nodes read by at least one interpolation stencil.
  const NodeMask& support() const noexcept { return support_; }

 private:
  struct Point {
    std::size_t i0 = 0;
    std::size_t j0 = 0;
    double wx[kInterpolationPoints] = {};
    double wk[kInterpolationPoints] = {};
    double weight = 0.0;
  };
  PhaseSpaceGrid grid_;
  NodeMask support_;
  std::vector<Point> points_;
};

/// Loop integrals of Delta J_k against the weights {1, ln|W|, W, W^(beta-1)}
/// along one period of an orbit, with W frozen. Samples are interpolated once
/// and shared by every weight.
class LoopFluxes {
 public:
  LoopFluxes(const WignerField& w, const ClassicalOrbit& orbit, const PotentialModel& potential,
             int nu_max);
  /// From precomputed samples; `w_scale` is max|W| of the source field.
  LoopFluxes(std::vector<double> w_samples, std::vector<double> delta_jk_samples,
             const ClassicalOrbit& orbit, double w_scale);

  /// -sum dJ_k dx/dtau dtau
  double sigma() const;
  /// +sum ln|W| dJ_k dx/dtau dtau; rejects samples with |W| <= epsilon.
  double svn(double epsilon) const;
  /// -sum W dJ_k dx/dtau dtau
  double purity() const;
  /// -sum W^(beta-1) dJ_k dx/dtau dtau
  double renyi(double beta) const;

  std::span<const double> w_samples() const noexcept { return w_; }
  std::span<const double> delta_jk_samples() const noexcept { return djk_; }

 private:
  /// sum weight_i dJ_k,i (dx/dtau)_i dtau
  double weighted_sum(const std::vector<double>& weights) const;

  std::vector<double> w_;
  std::vector<double> djk_;
  std::vector<double> xs_;
  std::vector<double> ks_;
  std::vector<double> vx_;
  double dtau_ = 0.0;
  double w_scale_ = 0.0;
};

double sigma_flux(const WignerField& w, const ClassicalOrbit& orbit,
                  const PotentialModel& potential, int nu_max);
double svn_flux(const WignerField& w, const ClassicalOrbit& orbit, const PotentialModel& potential,
                int nu_max, double epsilon);
double purity_flux(const WignerField& w, const ClassicalOrbit& orbit,
                   const PotentialModel& potential, int nu_max);
double renyi_flux(const WignerField& w, const ClassicalOrbit& orbit,
                  const PotentialModel& potential, int nu_max, double beta);

enum class VolumeWeight {
  unit,    // W div w
  wigner,  // W^2 div w
  renyi,   // (beta - 1) W^beta div w
};

struct VolumeTerm {
  double value = 0.0;
  /// Region nodes excluded because |W| fell below the mask epsilon.
  std::size_t masked_nodes = 0;
};

VolumeTerm volume_term(const WignerField& w, const PotentialModel& potential, int nu_max,
                       double epsilon, const NodeMask& region, VolumeWeight weight,
                       double beta = 2.0);
/// Same integrand over the exact orbit interior.
VolumeTerm volume_term(const WignerField& w, const PotentialModel& potential, int nu_max,
                       double epsilon, const RegionQuadrature& region, VolumeWeight weight,
                       double beta = 2.0);

enum class FluxQuantity { sigma, svn, purity, renyi };

/// The region-restricted quantity whose rate the loop fluxes describe:
/// int W, -int W ln|W|, 2 pi int W^2, or int W^beta.
double region_quantity(const WignerField& w, const NodeMask& region, FluxQuantity quantity,
                       double beta, double epsilon);
double region_quantity(const WignerField& w, const RegionQuadrature& region,
                       FluxQuantity quantity, double beta, double epsilon);

/// Wigner fields one finite-difference step either side of a reference time.
struct OracleBracket {
  WignerField minus;
  WignerField plus;
  double dtau_fd = 0.0;
};

/// Steps phi forwards and backwards by dtau_fd with split-step substeps no
/// longer than dtau_evolve.
OracleBracket oracle_bracket(const Wavefunction& phi, const PotentialModel& potential,
                             const WignerTransform& transform, double dtau_fd, double dtau_evolve);

/// Central difference of region_quantity across the bracket.
double oracle_rate(const OracleBracket& bracket, const NodeMask& region, FluxQuantity quantity,
                   double beta, double epsilon);
double oracle_rate(const OracleBracket& bracket, const RegionQuadrature& region,
                   FluxQuantity quantity, double beta, double epsilon);

struct OracleSettings {
  double tau = 0.0;
  double dtau_evolve = 1e-3;
  double dtau_fd = 1e-3;
  double epsilon = 1e-30;
};

/// Independent rate of a region quantity inside the orbit, from finite
/// differences of evolved Wigner fields.
double oracle_flux(const StateSpec& state, const PotentialModel& potential,
                   const ClassicalOrbit& orbit, const PhaseSpaceGrid& grid, FluxQuantity quantity,
                   double beta, const OracleSettings& settings);

/// Loop fluxes over one period with W(tau) regenerated at each quadrature
/// node (composite Simpson over `nodes` intervals, starting at phi.tau).
struct AccumulatedFluxes {
  double sigma = 0.0;
  double svn = 0.0;
  double purity = 0.0;
  std::vector<double> renyi;
  std::size_t nodes = 0;
};

AccumulatedFluxes accumulate_time_consistent(const Wavefunction& phi,
                                             const PotentialModel& potential,
                                             const ClassicalOrbit& orbit,
                                             const WignerTransform& transform, int nu_max,
                                             double epsilon, std::span<const double> betas,
                                             std::size_t nodes, double dtau_evolve);

}  // namespace wigflux
