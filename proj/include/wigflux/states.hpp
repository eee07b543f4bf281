#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <utility>
#include <variant>
#include <vector>

#include "wigflux/grid.hpp"
#include "wigflux/potential.hpp"

namespace wigflux {

using Complex = std::complex<double>;

/// Sampled dimensionless wavefunction phi(x; tau).
struct Wavefunction {
  CoordinateGrid grid;
  std::vector<Complex> values;
  double tau = 0.0;

  /// Trapezoidal integral of |phi|^2.
  double norm_squared() const;
};

struct HarmonicEigenstate {
  int n = 0;
};

/// Minimum-uncertainty Gaussian centred on (x0, k0).
struct CoherentState {
  double x0 = 0.0;
  double k0 = 0.0;
};

/// Even cat state |alpha> + |-alpha>, alpha = (x0 + i k0)/sqrt(2).
struct CatState {
  double x0 = 0.0;
  double k0 = 0.0;
};

/// sum_n c_n |n> over harmonic eigenstates; coefficients are renormalized.
struct HarmonicSuperposition {
  std::vector<std::pair<Complex, int>> terms;
};

using StateSpec = std::variant<HarmonicEigenstate, CoherentState, CatState, HarmonicSuperposition>;

/// Hermite functions psi_0..psi_{n_max} at x (orthonormal on the real line).
std::vector<double> hermite_functions(int n_max, double x);

/// phi(x; tau) for the given state. Time dependence is the exact harmonic-oscillator
/// evolution (U = x^2/2).
Complex evaluate_state_at(const StateSpec& spec, double x, double tau);

/// Samples the state on the grid. Rejects when the density at either edge is
/// 1e-12 or more, or when the sampled norm misses 1 by more than 1e-10.
Wavefunction evaluate_state(const StateSpec& spec, const CoordinateGrid& grid, double tau);

/// Real-valued Wigner field W(x, k; tau).
struct WignerField {
  ScalarField values;
  double tau = 0.0;
};

/// Direct y-quadrature of W(x,k) = pi^-1 int dy e^{2iky} phi(x-y) phi*(x+y).
/// Sine/cosine tables are built once per grid pair so that repeated
/// transforms along an evolution are cheap.
class WignerTransform {
 public:
  /// Residue threshold on the imaginary part of the quadrature sum.
  static constexpr double kImaginaryTolerance = 1e-10;

  /// The coordinate grid must share the phase-space x extent and refine its
  /// spacing by an integer factor.
  WignerTransform(const CoordinateGrid& coordinates, const PhaseSpaceGrid& phase_space);

  WignerField operator()(const Wavefunction& phi) const;
  /// Largest |imaginary residue| seen in the most recent call.
  double last_imaginary_residue() const noexcept { return last_residue_; }

 private:
  CoordinateGrid coordinates_;
  PhaseSpaceGrid phase_space_;
  std::size_t refine_ = 1;
  std::vector<double> cos_table_;  // [j * n_y + a] = cos(2 k_j y_a), a >= 0
  std::vector<double> sin_table_;
  mutable double last_residue_ = 0.0;
};

WignerField wigner_transform(const Wavefunction& phi, const PhaseSpaceGrid& grid);

/// Strang split-step propagator: half potential phase, kinetic phase exp(-i
/// kappa^2 dtau / 2) in the discrete Fourier domain, half potential phase.
class SplitStepPropagator {
 public:
  /// Allowed drift of the squared norm before the step is rejected.
  static constexpr double kNormTolerance = 1e-8;

  SplitStepPropagator(const CoordinateGrid& grid, const PotentialModel& potential, double dtau);
  ~SplitStepPropagator();
  SplitStepPropagator(SplitStepPropagator&&) noexcept;
  SplitStepPropagator& operator=(SplitStepPropagator&&) noexcept;
  SplitStepPropagator(const SplitStepPropagator&) = delete;
  SplitStepPropagator& operator=(const SplitStepPropagator&) = delete;

  double dtau() const noexcept;
  /// Advances phi in place; dtau may be negative.
  void advance(Wavefunction& phi, std::size_t steps) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

Wavefunction evolve_wavefunction(const Wavefunction& phi, const PotentialModel& potential,
                                 double dtau, std::size_t steps);

/// Evolves to `target_tau` with the largest step not exceeding |max_dtau|.
Wavefunction evolve_to(const Wavefunction& phi, const PotentialModel& potential,
                       double target_tau, double max_dtau);

/// |<a|b>|^2 by trapezoidal quadrature.
double fidelity(const Wavefunction& a, const Wavefunction& b);

}  // namespace wigflux
