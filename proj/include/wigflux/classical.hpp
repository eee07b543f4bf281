#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "wigflux/potential.hpp"

namespace wigflux {

struct PhasePoint {
  double x = 0.0;
  double k = 0.0;
};

/// One sample of a closed classical path: position, flow velocity
/// v = (dx/dtau, dk/dtau), unit normal and line-element weight.
struct OrbitSample {
  double tau = 0.0;
  double x = 0.0;
  double k = 0.0;
  double vx = 0.0;
  double vk = 0.0;
  double nx = 0.0;
  double nk = 0.0;
  double dl = 0.0;
};

/// One period of a classical orbit resampled uniformly in tau, starting at
/// the start point (the closing point tau = T is not repeated).
struct ClassicalOrbit {
  std::vector<OrbitSample> samples;
  double period = 0.0;
  double energy = 0.0;
  /// Largest |H(sample) - energy|.
  double energy_drift = 0.0;
  /// Distance between the start and the refined return point.
  double closure = 0.0;
  /// False when the orbit is not mirror-symmetric in x (e.g. one well of the
  /// double well).
  bool symmetric_in_x = true;

  double dtau() const noexcept { return period / static_cast<double>(samples.size()); }
};

struct OrbitOptions {
  double dtau = 1e-4;
  std::size_t samples = 4096;
  /// Reject once |x| exceeds this bound.
  double x_limit = std::numeric_limits<double>::infinity();
  double tau_limit = 1e3;
};

/// k^2/2 + U(x)
double hamiltonian(const PotentialModel& potential, PhasePoint p);

/// Velocity-Verlet (kick-drift-kick) steps of dx/dtau = k, dk/dtau = -U'(x).
/// Negative dtau integrates backwards.
PhasePoint leapfrog(const PotentialModel& potential, PhasePoint p, double dtau, std::size_t steps);

/// Integrates from `start`, finds the period from the second same-direction
/// crossing of the section through `start` transverse to the flow, and
/// resamples one period.
ClassicalOrbit solve_orbit(const PotentialModel& potential, PhasePoint start,
                           const OrbitOptions& options = {});

struct OrbitFrame {
  double nx = 0.0;
  double nk = 0.0;
  double dl = 0.0;
};

/// n = (-dk/dtau, dx/dtau)/|v|, dl = |v| dtau for every sample.
std::vector<OrbitFrame> orbit_frame(const ClassicalOrbit& orbit);

/// Signed area from (1/2) loop integral (x dk - k dx); negative for clockwise
/// traversal in the (x, k) plane.
double signed_area(const ClassicalOrbit& orbit);

/// Sum of the line elements.
double circumference(const ClassicalOrbit& orbit);

/// Same path traversed backwards: samples reversed, velocities and normals
/// negated.
ClassicalOrbit reversed(const ClassicalOrbit& orbit);

}  // namespace wigflux
