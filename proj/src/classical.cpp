#include "wigflux/classical.hpp"

#include <algorithm>
#include <cmath>

#include "wigflux/error.hpp"

namespace wigflux {

namespace {

constexpr double kClosureTolerance = 1e-6;
constexpr double kEnergyTolerance = 1e-8;
constexpr double kMinSpeed = 1e-12;

PhasePoint step(const PotentialModel& potential, PhasePoint p, double dt) {
  const double k_half = p.k - 0.5 * dt * potential.derivative(p.x, 1);
  const double x = p.x + dt * k_half;
  return {x, k_half - 0.5 * dt * potential.derivative(x, 1)};
}

double distance(PhasePoint a, PhasePoint b) { return std::hypot(a.x - b.x, a.k - b.k); }

}  // namespace

double hamiltonian(const PotentialModel& potential, PhasePoint p) {
  return 0.5 * p.k * p.k + potential.value(p.x);
}

PhasePoint leapfrog(const PotentialModel& potential, PhasePoint p, double dtau, std::size_t steps) {
  for (std::size_t s = 0; s < steps; ++s) p = step(potential, p, dtau);
  return p;
}

ClassicalOrbit solve_orbit(const PotentialModel& potential, PhasePoint start,
                           const OrbitOptions& options) {
  const char* where = "classical.solve_orbit";
  if (!(options.dtau > 0.0) || !std::isfinite(options.dtau))
    reject_config(where, "dtau must be positive, got ", options.dtau);
  if (options.samples < 16) reject_config(where, "need at least 16 samples, got ", options.samples);
  const double vx0 = start.k;
  const double vk0 = -potential.derivative(start.x, 1);
  if (!(std::hypot(vx0, vk0) > kMinSpeed))
    reject_config(where, "start (", start.x, ", ", start.k, ") is an equilibrium point");
  if (std::abs(start.x) > options.x_limit)
    reject_config(where, "start x=", start.x, " lies outside |x| <= ", options.x_limit);

  // Section through the start point, normal to the initial flow; the orbit
  // leaves it upward at tau = 0 and returns upward at tau = T.
  auto section = [&](PhasePoint p) { return (p.x - start.x) * vx0 + (p.k - start.k) * vk0; };
  const double reach = 1e-3 * (1.0 + std::hypot(start.x, start.k));

  PhasePoint p = start;
  double tau = 0.0;
  double g = 0.0;
  double period = -1.0;
  PhasePoint crossing{};
  const double dt = options.dtau;
  while (tau < options.tau_limit) {
    const PhasePoint next = step(potential, p, dt);
    if (!std::isfinite(next.x) || std::abs(next.x) > options.x_limit)
      reject_numerical(where, "unbounded motion: |x| exceeded ", options.x_limit, " at tau=", tau);
    const double g_next = section(next);
    if (g < 0.0 && g_next >= 0.0 && distance(next, start) < reach + 2.0 * dt * std::hypot(vx0, vk0)) {
      // Illinois-modified regula falsi on the partial step length.
      double lo = 0.0;
      double hi = dt;
      double g_lo = g;
      double g_hi = g_next;
      int side = 0;
      double mid = hi;
      for (int it = 0; it < 200 && hi - lo > 1e-16 * dt; ++it) {
        mid = (lo * g_hi - hi * g_lo) / (g_hi - g_lo);
        if (!(mid > lo && mid < hi)) mid = 0.5 * (lo + hi);
        const double g_mid = section(step(potential, p, mid));
        if (g_mid == 0.0) {
          lo = hi = mid;
          break;
        }
        if (g_mid < 0.0) {
          lo = mid;
          g_lo = g_mid;
          if (side == -1) g_hi *= 0.5;
          side = -1;
        } else {
          hi = mid;
          g_hi = g_mid;
          if (side == 1) g_lo *= 0.5;
          side = 1;
        }
      }
      period = tau + 0.5 * (lo + hi);
      crossing = step(potential, p, 0.5 * (lo + hi));
      break;
    }
    p = next;
    g = g_next;
    tau += dt;
  }
  if (period <= 0.0)
    reject_numerical(where, "no return to the start section within tau_limit=", options.tau_limit);

  ClassicalOrbit orbit;
  orbit.period = period;
  orbit.energy = hamiltonian(potential, start);
  orbit.closure = distance(crossing, start);
  if (!(orbit.closure < kClosureTolerance))
    reject_numerical(where, "orbit does not close: |x(T) - x(0)| = ", orbit.closure);

  const std::size_t n = options.samples;
  const double sample_dt = period / static_cast<double>(n);
  const auto sub = static_cast<std::size_t>(std::ceil(sample_dt / dt - 1e-12));
  const double h = sample_dt / static_cast<double>(sub);
  orbit.samples.resize(n);
  p = start;
  double x_lo = start.x;
  double x_hi = start.x;
  for (std::size_t i = 0; i < n; ++i) {
    OrbitSample& s = orbit.samples[i];
    s.tau = static_cast<double>(i) * sample_dt;
    s.x = p.x;
    s.k = p.k;
    s.vx = p.k;
    s.vk = -potential.derivative(p.x, 1);
    orbit.energy_drift = std::max(orbit.energy_drift, std::abs(hamiltonian(potential, p) - orbit.energy));
    x_lo = std::min(x_lo, p.x);
    x_hi = std::max(x_hi, p.x);
    p = leapfrog(potential, p, h, sub);
  }
  orbit.closure = std::max(orbit.closure, distance(p, start));
  if (!(orbit.closure < kClosureTolerance))
    reject_numerical(where, "resampled orbit does not close: |x(T) - x(0)| = ", orbit.closure);
  if (!(orbit.energy_drift < kEnergyTolerance))
    reject_numerical(where, "energy drift ", orbit.energy_drift, " exceeds ", kEnergyTolerance,
                     "; reduce dtau");
  orbit.symmetric_in_x = std::abs(x_hi + x_lo) <= 1e-6 * (x_hi - x_lo);

  const auto frame = orbit_frame(orbit);
  for (std::size_t i = 0; i < n; ++i) {
    orbit.samples[i].nx = frame[i].nx;
    orbit.samples[i].nk = frame[i].nk;
    orbit.samples[i].dl = frame[i].dl;
  }
  return orbit;
}

std::vector<OrbitFrame> orbit_frame(const ClassicalOrbit& orbit) {
  std::vector<OrbitFrame> frame(orbit.samples.size());
  const double dt = orbit.dtau();
  for (std::size_t i = 0; i < frame.size(); ++i) {
    const OrbitSample& s = orbit.samples[i];
    const double speed = std::hypot(s.vx, s.vk);
    if (!(speed >= kMinSpeed))
      reject_numerical("classical.orbit_frame", "flow speed ", speed, " at sample ", i, " (x=", s.x,
                       ", k=", s.k, ") is degenerate; reduce dtau");
    frame[i] = {-s.vk / speed, s.vx / speed, speed * dt};
  }
  return frame;
}

double signed_area(const ClassicalOrbit& orbit) {
  double acc = 0.0;
  for (const OrbitSample& s : orbit.samples) acc += s.x * s.vk - s.k * s.vx;
  return 0.5 * acc * orbit.dtau();
}

double circumference(const ClassicalOrbit& orbit) {
  double acc = 0.0;
  for (const OrbitSample& s : orbit.samples) acc += s.dl;
  return acc;
}

ClassicalOrbit reversed(const ClassicalOrbit& orbit) {
  ClassicalOrbit out = orbit;
  const std::size_t n = orbit.samples.size();
  const double dt = orbit.dtau();
  for (std::size_t i = 0; i < n; ++i) {
    OrbitSample s = orbit.samples[(n - i) % n];
    s.tau = static_cast<double>(i) * dt;
    s.vx = -s.vx;
    s.vk = -s.vk;
    s.nx = -s.nx;
    s.nk = -s.nk;
    out.samples[i] = s;
  }
  return out;
}

}  // namespace wigflux
