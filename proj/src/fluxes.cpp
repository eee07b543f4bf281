#include "wigflux/fluxes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "wigflux/error.hpp"
#include "wigflux/observables.hpp"

namespace wigflux {

namespace {

// Lagrange weights on offsets -2..3 at fractional position t.
void lagrange_weights(double t, double w[kInterpolationPoints]) {
  for (int a = 0; a < kInterpolationPoints; ++a) {
    const double na = static_cast<double>(a - 2);
    double num = 1.0;
    double den = 1.0;
    for (int b = 0; b < kInterpolationPoints; ++b) {
      if (b == a) continue;
      const double nb = static_cast<double>(b - 2);
      num *= t - nb;
      den *= na - nb;
    }
    w[a] = num / den;
  }
}

bool inside(const PhaseSpaceGrid& g, double x, double k) {
  const double mx = kInterpolationMargin * g.h_x();
  const double mk = kInterpolationMargin * g.h_k();
  return x >= g.x_min() + mx && x <= g.x_max() - mx && k >= g.k_min() + mk && k <= g.k_max() - mk;
}

// Cell index and fraction for coordinate v on an axis starting at lo.
std::size_t locate(double v, double lo, double h, std::size_t n, double& t) {
  const double s = (v - lo) / h;
  auto cell = static_cast<std::size_t>(std::floor(s));
  cell = std::min(cell, n - 2);
  t = s - static_cast<double>(cell);
  return cell;
}

// 4-point Gauss-Legendre on [0, 1].
constexpr double kGaussNodes[4] = {0.06943184420297371, 0.33000947820757187, 0.6699905217924281,
                                   0.9305681557970262};
constexpr double kGaussWeights[4] = {0.17392742256872692, 0.3260725774312731, 0.3260725774312731,
                                     0.17392742256872692};

// Sorted k-crossings of the orbit polygon with the vertical line at x.
void scanline(const ClassicalOrbit& orbit, double x, std::vector<double>& crossings) {
  const auto& s = orbit.samples;
  const std::size_t n = s.size();
  crossings.clear();
  for (std::size_t e = 0; e < n; ++e) {
    const OrbitSample& a = s[e];
    const OrbitSample& b = s[(e + 1) % n];
    if ((a.x <= x && x < b.x) || (b.x <= x && x < a.x))
      crossings.push_back(a.k + (x - a.x) * (b.k - a.k) / (b.x - a.x));
  }
  std::sort(crossings.begin(), crossings.end());
}

ScalarField delta_jk_field(const WignerField& w, const PotentialModel& potential, int nu_max) {
  return delta_current(wigner_current(w, potential, nu_max), w, potential).jk;
}

}  // namespace

double interpolate(const ScalarField& field, double x, double k) {
  const PhaseSpaceGrid& g = field.grid();
  if (!inside(g, x, k))
    reject_numerical("fluxes.interpolate_on_orbit", "point (", x, ", ", k, ") is not ",
                     kInterpolationMargin, " cells inside the grid");
  double tx = 0.0;
  double tk = 0.0;
  const std::size_t i0 = locate(x, g.x_min(), g.h_x(), g.n_x(), tx) - 2;
  const std::size_t j0 = locate(k, g.k_min(), g.h_k(), g.n_k(), tk) - 2;
  double wx[kInterpolationPoints];
  double wk[kInterpolationPoints];
  lagrange_weights(tx, wx);
  lagrange_weights(tk, wk);
  // Differences from a base node keep constants exact.
  const double base = field(i0 + 2, j0 + 2);
  double acc = 0.0;
  for (std::size_t a = 0; a < kInterpolationPoints; ++a) {
    double row = 0.0;
    for (std::size_t b = 0; b < kInterpolationPoints; ++b)
      row += wk[b] * (field(i0 + a, j0 + b) - base);
    acc += wx[a] * row;
  }
  return base + acc;
}

std::vector<double> interpolate_on_orbit(const ScalarField& field, const ClassicalOrbit& orbit) {
  std::vector<double> out(orbit.samples.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = interpolate(field, orbit.samples[i].x, orbit.samples[i].k);
  return out;
}

NodeMask orbit_interior_mask(const ClassicalOrbit& orbit, const PhaseSpaceGrid& grid) {
  NodeMask mask(grid, false);
  std::vector<double> crossings;
  for (std::size_t i = 0; i < grid.n_x(); ++i) {
    scanline(orbit, grid.x(i), crossings);
    for (std::size_t c = 0; c + 1 < crossings.size(); c += 2) {
      for (std::size_t j = 0; j < grid.n_k(); ++j) {
        const double k = grid.k(j);
        if (k >= crossings[c] && k < crossings[c + 1]) mask.set(i, j, true);
      }
    }
  }
  return mask;
}

RegionQuadrature::RegionQuadrature(const ClassicalOrbit& orbit, const PhaseSpaceGrid& grid)
    : grid_(grid), support_(grid, false) {
  const double hx = grid.h_x();
  const double hk = grid.h_k();
  double x_lo = orbit.samples.front().x;
  double x_hi = x_lo;
  for (const OrbitSample& s : orbit.samples) {
    x_lo = std::min(x_lo, s.x);
    x_hi = std::max(x_hi, s.x);
  }
  std::vector<double> crossings;
  for (std::size_t i = 0; i + 1 < grid.n_x(); ++i) {
    // Strips end at the turning points so the square-root edge sits on a strip end.
    const double strip_lo = std::max(grid.x(i), x_lo);
    const double strip_hi = std::min(grid.x(i + 1), x_hi);
    if (!(strip_hi > strip_lo)) continue;
    for (int a = 0; a < kPointsPerCell; ++a) {
      const double x = strip_lo + kGaussNodes[a] * (strip_hi - strip_lo);
      const double wx = kGaussWeights[a] * (strip_hi - strip_lo);
      scanline(orbit, x, crossings);
      for (std::size_t c = 0; c + 1 < crossings.size(); c += 2) {
        const double lo = crossings[c];
        const double hi = crossings[c + 1];
        // Split [lo, hi] at grid lines so every piece is polynomial in k.
        double left = lo;
        while (left < hi) {
          const double line =
              grid.k_min() + (std::floor((left - grid.k_min()) / hk) + 1.0) * hk;
          const double right = std::min(hi, line);
          const double len = right - left;
          if (len > 0.0) {
            for (int b = 0; b < kPointsPerCell; ++b) {
              const double k = left + kGaussNodes[b] * len;
              if (!inside(grid, x, k))
                reject_numerical("fluxes.region", "orbit interior point (", x, ", ", k, ") is not ",
                                 kInterpolationMargin, " cells inside the grid");
              Point p;
              double tx = 0.0;
              double tk = 0.0;
              p.i0 = locate(x, grid.x_min(), hx, grid.n_x(), tx) - 2;
              p.j0 = locate(k, grid.k_min(), hk, grid.n_k(), tk) - 2;
              lagrange_weights(tx, p.wx);
              lagrange_weights(tk, p.wk);
              p.weight = wx * kGaussWeights[b] * len;
              for (std::size_t u = 0; u < kInterpolationPoints; ++u)
                for (std::size_t v = 0; v < kInterpolationPoints; ++v)
                  support_.set(p.i0 + u, p.j0 + v, true);
              points_.push_back(p);
            }
          }
          left = right;
        }
      }
    }
  }
}

double RegionQuadrature::integrate(const ScalarField& density) const {
  if (!(density.grid() == grid_))
    reject_config("fluxes.region", "density lives on a different grid");
  double sum = 0.0;
  double comp = 0.0;
  for (const Point& p : points_) {
    double acc = 0.0;
    for (std::size_t u = 0; u < kInterpolationPoints; ++u) {
      double row = 0.0;
      for (std::size_t v = 0; v < kInterpolationPoints; ++v)
        row += p.wk[v] * density(p.i0 + u, p.j0 + v);
      acc += p.wx[u] * row;
    }
    const double term = p.weight * acc;
    if (!std::isfinite(term))
      reject_numerical("fluxes.region", "non-finite density near node (", p.i0 + 2, ", ", p.j0 + 2,
                       ")");
    const double t = sum + term;
    comp += std::abs(sum) >= std::abs(term) ? (sum - t) + term : (term - t) + sum;
    sum = t;
  }
  return sum + comp;
}

double RegionQuadrature::area() const {
  double acc = 0.0;
  for (const Point& p : points_) acc += p.weight;
  return acc;
}

LoopFluxes::LoopFluxes(const WignerField& w, const ClassicalOrbit& orbit,
                       const PotentialModel& potential, int nu_max)
    : LoopFluxes(interpolate_on_orbit(w.values, orbit),
                 interpolate_on_orbit(delta_jk_field(w, potential, nu_max), orbit), orbit,
                 w.values.max_abs()) {}

LoopFluxes::LoopFluxes(std::vector<double> w_samples, std::vector<double> delta_jk_samples,
                       const ClassicalOrbit& orbit, double w_scale)
    : w_(std::move(w_samples)), djk_(std::move(delta_jk_samples)), dtau_(orbit.dtau()),
      w_scale_(w_scale) {
  if (w_.size() != orbit.samples.size() || djk_.size() != orbit.samples.size())
    reject_config("fluxes.loop", "sample count does not match the orbit");
  for (const OrbitSample& s : orbit.samples) {
    xs_.push_back(s.x);
    ks_.push_back(s.k);
    vx_.push_back(s.vx);
  }
}

double LoopFluxes::weighted_sum(const std::vector<double>& weights) const {
  double acc = 0.0;
  for (std::size_t i = 0; i < djk_.size(); ++i) acc += weights[i] * djk_[i] * vx_[i];
  return acc * dtau_;
}

double LoopFluxes::sigma() const { return -weighted_sum(std::vector<double>(djk_.size(), 1.0)); }

double LoopFluxes::svn(double epsilon) const {
  if (!(epsilon > 0.0)) reject_config("fluxes.svn_flux", "epsilon must be positive, got ", epsilon);
  std::vector<double> weights(w_.size());
  for (std::size_t i = 0; i < w_.size(); ++i) {
    const double a = std::abs(w_[i]);
    if (!(a > epsilon))
      reject_numerical("fluxes.svn_flux", "|W| = ", a, " <= epsilon ", epsilon,
                       " at orbit sample ", i, " (x=", xs_[i], ", k=", ks_[i], ")");
    weights[i] = std::log(a);
  }
  return weighted_sum(weights);
}

double LoopFluxes::purity() const { return -weighted_sum(w_); }

double LoopFluxes::renyi(double beta) const {
  if (!std::isfinite(beta) || !(beta > 0.0) || beta == 1.0)
    reject_config("fluxes.renyi_flux", "beta must be positive and differ from 1, got ", beta);
  const double floor = kNegativityFloorRelative * w_scale_;
  std::vector<double> weights(w_.size());
  for (std::size_t i = 0; i < w_.size(); ++i) {
    if (!is_integer(beta) && w_[i] < -floor)
      reject_numerical("fluxes.renyi_flux", "W = ", w_[i], " < 0 at orbit sample ", i, " (x=",
                       xs_[i], ", k=", ks_[i], ") with non-integer beta=", beta);
    weights[i] = signed_power(w_[i], beta - 1.0, floor, "fluxes.renyi_flux");
  }
  return -weighted_sum(weights);
}

double sigma_flux(const WignerField& w, const ClassicalOrbit& orbit,
                  const PotentialModel& potential, int nu_max) {
  return LoopFluxes(w, orbit, potential, nu_max).sigma();
}

double svn_flux(const WignerField& w, const ClassicalOrbit& orbit, const PotentialModel& potential,
                int nu_max, double epsilon) {
  return LoopFluxes(w, orbit, potential, nu_max).svn(epsilon);
}

double purity_flux(const WignerField& w, const ClassicalOrbit& orbit,
                   const PotentialModel& potential, int nu_max) {
  return LoopFluxes(w, orbit, potential, nu_max).purity();
}

double renyi_flux(const WignerField& w, const ClassicalOrbit& orbit,
                  const PotentialModel& potential, int nu_max, double beta) {
  return LoopFluxes(w, orbit, potential, nu_max).renyi(beta);
}

namespace {

// weight * W * div_w on every node of `nodes`; zero elsewhere and at masked nodes.
ScalarField volume_integrand(const WignerField& w, const PotentialModel& potential, int nu_max,
                             double epsilon, const NodeMask& nodes, VolumeWeight weight,
                             double beta, std::size_t& masked) {
  const PhaseSpaceGrid& g = w.values.grid();
  if (!nodes.matches(g)) reject_config("fluxes.volume_term", "region mask does not match grid");
  if (weight == VolumeWeight::renyi && (!(beta > 0.0) || beta == 1.0))
    reject_config("fluxes.volume_term", "beta must be positive and differ from 1, got ", beta);
  const MaskedScalarField dw = div_w(wigner_current(w, potential, nu_max), w, epsilon);
  const double floor = kNegativityFloorRelative * w.values.max_abs();
  ScalarField integrand(g);
  masked = 0;
  for (std::size_t i = 0; i < g.n_x(); ++i) {
    for (std::size_t j = 0; j < g.n_k(); ++j) {
      if (!nodes(i, j)) continue;
      if (!dw.valid(i, j)) {
        ++masked;
        continue;
      }
      const double v = w.values(i, j);
      double factor = v;
      switch (weight) {
        case VolumeWeight::unit: factor = v; break;
        case VolumeWeight::wigner: factor = v * v; break;
        case VolumeWeight::renyi:
          factor = (beta - 1.0) * signed_power(v, beta, floor, "fluxes.volume_term");
          break;
      }
      integrand(i, j) = factor * dw.values(i, j);
    }
  }
  return integrand;
}

// Node-wise density of a region quantity, evaluated on `nodes` only.
ScalarField quantity_density(const WignerField& w, const NodeMask& nodes, FluxQuantity quantity,
                             double beta, double epsilon) {
  const PhaseSpaceGrid& g = w.values.grid();
  const double floor = kNegativityFloorRelative * w.values.max_abs();
  if (quantity == FluxQuantity::svn && !(epsilon > 0.0))
    reject_config("observables.von_neumann_entropy", "epsilon must be positive, got ", epsilon);
  if (quantity == FluxQuantity::renyi) {
    if (!std::isfinite(beta) || !(beta > 0.0) || beta == 1.0)
      reject_config("observables.renyi_entropy", "beta must be positive and differ from 1, got ",
                    beta);
    if (!is_integer(beta)) {
      std::size_t negative = 0;
      for (std::size_t i = 0; i < g.n_x(); ++i)
        for (std::size_t j = 0; j < g.n_k(); ++j)
          if (nodes(i, j) && w.values(i, j) < -floor) ++negative;
      if (negative > 0)
        reject_numerical("observables.renyi_entropy", negative,
                         " nodes carry negative W, non-integer beta=", beta, " is undefined there");
    }
  }
  ScalarField out(g);
  for (std::size_t i = 0; i < g.n_x(); ++i) {
    for (std::size_t j = 0; j < g.n_k(); ++j) {
      if (!nodes(i, j)) continue;
      const double v = w.values(i, j);
      switch (quantity) {
        case FluxQuantity::sigma: out(i, j) = v; break;
        case FluxQuantity::svn: {
          const double a = std::abs(v);
          out(i, j) = a > epsilon ? -v * std::log(a) : 0.0;
          break;
        }
        case FluxQuantity::purity: out(i, j) = 2.0 * std::numbers::pi * v * v; break;
        case FluxQuantity::renyi:
          out(i, j) = signed_power(v, beta, floor, "observables.renyi_entropy");
          break;
      }
    }
  }
  return out;
}

}  // namespace

VolumeTerm volume_term(const WignerField& w, const PotentialModel& potential, int nu_max,
                       double epsilon, const NodeMask& region, VolumeWeight weight, double beta) {
  VolumeTerm out;
  const ScalarField integrand =
      volume_integrand(w, potential, nu_max, epsilon, region, weight, beta, out.masked_nodes);
  out.value = integrate_volume(integrand, &region);
  return out;
}

VolumeTerm volume_term(const WignerField& w, const PotentialModel& potential, int nu_max,
                       double epsilon, const RegionQuadrature& region, VolumeWeight weight,
                       double beta) {
  VolumeTerm out;
  const ScalarField integrand = volume_integrand(w, potential, nu_max, epsilon, region.support(),
                                                 weight, beta, out.masked_nodes);
  out.value = region.integrate(integrand);
  return out;
}

double region_quantity(const WignerField& w, const NodeMask& region, FluxQuantity quantity,
                       double beta, double epsilon) {
  switch (quantity) {
    case FluxQuantity::sigma: return integrate_volume(w.values, &region);
    case FluxQuantity::svn: return von_neumann_entropy(w, epsilon, &region);
    case FluxQuantity::purity: return purity(w, &region);
    case FluxQuantity::renyi: return power_integral(w, beta, &region);
  }
  return 0.0;
}

double region_quantity(const WignerField& w, const RegionQuadrature& region,
                       FluxQuantity quantity, double beta, double epsilon) {
  return region.integrate(quantity_density(w, region.support(), quantity, beta, epsilon));
}

OracleBracket oracle_bracket(const Wavefunction& phi, const PotentialModel& potential,
                             const WignerTransform& transform, double dtau_fd, double dtau_evolve) {
  if (!(dtau_fd > 0.0) || !(dtau_evolve > 0.0))
    reject_config("fluxes.oracle_flux", "dtau_fd and dtau_evolve must be positive, got ", dtau_fd,
                  " and ", dtau_evolve);
  const auto sub = static_cast<std::size_t>(std::ceil(dtau_fd / dtau_evolve - 1e-9));
  const double h = dtau_fd / static_cast<double>(std::max<std::size_t>(sub, 1));
  Wavefunction forward = phi;
  Wavefunction backward = phi;
  SplitStepPropagator(phi.grid, potential, h).advance(forward, std::max<std::size_t>(sub, 1));
  SplitStepPropagator(phi.grid, potential, -h).advance(backward, std::max<std::size_t>(sub, 1));
  forward.tau = phi.tau + dtau_fd;
  backward.tau = phi.tau - dtau_fd;
  return {transform(backward), transform(forward), dtau_fd};
}

double oracle_rate(const OracleBracket& bracket, const NodeMask& region, FluxQuantity quantity,
                   double beta, double epsilon) {
  const double plus = region_quantity(bracket.plus, region, quantity, beta, epsilon);
  const double minus = region_quantity(bracket.minus, region, quantity, beta, epsilon);
  return (plus - minus) / (2.0 * bracket.dtau_fd);
}

double oracle_rate(const OracleBracket& bracket, const RegionQuadrature& region,
                   FluxQuantity quantity, double beta, double epsilon) {
  const double plus = region_quantity(bracket.plus, region, quantity, beta, epsilon);
  const double minus = region_quantity(bracket.minus, region, quantity, beta, epsilon);
  return (plus - minus) / (2.0 * bracket.dtau_fd);
}

double oracle_flux(const StateSpec& state, const PotentialModel& potential,
                   const ClassicalOrbit& orbit, const PhaseSpaceGrid& grid, FluxQuantity quantity,
                   double beta, const OracleSettings& settings) {
  const CoordinateGrid axis = coordinate_axis(grid);
  const Wavefunction start = evaluate_state(state, axis, 0.0);
  const Wavefunction phi = evolve_to(start, potential, settings.tau, settings.dtau_evolve);
  const WignerTransform transform(axis, grid);
  const OracleBracket bracket =
      oracle_bracket(phi, potential, transform, settings.dtau_fd, settings.dtau_evolve);
  return oracle_rate(bracket, RegionQuadrature(orbit, grid), quantity, beta, settings.epsilon);
}

AccumulatedFluxes accumulate_time_consistent(const Wavefunction& phi,
                                             const PotentialModel& potential,
                                             const ClassicalOrbit& orbit,
                                             const WignerTransform& transform, int nu_max,
                                             double epsilon, std::span<const double> betas,
                                             std::size_t nodes, double dtau_evolve) {
  const char* where = "fluxes.accumulate_time_consistent";
  const std::size_t n = orbit.samples.size();
  if (nodes < 2 || nodes % 2 != 0 || n % nodes != 0)
    reject_config(where, "node count ", nodes, " must be even and divide the ", n, " orbit samples");
  const double step = orbit.period / static_cast<double>(nodes);
  const double t0 = phi.tau;

  AccumulatedFluxes out;
  out.nodes = nodes;
  out.renyi.assign(betas.size(), 0.0);
  Wavefunction current = phi;
  for (std::size_t m = 0; m <= nodes; ++m) {
    current = evolve_to(current, potential, t0 + static_cast<double>(m) * step, dtau_evolve);
    const WignerField w = transform(current);
    const ScalarField djk = delta_jk_field(w, potential, nu_max);
    const OrbitSample& s = orbit.samples[(m * (n / nodes)) % n];
    const double wv = interpolate(w.values, s.x, s.k);
    const double dj = interpolate(djk, s.x, s.k);
    const double simpson = (m == 0 || m == nodes) ? 1.0 : (m % 2 == 1 ? 4.0 : 2.0);
    const double base = simpson * step / 3.0 * dj * s.vx;

    out.sigma -= base;
    const double a = std::abs(wv);
    if (!(a > epsilon))
      reject_numerical(where, "|W| = ", a, " <= epsilon at tau=", current.tau, " (x=", s.x,
                       ", k=", s.k, ")");
    out.svn += std::log(a) * base;
    out.purity -= wv * base;
    const double floor = kNegativityFloorRelative * w.values.max_abs();
    for (std::size_t b = 0; b < betas.size(); ++b) {
      if (!is_integer(betas[b]) && wv < -floor)
        reject_numerical(where, "W = ", wv, " < 0 at tau=", current.tau,
                         " with non-integer beta=", betas[b]);
      out.renyi[b] -= signed_power(wv, betas[b] - 1.0, floor, where) * base;
    }
  }
  return out;
}

}  // namespace wigflux
