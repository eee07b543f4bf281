#include "wigflux/currents.hpp"

#include <algorithm>
#include <cmath>

#include "wigflux/error.hpp"

namespace wigflux {

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= static_cast<double>(i);
  return f;
}

void require_same_grid(const ScalarField& a, const ScalarField& b, const char* where) {
  if (!(a.grid() == b.grid())) reject_config(where, "fields live on different grids");
}

}  // namespace

ScalarField current_x(const WignerField& w) {
  const PhaseSpaceGrid& g = w.values.grid();
  ScalarField jx(g);
  for (std::size_t i = 0; i < g.n_x(); ++i)
    for (std::size_t j = 0; j < g.n_k(); ++j) jx(i, j) = g.k(j) * w.values(i, j);
  return jx;
}

ScalarField series_term(const WignerField& w, const PotentialModel& potential, int nu) {
  if (nu < 1 || nu > kMaxSeriesOrder)
    reject_numerical("currents.current_k", "series order ", nu, " outside [1, ", kMaxSeriesOrder, "]");
  const PhaseSpaceGrid& g = w.values.grid();
  ScalarField term(g);
  const int odd = 2 * nu + 1;
  if (potential.derivative_vanishes(odd)) return term;
  // (i/2)^{2nu} = (-1/4)^nu
  const double coefficient = -std::pow(-0.25, nu) / factorial(odd);
  const ScalarField dk = partial_derivative(w.values, Axis::k, 2 * nu);
  for (std::size_t i = 0; i < g.n_x(); ++i) {
    const double force = coefficient * potential.derivative(g.x(i), odd);
    for (std::size_t j = 0; j < g.n_k(); ++j) term(i, j) = force * dk(i, j);
  }
  return term;
}

ScalarField current_k(const WignerField& w, const PotentialModel& potential, int nu_max) {
  if (nu_max < 0 || nu_max > kMaxSeriesOrder)
    reject_numerical("currents.current_k", "nu_max=", nu_max, " outside supported range [0, ",
                     kMaxSeriesOrder, "]");
  const PhaseSpaceGrid& g = w.values.grid();
  ScalarField jk(g);
  for (std::size_t i = 0; i < g.n_x(); ++i) {
    const double slope = potential.derivative(g.x(i), 1);
    for (std::size_t j = 0; j < g.n_k(); ++j) jk(i, j) = -(slope * w.values(i, j));
  }
  for (int nu = 1; nu <= nu_max; ++nu) {
    if (potential.derivative_vanishes(2 * nu + 1)) continue;
    const ScalarField term = series_term(w, potential, nu);
    auto out = jk.values();
    const auto add = term.values();
    for (std::size_t n = 0; n < out.size(); ++n) out[n] += add[n];
  }
  return jk;
}

CurrentField wigner_current(const WignerField& w, const PotentialModel& potential, int nu_max) {
  return {current_x(w), current_k(w, potential, nu_max), w.tau, nu_max};
}

CurrentField delta_current(const CurrentField& j, const WignerField& w,
                           const PotentialModel& potential) {
  require_same_grid(j.jk, w.values, "currents.delta_current");
  if (j.tau != w.tau)
    reject_config("currents.delta_current", "current at tau=", j.tau, " but W at tau=", w.tau);
  const PhaseSpaceGrid& g = w.values.grid();
  CurrentField out{ScalarField(g), ScalarField(g), j.tau, j.nu_max};
  for (std::size_t i = 0; i < g.n_x(); ++i) {
    const double slope = potential.derivative(g.x(i), 1);
    for (std::size_t n = 0; n < g.n_k(); ++n) out.jk(i, n) = j.jk(i, n) + slope * w.values(i, n);
  }
  return out;
}

double default_mask_epsilon(const WignerField& w) { return 1e-12 * w.values.max_abs(); }

MaskedVectorField phase_velocity(const CurrentField& j, const WignerField& w, double epsilon) {
  if (!(epsilon > 0.0))
    reject_config("currents.phase_velocity", "epsilon must be positive, got ", epsilon);
  require_same_grid(j.jx, w.values, "currents.phase_velocity");
  const PhaseSpaceGrid& g = w.values.grid();
  MaskedVectorField out{ScalarField(g), ScalarField(g), NodeMask(g, false)};
  for (std::size_t i = 0; i < g.n_x(); ++i) {
    for (std::size_t n = 0; n < g.n_k(); ++n) {
      const double v = w.values(i, n);
      if (!(std::abs(v) > epsilon)) continue;
      out.x(i, n) = j.jx(i, n) / v;
      out.k(i, n) = j.jk(i, n) / v;
      out.valid.set(i, n, true);
    }
  }
  return out;
}

ScalarField divergence(const CurrentField& j) {
  ScalarField div = partial_derivative(j.jx, Axis::x, 1);
  const ScalarField dk = partial_derivative(j.jk, Axis::k, 1);
  auto out = div.values();
  const auto add = dk.values();
  for (std::size_t n = 0; n < out.size(); ++n) out[n] += add[n];
  return div;
}

MaskedScalarField div_w(const CurrentField& j, const WignerField& w, double epsilon) {
  if (!(epsilon > 0.0)) reject_config("currents.div_w", "epsilon must be positive, got ", epsilon);
  require_same_grid(j.jx, w.values, "currents.div_w");
  const PhaseSpaceGrid& g = w.values.grid();
  const ScalarField div_j = divergence(j);
  const ScalarField dwx = partial_derivative(w.values, Axis::x, 1);
  const ScalarField dwk = partial_derivative(w.values, Axis::k, 1);
  MaskedScalarField out{ScalarField(g), NodeMask(g, false)};
  for (std::size_t i = 0; i < g.n_x(); ++i) {
    for (std::size_t n = 0; n < g.n_k(); ++n) {
      const double v = w.values(i, n);
      if (!(std::abs(v) > epsilon)) continue;
      const double transport = j.jx(i, n) * dwx(i, n) + j.jk(i, n) * dwk(i, n);
      out.values(i, n) = (v * div_j(i, n) - transport) / (v * v);
      out.valid.set(i, n, true);
    }
  }
  return out;
}

double interior_max_abs(const ScalarField& field, std::size_t margin, const NodeMask* valid) {
  const PhaseSpaceGrid& g = field.grid();
  double worst = 0.0;
  for (std::size_t i = margin; i + margin < g.n_x(); ++i)
    for (std::size_t n = margin; n + margin < g.n_k(); ++n)
      if (valid == nullptr || (*valid)(i, n)) worst = std::max(worst, std::abs(field(i, n)));
  return worst;
}

ContinuityResidual continuity_residual(const WignerField& w_minus, const WignerField& w_0,
                                       const WignerField& w_plus, const PotentialModel& potential,
                                       int nu_max, double dtau) {
  if (!(dtau > 0.0))
    reject_config("currents.continuity_residual", "dtau must be positive, got ", dtau);
  const double tol = 1e-9 * std::max(1.0, std::abs(w_0.tau));
  if (std::abs((w_0.tau - w_minus.tau) - dtau) > tol || std::abs((w_plus.tau - w_0.tau) - dtau) > tol)
    reject_config("currents.continuity_residual", "snapshot taus ", w_minus.tau, ", ", w_0.tau,
                  ", ", w_plus.tau, " are not spaced by dtau=", dtau);
  require_same_grid(w_minus.values, w_0.values, "currents.continuity_residual");
  require_same_grid(w_plus.values, w_0.values, "currents.continuity_residual");

  ScalarField residual = divergence(wigner_current(w_0, potential, nu_max));
  auto out = residual.values();
  const auto plus = w_plus.values.values();
  const auto minus = w_minus.values.values();
  const double inv = 1.0 / (2.0 * dtau);
  for (std::size_t n = 0; n < out.size(); ++n) out[n] += (plus[n] - minus[n]) * inv;
  const double worst = interior_max_abs(residual, kInteriorMargin);
  return {std::move(residual), worst};
}

}  // namespace wigflux
