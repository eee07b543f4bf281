#include "wigflux/states.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "wigflux/error.hpp"

namespace wigflux {

namespace {

constexpr double kEdgeDensityLimit = 1e-12;
constexpr double kNormTolerance = 1e-10;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Coherent state in closed form, already rotated to time tau in the unit
// harmonic well, without the global phase e^{-i tau / 2}.
Complex coherent_amplitude(double x0, double k0, double x, double tau) {
  const double c = std::cos(tau);
  const double s = std::sin(tau);
  const double cx = x0 * c + k0 * s;
  const double ck = k0 * c - x0 * s;
  const double d = x - cx;
  static const double norm = std::pow(std::numbers::pi, -0.25);
  return norm * std::exp(Complex(-0.5 * d * d, ck * (x - 0.5 * cx)));
}

double trapezoid_norm(const std::vector<Complex>& v, double h) {
  double acc = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double w = (i == 0 || i + 1 == v.size()) ? 0.5 : 1.0;
    acc += w * std::norm(v[i]);
  }
  return acc * h;
}

std::vector<std::pair<Complex, int>> normalized_terms(const HarmonicSuperposition& sup) {
  if (sup.terms.empty())
    reject_config("states.evaluate_state", "superposition has no terms");
  std::set<int> seen;
  double total = 0.0;
  for (const auto& [c, n] : sup.terms) {
    if (n < 0) reject_config("states.evaluate_state", "eigenstate index must be >= 0, got ", n);
    if (!seen.insert(n).second)
      reject_config("states.evaluate_state", "eigenstate ", n, " listed twice in superposition");
    total += std::norm(c);
  }
  if (!(total > 0.0) || !std::isfinite(total))
    reject_config("states.evaluate_state", "superposition coefficients have zero norm");
  auto out = sup.terms;
  const double scale = 1.0 / std::sqrt(total);
  for (auto& term : out) term.first *= scale;
  return out;
}

}  // namespace

double Wavefunction::norm_squared() const { return trapezoid_norm(values, grid.h()); }

std::vector<double> hermite_functions(int n_max, double x) {
  std::vector<double> psi(static_cast<std::size_t>(std::max(n_max, 0)) + 1);
  psi[0] = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * x * x);
  if (n_max >= 1) psi[1] = std::numbers::sqrt2 * x * psi[0];
  for (int n = 1; n < n_max; ++n) {
    const double nn = static_cast<double>(n);
    psi[n + 1] = std::sqrt(2.0 / (nn + 1.0)) * x * psi[n] - std::sqrt(nn / (nn + 1.0)) * psi[n - 1];
  }
  return psi;
}

Complex evaluate_state_at(const StateSpec& spec, double x, double tau) {
  const Complex global = std::exp(Complex(0.0, -0.5 * tau));
  return std::visit(
      Overloaded{
          [&](const HarmonicEigenstate& s) -> Complex {
            if (s.n < 0)
              reject_config("states.evaluate_state", "eigenstate index must be >= 0, got ", s.n);
            const double energy = s.n + 0.5;
            return hermite_functions(s.n, x)[static_cast<std::size_t>(s.n)] *
                   std::exp(Complex(0.0, -energy * tau));
          },
          [&](const CoherentState& s) -> Complex {
            return global * coherent_amplitude(s.x0, s.k0, x, tau);
          },
          [&](const CatState& s) -> Complex {
            const double overlap = std::exp(-(s.x0 * s.x0 + s.k0 * s.k0));
            const double norm = 1.0 / std::sqrt(2.0 * (1.0 + overlap));
            return global * norm *
                   (coherent_amplitude(s.x0, s.k0, x, tau) +
                    coherent_amplitude(-s.x0, -s.k0, x, tau));
          },
          [&](const HarmonicSuperposition& s) -> Complex {
            const auto terms = normalized_terms(s);
            int n_max = 0;
            for (const auto& t : terms) n_max = std::max(n_max, t.second);
            const auto psi = hermite_functions(n_max, x);
            Complex acc = 0.0;
            for (const auto& [c, n] : terms)
              acc += c * psi[static_cast<std::size_t>(n)] * std::exp(Complex(0.0, -(n + 0.5) * tau));
            return acc;
          },
      },
      spec);
}

Wavefunction evaluate_state(const StateSpec& spec, const CoordinateGrid& grid, double tau) {
  Wavefunction phi{grid, std::vector<Complex>(grid.n()), tau};
  if (const auto* sup = std::get_if<HarmonicSuperposition>(&spec)) {
    // Hoist the normalization and Hermite recursion out of the node loop.
    const auto terms = normalized_terms(*sup);
    int n_max = 0;
    for (const auto& t : terms) n_max = std::max(n_max, t.second);
    std::vector<Complex> phases;
    for (const auto& t : terms) phases.push_back(t.first * std::exp(Complex(0.0, -(t.second + 0.5) * tau)));
    for (std::size_t i = 0; i < grid.n(); ++i) {
      const auto psi = hermite_functions(n_max, grid.x(i));
      Complex acc = 0.0;
      for (std::size_t t = 0; t < terms.size(); ++t)
        acc += phases[t] * psi[static_cast<std::size_t>(terms[t].second)];
      phi.values[i] = acc;
    }
  } else {
    for (std::size_t i = 0; i < grid.n(); ++i) phi.values[i] = evaluate_state_at(spec, grid.x(i), tau);
  }

  const double edge = std::max(std::norm(phi.values.front()), std::norm(phi.values.back()));
  if (!(edge < kEdgeDensityLimit))
    reject_numerical("states.evaluate_state", "grid extent [", grid.x_min(), ", ", grid.x_max(),
                     "] too small: boundary density ", edge, " >= ", kEdgeDensityLimit);
  const double norm = phi.norm_squared();
  if (!(std::abs(norm - 1.0) <= kNormTolerance))
    reject_numerical("states.evaluate_state", "sampled norm ", norm,
                     " deviates from 1; grid spacing ", grid.h(), " too coarse");
  return phi;
}

WignerTransform::WignerTransform(const CoordinateGrid& coordinates,
                                 const PhaseSpaceGrid& phase_space)
    : coordinates_(coordinates), phase_space_(phase_space) {
  const double rel = std::abs(coordinates.x_max() - phase_space.x_max()) / phase_space.x_max();
  const std::size_t cells_c = coordinates.n() - 1;
  const std::size_t cells_x = phase_space.n_x() - 1;
  if (rel > 1e-12 || cells_c % cells_x != 0)
    reject_config("states.wigner_transform", "coordinate grid (x_max=", coordinates.x_max(),
                  ", n=", coordinates.n(), ") is not a refinement of the phase-space x axis (x_max=",
                  phase_space.x_max(), ", n_x=", phase_space.n_x(), ")");
  refine_ = cells_c / cells_x;

  const std::size_t n_y = coordinates.n();
  const std::size_t n_k = phase_space.n_k();
  cos_table_.resize(n_k * n_y);
  sin_table_.resize(n_k * n_y);
  for (std::size_t j = 0; j < n_k; ++j) {
    const double two_k = 2.0 * phase_space.k(j);
    for (std::size_t a = 0; a < n_y; ++a) {
      const double arg = two_k * static_cast<double>(a) * coordinates.h();
      cos_table_[j * n_y + a] = std::cos(arg);
      sin_table_[j * n_y + a] = std::sin(arg);
    }
  }
}

WignerField WignerTransform::operator()(const Wavefunction& phi) const {
  if (!(phi.grid == coordinates_) || phi.values.size() != coordinates_.n())
    reject_config("states.wigner_transform", "wavefunction grid differs from the transform grid");

  const std::size_t n_c = coordinates_.n();
  const std::size_t n_k = phase_space_.n_k();
  const double prefactor = coordinates_.h() / std::numbers::pi;
  WignerField out{ScalarField(phase_space_), phi.tau};
  std::vector<double> gr;
  std::vector<double> gi;
  double worst = 0.0;

  for (std::size_t i = 0; i < phase_space_.n_x(); ++i) {
    const std::size_t c = refine_ * i;
    const std::size_t half = std::min(c, n_c - 1 - c);
    const std::size_t len = 2 * half + 1;
    gr.resize(len);
    gi.resize(len);
    // g[a + half] = phi(x - y_a) conj(phi(x + y_a)), a = -half..half
    for (std::size_t m = 0; m < len; ++m) {
      const Complex g = phi.values[c + half - m] * std::conj(phi.values[c - half + m]);
      gr[m] = g.real();
      gi[m] = g.imag();
    }
    for (std::size_t j = 0; j < n_k; ++j) {
      const double* ct = &cos_table_[j * n_c];
      const double* st = &sin_table_[j * n_c];
      double re = 0.0;
      double im = 0.0;
      // a < 0: cos even, sin odd
      for (std::size_t m = 0; m < half; ++m) {
        const std::size_t a = half - m;
        re += ct[a] * gr[m] + st[a] * gi[m];
        im += ct[a] * gi[m] - st[a] * gr[m];
      }
      for (std::size_t m = half; m < len; ++m) {
        const std::size_t a = m - half;
        re += ct[a] * gr[m] - st[a] * gi[m];
        im += ct[a] * gi[m] + st[a] * gr[m];
      }
      out.values(i, j) = prefactor * re;
      worst = std::max(worst, std::abs(prefactor * im));
    }
  }
  last_residue_ = worst;
  if (!(worst < kImaginaryTolerance))
    reject_numerical("states.wigner_transform", "imaginary residue ", worst, " exceeds ",
                     kImaginaryTolerance, "; quadrature support is inadequate");
  return out;
}

WignerField wigner_transform(const Wavefunction& phi, const PhaseSpaceGrid& grid) {
  return WignerTransform(phi.grid, grid)(phi);
}

struct SplitStepPropagator::Impl {
  struct FftwFree {
    void operator()(fftw_complex* p) const { fftw_free(p); }
  };
  struct PlanDestroy {
    void operator()(fftw_plan_s* p) const { fftw_destroy_plan(p); }
  };

  CoordinateGrid grid;
  double dtau;
  std::vector<Complex> half_potential;
  std::vector<Complex> kinetic;  // includes the 1/n of the inverse transform
  std::unique_ptr<fftw_complex, FftwFree> buffer;
  std::unique_ptr<fftw_plan_s, PlanDestroy> forward;
  std::unique_ptr<fftw_plan_s, PlanDestroy> backward;

  Impl(const CoordinateGrid& g, const PotentialModel& potential, double dt) : grid(g), dtau(dt) {
    const std::size_t n = g.n();
    half_potential.resize(n);
    kinetic.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double u = potential.value(g.x(i));
      if (!std::isfinite(u))
        reject_numerical("states.evolve_wavefunction", "potential not finite at x=", g.x(i));
      half_potential[i] = std::exp(Complex(0.0, -0.5 * dt * u));
    }
    const double dk = 2.0 * std::numbers::pi / (static_cast<double>(n) * g.h());
    for (std::size_t m = 0; m < n; ++m) {
      const double index = m < n / 2 ? static_cast<double>(m) : static_cast<double>(m) - static_cast<double>(n);
      const double kappa = index * dk;
      kinetic[m] = std::exp(Complex(0.0, -0.5 * dt * kappa * kappa)) / static_cast<double>(n);
    }
    buffer.reset(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n)));
    const int len = static_cast<int>(n);
    forward.reset(fftw_plan_dft_1d(len, buffer.get(), buffer.get(), FFTW_FORWARD, FFTW_ESTIMATE));
    backward.reset(fftw_plan_dft_1d(len, buffer.get(), buffer.get(), FFTW_BACKWARD, FFTW_ESTIMATE));
  }

  static void multiply(fftw_complex* data, const std::vector<Complex>& factor) {
    for (std::size_t i = 0; i < factor.size(); ++i) {
      const Complex v = Complex(data[i][0], data[i][1]) * factor[i];
      data[i][0] = v.real();
      data[i][1] = v.imag();
    }
  }
};

SplitStepPropagator::SplitStepPropagator(const CoordinateGrid& grid,
                                         const PotentialModel& potential, double dtau) {
  if (!std::isfinite(dtau) || dtau == 0.0)
    reject_config("states.evolve_wavefunction", "dtau must be finite and nonzero, got ", dtau);
  impl_ = std::make_unique<Impl>(grid, potential, dtau);
}

SplitStepPropagator::~SplitStepPropagator() = default;
SplitStepPropagator::SplitStepPropagator(SplitStepPropagator&&) noexcept = default;
SplitStepPropagator& SplitStepPropagator::operator=(SplitStepPropagator&&) noexcept = default;

double SplitStepPropagator::dtau() const noexcept { return impl_->dtau; }

void SplitStepPropagator::advance(Wavefunction& phi, std::size_t steps) const {
  if (!(phi.grid == impl_->grid))
    reject_config("states.evolve_wavefunction", "wavefunction grid differs from propagator grid");
  if (steps == 0) return;
  const double before = phi.norm_squared();
  fftw_complex* data = impl_->buffer.get();
  const std::size_t n = phi.values.size();
  for (std::size_t i = 0; i < n; ++i) {
    data[i][0] = phi.values[i].real();
    data[i][1] = phi.values[i].imag();
  }
  for (std::size_t s = 0; s < steps; ++s) {
    Impl::multiply(data, impl_->half_potential);
    fftw_execute(impl_->forward.get());
    Impl::multiply(data, impl_->kinetic);
    fftw_execute(impl_->backward.get());
    Impl::multiply(data, impl_->half_potential);
  }
  for (std::size_t i = 0; i < n; ++i) phi.values[i] = Complex(data[i][0], data[i][1]);
  phi.tau += static_cast<double>(steps) * impl_->dtau;
  const double after = phi.norm_squared();
  if (!(std::abs(after - before) <= kNormTolerance * std::max(1.0, before)))
    reject_numerical("states.evolve_wavefunction", "norm drifted from ", before, " to ", after,
                     " over ", steps, " steps; enlarge or refine the grid");
}

Wavefunction evolve_wavefunction(const Wavefunction& phi, const PotentialModel& potential,
                                 double dtau, std::size_t steps) {
  Wavefunction out = phi;
  if (steps == 0) return out;
  if (!(dtau > 0.0))
    reject_config("states.evolve_wavefunction", "dtau * steps must be positive, got dtau=", dtau);
  SplitStepPropagator(phi.grid, potential, dtau).advance(out, steps);
  return out;
}

Wavefunction evolve_to(const Wavefunction& phi, const PotentialModel& potential, double target_tau,
                       double max_dtau) {
  Wavefunction out = phi;
  const double span = target_tau - phi.tau;
  if (span == 0.0) return out;
  if (!(max_dtau > 0.0))
    reject_config("states.evolve_wavefunction", "max step must be positive, got ", max_dtau);
  const auto steps = static_cast<std::size_t>(std::ceil(std::abs(span) / max_dtau - 1e-9));
  SplitStepPropagator(phi.grid, potential, span / static_cast<double>(std::max<std::size_t>(steps, 1)))
      .advance(out, std::max<std::size_t>(steps, 1));
  out.tau = target_tau;
  return out;
}

double fidelity(const Wavefunction& a, const Wavefunction& b) {
  if (!(a.grid == b.grid)) reject_config("states.fidelity", "wavefunctions on different grids");
  Complex acc = 0.0;
  const std::size_t n = a.values.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double w = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
    acc += w * std::conj(a.values[i]) * b.values[i];
  }
  return std::norm(acc * a.grid.h());
}

}  // namespace wigflux
