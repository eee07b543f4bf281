// Acceptance suite. `acceptance` runs every criterion; `acceptance N` runs one.
// Each criterion prints a single "criterion N ...: PASS|FAIL" line.
#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "wigflux/classical.hpp"
#include "wigflux/currents.hpp"
#include "wigflux/error.hpp"
#include "wigflux/fluxes.hpp"
#include "wigflux/observables.hpp"
#include "wigflux/states.hpp"

namespace {

using namespace wigflux;
namespace fs = std::filesystem;

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void check(bool ok, const std::string& what) {
    pass = pass && ok;
    notes.push_back((ok ? "" : "!") + what);
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string sci(double v) { return fmt("%.3e", v); }

double rel(double value, double reference) {
  return std::abs(value - reference) / std::abs(reference);
}

PhaseSpaceGrid default_grid() { return PhaseSpaceGrid(8.0, 256, 8.0, 256); }

WignerField wigner_of(const StateSpec& s, const PhaseSpaceGrid& g, double tau = 0.0) {
  return wigner_transform(evaluate_state(s, coordinate_axis(g), tau), g);
}

ClassicalOrbit orbit_through(const PotentialModel& pot, double x0, double dtau = 2e-5) {
  OrbitOptions o;
  o.dtau = dtau;
  o.samples = 4096;
  return solve_orbit(pot, {x0, 0.0}, o);
}

std::vector<StateSpec> catalog() {
  return {HarmonicEigenstate{0}, HarmonicEigenstate{1},      HarmonicEigenstate{3},
          CoherentState{1.5, -0.5}, CatState{2.0, 0.0},       CatState{1.0, 1.0},
          HarmonicSuperposition{{{Complex(1.0, 0.0), 0}, {Complex(0.0, 1.0), 2}}}};
}

// --- 1 ---------------------------------------------------------------------
Outcome wigner_fidelity() {
  Outcome o;
  const PhaseSpaceGrid g = default_grid();
  const WignerField w0 = wigner_of(HarmonicEigenstate{0}, g);
  double worst = 0.0;
  for (std::size_t i = 0; i < g.n_x(); ++i)
    for (std::size_t j = 0; j < g.n_k(); ++j) {
      const double x = g.x(i), k = g.k(j);
      worst = std::max(worst, std::abs(w0.values(i, j) - std::exp(-x * x - k * k) / kPi));
    }
  o.check(worst < 1e-6, "ground max err " + sci(worst) + " < 1e-6");

  // x = 0 is never a node of a power-of-two x grid; k = 0 is a node when n_k is odd.
  const PhaseSpaceGrid odd(8.0, 256, 8.0, 257);
  const WignerField w1 = wigner_of(HarmonicEigenstate{1}, odd);
  const double origin = interpolate(w1.values, 0.0, 0.0);
  const double err = std::abs(origin + 1.0 / kPi);
  o.check(err < 1e-5, "first excited W(0,0)=" + fmt("%.9f", origin) + " |err| " + sci(err) + " < 1e-5");
  return o;
}

// --- 2 ---------------------------------------------------------------------
Outcome normalization_and_bound() {
  Outcome o;
  const PhaseSpaceGrid g = default_grid();
  const CoordinateGrid axis = coordinate_axis(g);
  const WignerTransform t(axis, g);
  double norm_err = 0.0, excess = -1.0, purity_err = 0.0;
  auto account = [&](const WignerField& w) {
    norm_err = std::max(norm_err, std::abs(integrate_volume(w.values) - 1.0));
    excess = std::max(excess, w.values.max_abs() - 1.0 / kPi);
    purity_err = std::max(purity_err, std::abs(purity(w) - 1.0));
  };
  for (const StateSpec& s : catalog()) account(t(evaluate_state(s, axis, 0.0)));
  struct Case {
    PotentialModel pot;
    StateSpec state;
  };
  for (const Case& c : {Case{PotentialModel::harmonic(), CatState{2.0, 0.0}},
                        Case{PotentialModel::double_well(0.1), HarmonicEigenstate{0}}}) {
    Wavefunction phi = evaluate_state(c.state, axis, 0.0);
    for (int n = 1; n <= 10; ++n) {
      phi = evolve_to(phi, c.pot, 0.4 * n, 1e-3);
      account(t(phi));
    }
  }
  o.check(norm_err < 1e-6, "|int W - 1| " + sci(norm_err) + " < 1e-6");
  o.check(excess <= 1e-9, "max|W| - 1/pi " + sci(excess) + " <= 1e-9");
  o.check(purity_err < 1e-4, "|purity - 1| " + sci(purity_err) + " < 1e-4");
  return o;
}

// --- 3 ---------------------------------------------------------------------
Outcome classical_nullity() {
  Outcome o;
  const PhaseSpaceGrid g = default_grid();
  const auto pot = PotentialModel::harmonic();
  // Radius 3 keeps the cat's interference fringes positive on the loop.
  const ClassicalOrbit orbit = orbit_through(pot, 3.0);
  double dj = 0.0, dw = 0.0, flux = 0.0;
  for (const StateSpec& s : {StateSpec{HarmonicEigenstate{0}}, StateSpec{HarmonicEigenstate{1}},
                             StateSpec{CatState{1.0, 0.0}}}) {
    const WignerField w = wigner_of(s, g);
    const CurrentField j = wigner_current(w, pot, 2);
    const CurrentField d = delta_current(j, w, pot);
    dj = std::max({dj, d.jx.max_abs(), d.jk.max_abs()});
    const MaskedScalarField div = div_w(j, w, default_mask_epsilon(w));
    dw = std::max(dw, interior_max_abs(div.values, kInteriorMargin, &div.valid));
    const LoopFluxes loop(w, orbit, pot, 2);
    flux = std::max({flux, std::abs(loop.sigma()), std::abs(loop.svn(1e-30)),
                     std::abs(loop.purity())});
    for (double beta : {0.5, 2.0, 3.0}) flux = std::max(flux, std::abs(loop.renyi(beta)));
  }
  o.check(dj < 1e-14, "max|dJ| " + sci(dj) + " < 1e-14");
  o.check(dw < 5e-6, "max|div w| " + sci(dw) + " < 5e-6");
  o.check(flux < 1e-10, "max|flux| " + sci(flux) + " < 1e-10");
  return o;
}

// --- 4 ---------------------------------------------------------------------
Outcome series_termination() {
  Outcome o;
  const PhaseSpaceGrid g = default_grid();
  const WignerField w = wigner_of(CatState{2.0, 0.0}, g);
  bool zero = true, identical = true;
  for (const auto& pot : {PotentialModel::quartic(0.1), PotentialModel::pure_quartic(),
                          PotentialModel::double_well(0.1)}) {
    zero = zero && series_term(w, pot, 2).max_abs() == 0.0;
    const ScalarField a = current_k(w, pot, 1);
    const ScalarField b = current_k(w, pot, 2);
    identical = identical && std::ranges::equal(a.values(), b.values());
  }
  o.check(zero, "nu=2 term exactly zero");
  o.check(identical, "current_k nu_max 1 and 2 bit-identical");
  return o;
}

// --- 5 ---------------------------------------------------------------------
double quartic_residual(std::size_t n, double dtau) {
  const PhaseSpaceGrid g(8.0, n, 8.0, n);
  const CoordinateGrid axis = coordinate_axis(g);
  const WignerTransform t(axis, g);
  const auto pot = PotentialModel::pure_quartic();
  const double tau = 1.0;
  const Wavefunction phi = evolve_to(evaluate_state(CoherentState{1.0, 0.0}, axis, 0.0), pot, tau, dtau);
  const WignerField m = t(evolve_to(phi, pot, tau - dtau, dtau));
  const WignerField z = t(phi);
  const WignerField p = t(evolve_to(phi, pot, tau + dtau, dtau));
  return continuity_residual(m, z, p, pot, 2, dtau).interior_max;
}

Outcome continuity_convergence() {
  Outcome o;
  const double r0 = quartic_residual(128, 1e-3);
  const double r1 = quartic_residual(256, 5e-4);
  const double r2 = quartic_residual(512, 2.5e-4);
  o.check(r0 / r1 >= 3.0, "128->256 " + sci(r0) + "/" + sci(r1) + "=" + fmt("%.2f", r0 / r1) + " >= 3");
  o.check(r1 / r2 >= 3.0, "256->512 " + sci(r1) + "/" + sci(r2) + "=" + fmt("%.2f", r1 / r2) + " >= 3");
  return o;
}

// --- 6 ---------------------------------------------------------------------
Outcome flux_oracle_agreement() {
  Outcome o;
  const PhaseSpaceGrid g = default_grid();
  const CoordinateGrid axis = coordinate_axis(g);
  const WignerTransform t(axis, g);
  const auto pot = PotentialModel::pure_quartic();
  const ClassicalOrbit orbit = orbit_through(pot, 1.0);
  const RegionQuadrature region(orbit, g);
  const double tau = 0.5;
  const Wavefunction phi = evolve_to(evaluate_state(CoherentState{1.0, 0.0}, axis, 0.0), pot, tau, 1e-3);
  const WignerField w = t(phi);
  const OracleBracket bracket = oracle_bracket(phi, pot, t, 1e-3, 1e-3);
  const LoopFluxes loop(w, orbit, pot, 2);
  const double eps = default_mask_epsilon(w);

  const double sigma = loop.sigma();
  const double oracle_sigma = oracle_rate(bracket, region, FluxQuantity::sigma, 2.0, 1e-30);
  const double d_sigma = rel(sigma, oracle_sigma);
  o.check(d_sigma < 0.05, "sigma " + sci(sigma) + " vs " + sci(oracle_sigma) + " rel " + sci(d_sigma));

  const double svn = loop.svn(1e-30) + volume_term(w, pot, 2, eps, region, VolumeWeight::unit).value;
  const double oracle_svn = oracle_rate(bracket, region, FluxQuantity::svn, 2.0, 1e-30);
  const double d_svn = rel(svn, oracle_svn);
  o.check(d_svn < 0.05, "svn+vol " + sci(svn) + " vs " + sci(oracle_svn) + " rel " + sci(d_svn));

  const double purity_loop = 2.0 * kPi * loop.purity();
  const double oracle_purity = oracle_rate(bracket, region, FluxQuantity::purity, 2.0, 1e-30);
  const double d_purity = rel(purity_loop, oracle_purity);
  o.check(d_purity < 0.05,
          "2pi*purity " + sci(purity_loop) + " vs " + sci(oracle_purity) + " rel " + sci(d_purity));

  const double renyi2 = loop.renyi(2.0);
  const double d_renyi = rel(renyi2, loop.purity());
  o.check(d_renyi <= 1e-14, "renyi(2) vs purity rel " + sci(d_renyi));

  const double full =
      2.0 * kPi * (loop.purity() - volume_term(w, pot, 2, eps, region, VolumeWeight::wigner).value);
  std::printf("  diagnostic: 2pi*(purity - int W^2 div w) = %.6e vs oracle %.6e, rel %.3e\n", full,
              oracle_purity, rel(full, oracle_purity));
  return o;
}

// --- 7 ---------------------------------------------------------------------
Outcome renyi_consistency() {
  Outcome o;
  const PhaseSpaceGrid g = default_grid();
  double worst = 0.0;
  for (const StateSpec& s : catalog()) {
    const WignerField w = wigner_of(s, g);
    worst = std::max(worst, rel(std::exp(-renyi_entropy(w, 2.0)), purity(w) / (2.0 * kPi)));
  }
  o.check(worst < 1e-10, "exp(-R2) vs P/2pi rel " + sci(worst) + " < 1e-10");

  double gap = 0.0;
  for (const StateSpec& s : {StateSpec{HarmonicEigenstate{0}}, StateSpec{CoherentState{1.5, -0.5}}}) {
    const WignerField w = wigner_of(s, g);
    const double shannon = von_neumann_entropy(w, 1e-300);
    const double lo = renyi_entropy(w, 1.0 + 1e-4);
    const double hi = renyi_entropy(w, 1.0 - 1e-4);
    const double below = std::min(lo, hi) - shannon;
    const double above = shannon - std::max(lo, hi);
    gap = std::max({gap, below, above});
  }
  o.check(gap <= 1e-3, "beta=1+-1e-4 bracket miss " + sci(gap) + " <= 1e-3");
  return o;
}

// --- 8 ---------------------------------------------------------------------
double pure_quartic_period(double x_t) {
  const int n = 2000;
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const double s = std::sin((i + 0.5) * (kPi / 2.0) / n);
    acc += 1.0 / std::sqrt(1.0 + s * s);
  }
  return 4.0 * std::sqrt(2.0) / x_t * acc * (kPi / 2.0) / n;
}

Outcome orbit_quality() {
  Outcome o;
  const ClassicalOrbit h = orbit_through(PotentialModel::harmonic(), 2.0, 1e-4);
  const double dt = std::abs(h.period - 2.0 * kPi);
  const double dc = std::abs(circumference(h) - 4.0 * kPi);
  o.check(dt <= 1e-5, "|T - 2pi| " + sci(dt) + " <= 1e-5");
  o.check(dc <= 1e-4, "|L - 4pi| " + sci(dc) + " <= 1e-4");
  o.check(h.energy_drift < 1e-8, "drift " + sci(h.energy_drift) + " < 1e-8");
  const ClassicalOrbit q = orbit_through(PotentialModel::pure_quartic(), 1.0, 1e-4);
  o.check(q.energy_drift < 1e-8, "quartic drift " + sci(q.energy_drift) + " < 1e-8");
  const double dq = rel(q.period, pure_quartic_period(1.0));
  o.check(dq <= 1e-4, "quartic T " + fmt("%.8f", q.period) + " rel " + sci(dq) + " <= 1e-4");
  return o;
}

// --- 9 ---------------------------------------------------------------------
std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int run_cli(const fs::path& config, const fs::path& out, const fs::path& log) {
  const std::string cmd = std::string(WIGFLUX_CLI) + " --quiet --config " + config.string() +
                          " --out " + out.string() + " >" + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome cli_determinism() {
  Outcome o;
  const fs::path dir = fs::temp_directory_path() / "wigflux_acceptance_cli";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string body = R"({
  "potential": {"kind": "harmonic"},
  "state": {"kind": "coherent", "x0": 1.0, "k0": 0.0},
  "orbit": {"x0": 2.0, "k0": 0.0},
  "output_times": [0.0, 0.5],
  "accumulate_nodes": 8
})";
  std::ofstream(dir / "null.json") << body;
  std::string bad = body;
  bad.insert(bad.find("\"accumulate_nodes\""), "\"betas\": [1.0],\n  ");
  std::ofstream(dir / "beta1.json") << bad;

  const int a = run_cli(dir / "null.json", dir / "a", dir / "a.log");
  const int b = run_cli(dir / "null.json", dir / "b", dir / "b.log");
  o.check(a == 0 && b == 0, "exit codes " + std::to_string(a) + "," + std::to_string(b));
  const std::string fa = slurp(dir / "a" / "fluxes.csv");
  o.check(!fa.empty() && fa == slurp(dir / "b" / "fluxes.csv"), "fluxes.csv byte-identical");
  const int c = run_cli(dir / "beta1.json", dir / "c", dir / "c.log");
  o.check(c == 2, "beta=1 exit " + std::to_string(c));
  fs::remove_all(dir);
  return o;
}

struct Criterion {
  const char* name;
  std::function<Outcome()> body;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all = {
      {"wigner fidelity", wigner_fidelity},
      {"normalization and bound", normalization_and_bound},
      {"classical-limit nullity", classical_nullity},
      {"series termination", series_termination},
      {"continuity convergence", continuity_convergence},
      {"flux-oracle agreement", flux_oracle_agreement},
      {"renyi consistency", renyi_consistency},
      {"orbit quality", orbit_quality},
      {"cli determinism", cli_determinism},
  };
  return all;
}

bool run_one(std::size_t n) {
  const Criterion& c = criteria()[n - 1];
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = c.body();
  } catch (const std::exception& e) {
    o.check(false, std::string("exception: ") + e.what());
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::string detail;
  for (const std::string& note : o.notes) detail += (detail.empty() ? "" : "; ") + note;
  std::printf("criterion %zu (%s): %s [%s] (%.1fs)\n", n, c.name, o.pass ? "PASS" : "FAIL",
              detail.c_str(), secs);
  std::fflush(stdout);
  return o.pass;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::size_t> which;
  if (argc > 1) {
    const long n = std::strtol(argv[1], nullptr, 10);
    if (n < 1 || n > static_cast<long>(criteria().size())) {
      std::fprintf(stderr, "usage: acceptance [1-%zu]\n", criteria().size());
      return 2;
    }
    which.push_back(static_cast<std::size_t>(n));
  } else {
    for (std::size_t n = 1; n <= criteria().size(); ++n) which.push_back(n);
  }
  std::size_t failed = 0;
  for (std::size_t n : which) failed += run_one(n) ? 0 : 1;
  if (which.size() > 1) std::printf("%zu/%zu criteria passed\n", which.size() - failed, which.size());
  return failed == 0 ? 0 : 1;
}
