#include "wigflux/run.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <numbers>
#include <sstream>

#include "json.hpp"
#include "wigflux/error.hpp"
#include "wigflux/fluxes.hpp"
#include "wigflux/observables.hpp"

namespace wigflux {

namespace {

using nlohmann::json;

constexpr const char* kWhere = "cli.config";

void allow_keys(const json& obj, const char* block, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) reject_config(kWhere, "'", block, "' must be an object");
  for (const auto& item : obj.items()) {
    if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return item.key() == k; }))
      reject_config(kWhere, "unknown key '", item.key(), "' in ", block);
  }
}

double number(const json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) reject_config(kWhere, "'", key, "' must be a number");
  return v.get<double>();
}

long long integer(const json& obj, const char* key, long long fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) reject_config(kWhere, "'", key, "' must be an integer");
  return v.get<long long>();
}

std::size_t count(const json& obj, const char* key, std::size_t fallback) {
  const long long v = integer(obj, key, static_cast<long long>(fallback));
  if (v < 0) reject_config(kWhere, "'", key, "' must be non-negative, got ", v);
  return static_cast<std::size_t>(v);
}

std::string text(const json& obj, const char* key, const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_string()) reject_config(kWhere, "'", key, "' must be a string");
  return v.get<std::string>();
}

std::vector<double> numbers(const json& obj, const char* key, std::vector<double> fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_array()) reject_config(kWhere, "'", key, "' must be an array of numbers");
  std::vector<double> out;
  for (const json& e : v) {
    if (!e.is_number()) reject_config(kWhere, "'", key, "' must be an array of numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

StateConfig parse_state(const json& s) {
  StateConfig out;
  out.kind = text(s, "kind", "");
  if (out.kind == "eigenstate") {
    allow_keys(s, "state", {"kind", "n"});
    out.n = static_cast<int>(integer(s, "n", 0));
  } else if (out.kind == "coherent" || out.kind == "cat") {
    allow_keys(s, "state", {"kind", "x0", "k0"});
    out.x0 = number(s, "x0", 0.0);
    out.k0 = number(s, "k0", 0.0);
  } else if (out.kind == "superposition") {
    allow_keys(s, "state", {"kind", "terms"});
    if (!s.contains("terms") || !s.at("terms").is_array())
      reject_config(kWhere, "superposition needs a 'terms' array");
    for (const json& t : s.at("terms")) {
      allow_keys(t, "state.terms[]", {"n", "re", "im"});
      out.terms.emplace_back(Complex(number(t, "re", 0.0), number(t, "im", 0.0)),
                             static_cast<int>(integer(t, "n", 0)));
    }
  } else {
    reject_config(kWhere, "unknown state kind '", out.kind,
                  "' (eigenstate, coherent, cat, superposition)");
  }
  return out;
}

void check_positive(double v, const char* name) {
  if (!std::isfinite(v) || !(v > 0.0)) reject_config(kWhere, name, " must be positive, got ", v);
}

void check_finite(double v, const char* name) {
  if (!std::isfinite(v)) reject_config(kWhere, name, " must be finite, got ", v);
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) reject(ErrorKind::io, "cli.run", "cannot open ", path.string(), " for writing");
  out << content;
  out.flush();
  if (!out) reject(ErrorKind::io, "cli.run", "failed writing ", path.string());
}

void require_finite(const TimeRecord& r) {
  auto check = [&](double v, const char* name) {
    if (!std::isfinite(v))
      reject_numerical("fluxes.report", name, " is not finite at tau=", r.tau);
  };
  check(r.sigma, "sigma_flux");
  check(r.svn, "svn_flux");
  check(r.purity, "purity_flux");
  check(r.acc_sigma, "accumulated sigma_flux");
  check(r.acc_svn, "accumulated svn_flux");
  check(r.acc_purity, "accumulated purity_flux");
  for (double v : r.renyi) check(v, "renyi_flux");
  for (double v : r.acc_renyi) check(v, "accumulated renyi_flux");
  check(r.oracle_sigma, "oracle sigma");
  check(r.oracle_svn, "oracle svn");
  check(r.oracle_purity, "oracle purity");
  for (double v : r.oracle_renyi) check(v, "oracle renyi");
}

}  // namespace

PotentialModel PotentialConfig::build() const {
  if (kind == "harmonic") return PotentialModel::harmonic();
  if (kind == "quartic") return PotentialModel::quartic(lambda);
  if (kind == "pure_quartic") return PotentialModel::pure_quartic();
  if (kind == "double_well") return PotentialModel::double_well(lambda);
  reject_config(kWhere, "unknown potential kind '", kind,
                "' (harmonic, quartic, pure_quartic, double_well)");
}

StateSpec StateConfig::build() const {
  if (kind == "eigenstate") {
    if (n < 0) reject_config(kWhere, "eigenstate index must be non-negative, got ", n);
    return HarmonicEigenstate{n};
  }
  if (kind == "coherent") return CoherentState{x0, k0};
  if (kind == "cat") return CatState{x0, k0};
  if (kind == "superposition") return HarmonicSuperposition{terms};
  reject_config(kWhere, "unknown state kind '", kind, "'");
}

void RunConfig::validate() const {
  const PotentialModel pot = potential.build();
  (void)pot;
  const PhaseSpaceGrid g = grid();
  (void)coordinate_axis(g);
  // Rejects bad superpositions and states too wide for the box.
  (void)evaluate_state(state.build(), coordinate_axis(g), 0.0);
  if (nu_max < 0 || nu_max > 4) reject_config(kWhere, "nu_max must lie in [0, 4], got ", nu_max);
  check_positive(entropy_epsilon, "epsilon.entropy");
  check_positive(mask_relative, "epsilon.mask_relative");
  for (double b : betas) {
    if (!std::isfinite(b) || !(b > 0.0)) reject_config(kWhere, "beta must be positive, got ", b);
    if (b == 1.0) reject_config(kWhere, "beta must differ from 1");
  }
  check_finite(orbit_start.x, "orbit.x0");
  check_finite(orbit_start.k, "orbit.k0");
  check_positive(orbit_dtau, "orbit.dtau");
  if (orbit_samples < 16) reject_config(kWhere, "orbit.samples must be at least 16");
  check_positive(dtau, "dtau");
  check_positive(dtau_fd, "dtau_fd");
  if (output_times.empty()) reject_config(kWhere, "output_times must not be empty");
  for (std::size_t i = 0; i < output_times.size(); ++i) {
    const double t = output_times[i];
    if (!std::isfinite(t) || t < 0.0)
      reject_config(kWhere, "output times must be finite and non-negative, got ", t);
    if (i > 0 && !(t > output_times[i - 1]))
      reject_config(kWhere, "output times must increase strictly, got ", output_times[i - 1],
                    " then ", t);
  }
  if (accumulate_nodes < 2 || accumulate_nodes % 2 != 0 || orbit_samples % accumulate_nodes != 0)
    reject_config(kWhere, "accumulate_nodes=", accumulate_nodes,
                  " must be even and divide orbit.samples=", orbit_samples);
  if (output_dir.empty()) reject_config(kWhere, "output_dir must not be empty");
}

RunConfig parse_config(std::string_view source) {
  json root;
  try {
    root = json::parse(source.begin(), source.end());
  } catch (const json::parse_error& e) {
    reject_config(kWhere, "malformed JSON: ", e.what());
  }
  allow_keys(root, "top level",
             {"potential", "state", "grid", "nu_max", "epsilon", "betas", "orbit", "dtau",
              "dtau_fd", "output_times", "accumulate_nodes", "output_dir", "emit_fields",
              "units"});
  RunConfig c;
  if (!root.contains("potential")) reject_config(kWhere, "missing 'potential'");
  if (!root.contains("state")) reject_config(kWhere, "missing 'state'");

  const json& p = root.at("potential");
  allow_keys(p, "potential", {"kind", "lambda"});
  c.potential.kind = text(p, "kind", "");
  c.potential.lambda = number(p, "lambda", 0.0);
  c.state = parse_state(root.at("state"));

  if (root.contains("grid")) {
    const json& g = root.at("grid");
    allow_keys(g, "grid", {"x_max", "n_x", "k_max", "n_k"});
    c.x_max = number(g, "x_max", c.x_max);
    c.n_x = count(g, "n_x", c.n_x);
    c.k_max = number(g, "k_max", c.k_max);
    c.n_k = count(g, "n_k", c.n_k);
  }
  c.nu_max = static_cast<int>(integer(root, "nu_max", c.nu_max));
  if (root.contains("epsilon")) {
    const json& e = root.at("epsilon");
    allow_keys(e, "epsilon", {"entropy", "mask_relative"});
    c.entropy_epsilon = number(e, "entropy", c.entropy_epsilon);
    c.mask_relative = number(e, "mask_relative", c.mask_relative);
  }
  c.betas = numbers(root, "betas", c.betas);
  if (root.contains("orbit")) {
    const json& o = root.at("orbit");
    allow_keys(o, "orbit", {"x0", "k0", "dtau", "samples"});
    c.orbit_start = {number(o, "x0", c.orbit_start.x), number(o, "k0", c.orbit_start.k)};
    c.orbit_dtau = number(o, "dtau", c.orbit_dtau);
    c.orbit_samples = count(o, "samples", c.orbit_samples);
  }
  c.dtau = number(root, "dtau", c.dtau);
  c.dtau_fd = number(root, "dtau_fd", c.dtau_fd);
  c.output_times = numbers(root, "output_times", c.output_times);
  c.accumulate_nodes = count(root, "accumulate_nodes", c.accumulate_nodes);
  c.output_dir = text(root, "output_dir", c.output_dir.string());
  if (root.contains("emit_fields")) {
    if (!root.at("emit_fields").is_boolean()) reject_config(kWhere, "'emit_fields' must be a boolean");
    c.emit_fields = root.at("emit_fields").get<bool>();
  }

  if (root.contains("units")) {
    const json& u = root.at("units");
    allow_keys(u, "units", {"m", "omega", "hbar"});
    DimensionlessMap map{number(u, "m", 1.0), number(u, "omega", 1.0), number(u, "hbar", 1.0)};
    map.validate();
    c.units = map;
    c.state.x0 = map.to_x(c.state.x0);
    c.state.k0 = map.to_k(c.state.k0);
    c.orbit_start = {map.to_x(c.orbit_start.x), map.to_k(c.orbit_start.k)};
    c.orbit_dtau = map.to_tau(c.orbit_dtau);
    c.dtau = map.to_tau(c.dtau);
    c.dtau_fd = map.to_tau(c.dtau_fd);
    for (double& t : c.output_times) t = map.to_tau(t);
  }
  c.validate();
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) reject(ErrorKind::io, "cli.config", "cannot read ", path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

double relative_deviation(double value, double reference) {
  return std::abs(value - reference) / std::max(std::abs(reference), kDeviationFloor);
}

FluxReport compute_report(const RunConfig& config) {
  config.validate();
  const PotentialModel potential = config.potential.build();
  const StateSpec spec = config.state.build();
  const PhaseSpaceGrid grid = config.grid();
  const CoordinateGrid axis = coordinate_axis(grid);
  const double two_pi = 2.0 * std::numbers::pi;

  FluxReport report;
  report.config = config;
  report.potential_label = potential.label();

  OrbitOptions options;
  options.dtau = config.orbit_dtau;
  options.samples = config.orbit_samples;
  options.x_limit = grid.x_max() - 2.0 * grid.h_x();
  report.orbit = solve_orbit(potential, config.orbit_start, options);
  report.energy = report.orbit.energy;
  report.period = report.orbit.period;
  report.energy_drift = report.orbit.energy_drift;
  report.closure = report.orbit.closure;
  report.orbit_symmetric = report.orbit.symmetric_in_x;

  const RegionQuadrature region(report.orbit, grid);
  report.enclosed_area = region.area();
  const WignerTransform transform(axis, grid);
  Wavefunction phi = evaluate_state(spec, axis, 0.0);

  const std::size_t nb = config.betas.size();
  for (const double tau : config.output_times) {
    phi = evolve_to(phi, potential, tau, config.dtau);
    const WignerField w = transform(phi);
    TimeRecord r;
    r.tau = tau;

    const LoopFluxes loop(w, report.orbit, potential, config.nu_max);
    r.sigma = loop.sigma();
    r.svn = loop.svn(config.entropy_epsilon);
    r.purity = loop.purity();
    for (double beta : config.betas) r.renyi.push_back(loop.renyi(beta));

    const double mask_eps = config.mask_relative * w.values.max_abs();
    const auto vol = [&](VolumeWeight weight, double beta) {
      const VolumeTerm t = volume_term(w, potential, config.nu_max, mask_eps, region, weight, beta);
      r.masked_nodes = std::max(r.masked_nodes, t.masked_nodes);
      return t.value;
    };
    r.volume_unit = vol(VolumeWeight::unit, 2.0);
    r.volume_wigner = vol(VolumeWeight::wigner, 2.0);
    for (double beta : config.betas) r.volume_renyi.push_back(vol(VolumeWeight::renyi, beta));

    for (std::size_t b = 0; b < nb; ++b) {
      const double q = region_quantity(w, region, FluxQuantity::renyi, config.betas[b],
                                       config.entropy_epsilon);
      if (!(q > 0.0))
        reject_numerical("fluxes.renyi_flux", "enclosed int W^beta = ", q,
                         " is not positive for beta=", config.betas[b], " at tau=", tau);
      r.renyi_rate.push_back(r.renyi[b] / q);
    }

    const OracleBracket bracket = oracle_bracket(phi, potential, transform, config.dtau_fd,
                                                 std::min(config.dtau, config.dtau_fd));
    const double eps = config.entropy_epsilon;
    r.oracle_sigma = oracle_rate(bracket, region, FluxQuantity::sigma, 2.0, eps);
    r.oracle_svn = oracle_rate(bracket, region, FluxQuantity::svn, 2.0, eps);
    r.oracle_purity = oracle_rate(bracket, region, FluxQuantity::purity, 2.0, eps);
    for (double beta : config.betas)
      r.oracle_renyi.push_back(oracle_rate(bracket, region, FluxQuantity::renyi, beta, eps));

    r.dev_sigma = relative_deviation(r.sigma, r.oracle_sigma);
    r.dev_svn_printed = relative_deviation(r.svn, r.oracle_svn);
    r.dev_svn_full = relative_deviation(r.svn + r.volume_unit, r.oracle_svn);
    r.dev_purity_printed = relative_deviation(two_pi * r.purity, r.oracle_purity);
    r.dev_purity_full = relative_deviation(two_pi * (r.purity - r.volume_wigner), r.oracle_purity);
    for (std::size_t b = 0; b < nb; ++b) {
      r.dev_renyi_printed.push_back(relative_deviation(r.renyi[b], r.oracle_renyi[b]));
      r.dev_renyi_full.push_back(
          relative_deviation(r.renyi[b] - r.volume_renyi[b], r.oracle_renyi[b]));
    }

    const AccumulatedFluxes acc =
        accumulate_time_consistent(phi, potential, report.orbit, transform, config.nu_max, eps,
                                   config.betas, config.accumulate_nodes, config.dtau);
    r.acc_sigma = acc.sigma;
    r.acc_svn = acc.svn;
    r.acc_purity = acc.purity;
    r.acc_renyi = acc.renyi;

    require_finite(r);
    report.records.push_back(std::move(r));
    if (config.emit_fields) report.fields.push_back(w);
  }
  return report;
}

FluxReport run(const RunConfig& config) {
  FluxReport report = compute_report(config);
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(config.output_dir, ec);
  if (ec)
    reject(ErrorKind::io, "cli.run", "cannot create ", config.output_dir.string(), ": ",
           ec.message());
  write_file(config.output_dir / "report.json", report_json(report));
  write_file(config.output_dir / "fluxes.csv", fluxes_csv(report));
  write_file(config.output_dir / "orbit.csv", orbit_csv(report.orbit));
  if (config.emit_fields) {
    const fs::path dir = config.output_dir / "fields";
    fs::create_directories(dir, ec);
    if (ec) reject(ErrorKind::io, "cli.run", "cannot create ", dir.string(), ": ", ec.message());
    for (const WignerField& w : report.fields)
      write_file(dir / ("W_" + format_number(w.tau) + ".csv"), field_csv(w));
  }
  return report;
}

}  // namespace wigflux
