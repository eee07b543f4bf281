#include <charconv>
#include <cmath>
#include <numbers>
#include <string>

#include "json.hpp"
#include "wigflux/error.hpp"
#include "wigflux/run.hpp"

namespace wigflux {

namespace {

using ordered = nlohmann::ordered_json;

std::string beta_tag(double beta) { return format_number(beta); }

ordered config_json(const RunConfig& c) {
  ordered state;
  state["kind"] = c.state.kind;
  if (c.state.kind == "eigenstate") {
    state["n"] = c.state.n;
  } else if (c.state.kind == "superposition") {
    ordered terms = ordered::array();
    for (const auto& [coef, n] : c.state.terms)
      terms.push_back({{"n", n}, {"re", coef.real()}, {"im", coef.imag()}});
    state["terms"] = terms;
  } else {
    state["x0"] = c.state.x0;
    state["k0"] = c.state.k0;
  }
  ordered out;
  out["potential"] = {{"kind", c.potential.kind}, {"lambda", c.potential.lambda}};
  out["state"] = state;
  out["grid"] = {{"x_max", c.x_max}, {"n_x", c.n_x}, {"k_max", c.k_max}, {"n_k", c.n_k}};
  out["nu_max"] = c.nu_max;
  out["epsilon"] = {{"entropy", c.entropy_epsilon}, {"mask_relative", c.mask_relative}};
  out["betas"] = c.betas;
  out["orbit"] = {{"x0", c.orbit_start.x},
                  {"k0", c.orbit_start.k},
                  {"dtau", c.orbit_dtau},
                  {"samples", c.orbit_samples}};
  out["dtau"] = c.dtau;
  out["dtau_fd"] = c.dtau_fd;
  out["output_times"] = c.output_times;
  out["accumulate_nodes"] = c.accumulate_nodes;
  out["emit_fields"] = c.emit_fields;
  if (c.units) out["units"] = {{"m", c.units->m}, {"omega", c.units->omega}, {"hbar", c.units->hbar}};
  return out;
}

ordered by_beta(const std::vector<double>& betas, const std::vector<double>& values) {
  ordered out = ordered::object();
  for (std::size_t b = 0; b < betas.size() && b < values.size(); ++b)
    out[beta_tag(betas[b])] = values[b];
  return out;
}

ordered record_json(const TimeRecord& r, const std::vector<double>& betas) {
  ordered out;
  out["tau"] = r.tau;
  out["instantaneous"] = {{"sigma_flux", r.sigma},
                          {"svn_flux", r.svn},
                          {"purity_flux", r.purity},
                          {"purity_flux_2pi", 2.0 * std::numbers::pi * r.purity},
                          {"renyi_flux", by_beta(betas, r.renyi)},
                          {"renyi_rate", by_beta(betas, r.renyi_rate)}};
  out["volume_term"] = {{"unit", r.volume_unit},
                        {"wigner", r.volume_wigner},
                        {"renyi", by_beta(betas, r.volume_renyi)},
                        {"masked_nodes", r.masked_nodes}};
  out["oracle"] = {{"sigma", r.oracle_sigma},
                   {"svn", r.oracle_svn},
                   {"purity", r.oracle_purity},
                   {"renyi", by_beta(betas, r.oracle_renyi)}};
  out["deviation"] = {{"sigma", r.dev_sigma},
                      {"svn_printed", r.dev_svn_printed},
                      {"svn_full", r.dev_svn_full},
                      {"purity_printed", r.dev_purity_printed},
                      {"purity_full", r.dev_purity_full},
                      {"renyi_printed", by_beta(betas, r.dev_renyi_printed)},
                      {"renyi_full", by_beta(betas, r.dev_renyi_full)}};
  out["accumulated"] = {{"sigma_flux", r.acc_sigma},
                        {"svn_flux", r.acc_svn},
                        {"purity_flux", r.acc_purity},
                        {"renyi_flux", by_beta(betas, r.acc_renyi)}};
  return out;
}

void append(std::string& line, double v) {
  line += ',';
  line += format_number(v);
}

}  // namespace

std::string format_number(double v) {
  if (!std::isfinite(v)) reject_numerical("cli.format", "non-finite value ", v);
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string report_json(const FluxReport& report) {
  const auto& betas = report.config.betas;
  ordered out;
  out["config"] = config_json(report.config);
  out["potential_label"] = report.potential_label;
  out["orbit"] = {{"energy", report.energy},
                  {"period", report.period},
                  {"energy_drift", report.energy_drift},
                  {"closure", report.closure},
                  {"symmetric_in_x", report.orbit_symmetric},
                  {"enclosed_area", report.enclosed_area},
                  {"samples", report.orbit.samples.size()}};
  ordered records = ordered::array();
  for (const TimeRecord& r : report.records) records.push_back(record_json(r, betas));
  out["records"] = records;
  return out.dump(2) + "\n";
}

std::string fluxes_csv(const FluxReport& report) {
  const auto& betas = report.config.betas;
  std::string out = "tau,sigma_flux,svn_flux,purity_flux";
  for (double b : betas) out += ",renyi_flux_" + beta_tag(b);
  for (double b : betas) out += ",renyi_rate_" + beta_tag(b);
  out += ",volume_unit,volume_wigner";
  for (double b : betas) out += ",volume_renyi_" + beta_tag(b);
  out += ",masked_nodes,oracle_sigma,oracle_svn,oracle_purity";
  for (double b : betas) out += ",oracle_renyi_" + beta_tag(b);
  out += ",dev_sigma,dev_svn_printed,dev_svn_full,dev_purity_printed,dev_purity_full";
  for (double b : betas) out += ",dev_renyi_" + beta_tag(b) + "_printed";
  for (double b : betas) out += ",dev_renyi_" + beta_tag(b) + "_full";
  out += ",acc_sigma,acc_svn,acc_purity";
  for (double b : betas) out += ",acc_renyi_" + beta_tag(b);
  out += '\n';

  for (const TimeRecord& r : report.records) {
    std::string line = format_number(r.tau);
    append(line, r.sigma);
    append(line, r.svn);
    append(line, r.purity);
    for (double v : r.renyi) append(line, v);
    for (double v : r.renyi_rate) append(line, v);
    append(line, r.volume_unit);
    append(line, r.volume_wigner);
    for (double v : r.volume_renyi) append(line, v);
    line += ',' + std::to_string(r.masked_nodes);
    append(line, r.oracle_sigma);
    append(line, r.oracle_svn);
    append(line, r.oracle_purity);
    for (double v : r.oracle_renyi) append(line, v);
    append(line, r.dev_sigma);
    append(line, r.dev_svn_printed);
    append(line, r.dev_svn_full);
    append(line, r.dev_purity_printed);
    append(line, r.dev_purity_full);
    for (double v : r.dev_renyi_printed) append(line, v);
    for (double v : r.dev_renyi_full) append(line, v);
    append(line, r.acc_sigma);
    append(line, r.acc_svn);
    append(line, r.acc_purity);
    for (double v : r.acc_renyi) append(line, v);
    out += line;
    out += '\n';
  }
  return out;
}

std::string orbit_csv(const ClassicalOrbit& orbit) {
  std::string out = "tau,x_C,k_C,n_x,n_k,dl\n";
  for (const OrbitSample& s : orbit.samples) {
    std::string line = format_number(s.tau);
    append(line, s.x);
    append(line, s.k);
    append(line, s.nx);
    append(line, s.nk);
    append(line, s.dl);
    out += line;
    out += '\n';
  }
  return out;
}

std::string field_csv(const WignerField& w) {
  const PhaseSpaceGrid& g = w.values.grid();
  std::string out = "x,k,W\n";
  out.reserve(out.size() + g.size() * 48);
  for (std::size_t i = 0; i < g.n_x(); ++i) {
    for (std::size_t j = 0; j < g.n_k(); ++j) {
      std::string line = format_number(g.x(i));
      append(line, g.k(j));
      append(line, w.values(i, j));
      out += line;
      out += '\n';
    }
  }
  return out;
}

}  // namespace wigflux
