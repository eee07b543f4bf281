#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wigflux/classical.hpp"
#include "wigflux/grid.hpp"
#include "wigflux/potential.hpp"
#include "wigflux/states.hpp"

namespace wigflux {

struct PotentialConfig {
  std::string kind = "harmonic";  // harmonic | quartic | pure_quartic | double_well
  double lambda = 0.0;

  PotentialModel build() const;
};

struct StateConfig {
  std::string kind = "eigenstate";  // eigenstate | coherent | cat | superposition
  int n = 0;
  double x0 = 0.0;
  double k0 = 0.0;
  std::vector<std::pair<Complex, int>> terms;

  StateSpec build() const;
};

/// Validated run description. Every physical number is dimensionless.
struct RunConfig {
  PotentialConfig potential;
  StateConfig state;
  double x_max = 8.0;
  std::size_t n_x = 256;
  double k_max = 8.0;
  std::size_t n_k = 256;
  int nu_max = 2;
  double entropy_epsilon = 1e-30;
  double mask_relative = 1e-12;
  std::vector<double> betas = {2.0, 3.0};
  PhasePoint orbit_start{2.0, 0.0};
  double orbit_dtau = 2e-5;
  std::size_t orbit_samples = 4096;
  double dtau = 1e-3;
  double dtau_fd = 1e-3;
  std::vector<double> output_times = {0.0};
  std::size_t accumulate_nodes = 64;
  std::filesystem::path output_dir = "wigflux-out";
  bool emit_fields = false;
  /// Set when the file carried a dimensional block.
  std::optional<DimensionlessMap> units;

  PhaseSpaceGrid grid() const { return PhaseSpaceGrid(x_max, n_x, k_max, n_k); }
  /// Rejects (ErrorKind::config) anything a module precondition would refuse.
  void validate() const;
};

/// Parses the JSON text of a run file. Unknown keys are rejected. A "units"
/// block {m, omega, hbar} marks state displacements, the orbit start and all
/// times as dimensional; they are converted here.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

/// Flux values at one output time.
struct TimeRecord {
  double tau = 0.0;
  // frozen-W loop integrals
  double sigma = 0.0;
  double svn = 0.0;
  double purity = 0.0;
  std::vector<double> renyi;
  /// renyi / int_C W^beta, i.e. dR_beta/dtau
  std::vector<double> renyi_rate;
  // volume terms over the orbit interior
  double volume_unit = 0.0;
  double volume_wigner = 0.0;
  std::vector<double> volume_renyi;
  std::size_t masked_nodes = 0;
  // finite-difference rates of the enclosed quantities
  double oracle_sigma = 0.0;
  double oracle_svn = 0.0;
  double oracle_purity = 0.0;
  std::vector<double> oracle_renyi;
  // relative deviations; "printed" compares the bare loop term, "full" adds
  // the volume term
  double dev_sigma = 0.0;
  double dev_svn_printed = 0.0;
  double dev_svn_full = 0.0;
  double dev_purity_printed = 0.0;
  double dev_purity_full = 0.0;
  std::vector<double> dev_renyi_printed;
  std::vector<double> dev_renyi_full;
  // one period with W regenerated at each node, starting at tau
  double acc_sigma = 0.0;
  double acc_svn = 0.0;
  double acc_purity = 0.0;
  std::vector<double> acc_renyi;
};

struct FluxReport {
  RunConfig config;
  std::string potential_label;
  double energy = 0.0;
  double period = 0.0;
  double energy_drift = 0.0;
  double closure = 0.0;
  bool orbit_symmetric = true;
  double enclosed_area = 0.0;
  std::vector<TimeRecord> records;
  ClassicalOrbit orbit;
  /// W at each output time; filled only when emit_fields is set.
  std::vector<WignerField> fields;
};

/// Denominator floor of the relative deviations.
inline constexpr double kDeviationFloor = 1e-10;

/// |value - reference| / max(|reference|, kDeviationFloor)
double relative_deviation(double value, double reference);

/// All computation of a run; no files touched.
FluxReport compute_report(const RunConfig& config);

/// Shortest round-trip decimal text of a finite double.
std::string format_number(double v);

std::string report_json(const FluxReport& report);
std::string fluxes_csv(const FluxReport& report);
std::string orbit_csv(const ClassicalOrbit& orbit);
std::string field_csv(const WignerField& w);

/// Computes and writes report.json, fluxes.csv, orbit.csv and, when enabled,
/// fields/W_<tau>.csv. Returns the report.
FluxReport run(const RunConfig& config);

}  // namespace wigflux
