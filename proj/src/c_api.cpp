#include "wigflux/wigflux.h"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "wigflux/classical.hpp"
#include "wigflux/error.hpp"
#include "wigflux/fluxes.hpp"
#include "wigflux/observables.hpp"
#include "wigflux/run.hpp"

struct wf_grid {
  wigflux::PhaseSpaceGrid grid;
};

struct wf_potential {
  wigflux::PotentialModel model;
};

struct wf_field {
  wigflux::WignerField field;
};

struct wf_orbit {
  wigflux::ClassicalOrbit orbit;
};

namespace {

thread_local std::string last_error;

wf_status status_of(wigflux::ErrorKind kind) {
  switch (kind) {
    case wigflux::ErrorKind::config: return WF_ERR_CONFIG;
    case wigflux::ErrorKind::numerical: return WF_ERR_NUMERICAL;
    case wigflux::ErrorKind::io: return WF_ERR_IO;
  }
  return WF_ERR_INTERNAL;
}

template <class F>
wf_status guarded(F&& body) {
  try {
    body();
    last_error.clear();
    return WF_OK;
  } catch (const wigflux::Error& e) {
    last_error = e.where() + ": " + e.what();
    return status_of(e.kind());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return WF_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return WF_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown failure";
    return WF_ERR_INTERNAL;
  }
}

void require(const void* p, const char* what) {
  if (p == nullptr) wigflux::reject_config("capi", what, " must not be NULL");
}

wigflux::StateSpec to_spec(const wf_state_spec& s) {
  switch (s.kind) {
    case WF_STATE_EIGENSTATE: return wigflux::HarmonicEigenstate{s.n};
    case WF_STATE_COHERENT: return wigflux::CoherentState{s.x0, s.k0};
    case WF_STATE_CAT: return wigflux::CatState{s.x0, s.k0};
  }
  wigflux::reject_config("capi", "unknown state kind ", static_cast<int>(s.kind));
}

wigflux::FluxQuantity to_quantity(wf_quantity q) {
  switch (q) {
    case WF_SIGMA: return wigflux::FluxQuantity::sigma;
    case WF_SVN: return wigflux::FluxQuantity::svn;
    case WF_PURITY: return wigflux::FluxQuantity::purity;
    case WF_RENYI: return wigflux::FluxQuantity::renyi;
  }
  wigflux::reject_config("capi", "unknown quantity ", static_cast<int>(q));
}

}  // namespace

extern "C" {

const char* wf_last_error(void) { return last_error.c_str(); }

const char* wf_version(void) { return "0.1.0"; }

wf_status wf_grid_create(double x_max, size_t n_x, double k_max, size_t n_k, wf_grid** out) {
  return guarded([&] {
    require(out, "out");
    *out = new wf_grid{wigflux::PhaseSpaceGrid(x_max, n_x, k_max, n_k)};
  });
}

void wf_grid_destroy(wf_grid* grid) { delete grid; }

wf_status wf_potential_create(const char* kind, double lambda, wf_potential** out) {
  return guarded([&] {
    require(kind, "kind");
    require(out, "out");
    *out = new wf_potential{wigflux::PotentialConfig{kind, lambda}.build()};
  });
}

void wf_potential_destroy(wf_potential* potential) { delete potential; }

wf_status wf_potential_derivative(const wf_potential* potential, double x, int order,
                                  double* out) {
  return guarded([&] {
    require(potential, "potential");
    require(out, "out");
    if (order < 0) wigflux::reject_config("capi", "derivative order must be >= 0, got ", order);
    *out = order == 0 ? potential->model.value(x) : potential->model.derivative(x, order);
  });
}

wf_status wf_field_from_state(const wf_grid* grid, const wf_state_spec* state,
                              const wf_potential* potential, double tau, double dtau,
                              wf_field** out) {
  return guarded([&] {
    require(grid, "grid");
    require(state, "state");
    require(potential, "potential");
    require(out, "out");
    const wigflux::CoordinateGrid axis = wigflux::coordinate_axis(grid->grid);
    wigflux::Wavefunction phi = wigflux::evaluate_state(to_spec(*state), axis, 0.0);
    if (tau != 0.0) phi = wigflux::evolve_to(phi, potential->model, tau, dtau);
    *out = new wf_field{wigflux::WignerTransform(axis, grid->grid)(phi)};
  });
}

void wf_field_destroy(wf_field* field) { delete field; }

size_t wf_field_size(const wf_field* field) {
  return field == nullptr ? 0 : field->field.values.grid().size();
}

wf_status wf_field_values(const wf_field* field, double* buffer, size_t len) {
  return guarded([&] {
    require(field, "field");
    require(buffer, "buffer");
    const auto values = field->field.values.values();
    if (len < values.size())
      wigflux::reject_config("capi", "buffer holds ", len, " values, field has ", values.size());
    std::memcpy(buffer, values.data(), values.size() * sizeof(double));
  });
}

wf_status wf_normalization(const wf_field* field, double* out) {
  return guarded([&] {
    require(field, "field");
    require(out, "out");
    *out = wigflux::integrate_volume(field->field.values);
  });
}

wf_status wf_purity(const wf_field* field, double* out) {
  return guarded([&] {
    require(field, "field");
    require(out, "out");
    *out = wigflux::purity(field->field);
  });
}

wf_status wf_von_neumann_entropy(const wf_field* field, double epsilon, double* out) {
  return guarded([&] {
    require(field, "field");
    require(out, "out");
    *out = wigflux::von_neumann_entropy(field->field, epsilon);
  });
}

wf_status wf_renyi_entropy(const wf_field* field, double beta, double* out) {
  return guarded([&] {
    require(field, "field");
    require(out, "out");
    *out = wigflux::renyi_entropy(field->field, beta);
  });
}

wf_status wf_orbit_create(const wf_potential* potential, double x0, double k0, double dtau,
                          size_t samples, wf_orbit** out) {
  return guarded([&] {
    require(potential, "potential");
    require(out, "out");
    wigflux::OrbitOptions options;
    options.dtau = dtau;
    options.samples = samples;
    *out = new wf_orbit{wigflux::solve_orbit(potential->model, {x0, k0}, options)};
  });
}

void wf_orbit_destroy(wf_orbit* orbit) { delete orbit; }

double wf_orbit_period(const wf_orbit* orbit) { return orbit == nullptr ? 0.0 : orbit->orbit.period; }

double wf_orbit_energy(const wf_orbit* orbit) { return orbit == nullptr ? 0.0 : orbit->orbit.energy; }

size_t wf_orbit_sample_count(const wf_orbit* orbit) {
  return orbit == nullptr ? 0 : orbit->orbit.samples.size();
}

wf_status wf_orbit_points(const wf_orbit* orbit, double* x, double* k, size_t len) {
  return guarded([&] {
    require(orbit, "orbit");
    const auto& s = orbit->orbit.samples;
    if (len < s.size())
      wigflux::reject_config("capi", "buffers hold ", len, " values, orbit has ", s.size());
    for (size_t i = 0; i < s.size(); ++i) {
      if (x != nullptr) x[i] = s[i].x;
      if (k != nullptr) k[i] = s[i].k;
    }
  });
}

wf_status wf_loop_fluxes(const wf_field* field, const wf_orbit* orbit,
                         const wf_potential* potential, int nu_max, double epsilon,
                         const double* betas, size_t n_betas, wf_loop_values* out,
                         double* renyi_out) {
  return guarded([&] {
    require(field, "field");
    require(orbit, "orbit");
    require(potential, "potential");
    require(out, "out");
    if (n_betas > 0) {
      require(betas, "betas");
      require(renyi_out, "renyi_out");
    }
    const wigflux::LoopFluxes loop(field->field, orbit->orbit, potential->model, nu_max);
    wf_loop_values v{loop.sigma(), loop.svn(epsilon), loop.purity()};
    for (size_t b = 0; b < n_betas; ++b) renyi_out[b] = loop.renyi(betas[b]);
    *out = v;
  });
}

wf_status wf_oracle_flux(const wf_grid* grid, const wf_state_spec* state,
                         const wf_potential* potential, const wf_orbit* orbit,
                         wf_quantity quantity, double beta, double tau, double dtau_fd,
                         double* out) {
  return guarded([&] {
    require(grid, "grid");
    require(state, "state");
    require(potential, "potential");
    require(orbit, "orbit");
    require(out, "out");
    wigflux::OracleSettings settings;
    settings.tau = tau;
    settings.dtau_fd = dtau_fd;
    settings.dtau_evolve = std::min(settings.dtau_evolve, dtau_fd);
    *out = wigflux::oracle_flux(to_spec(*state), potential->model, orbit->orbit, grid->grid,
                                to_quantity(quantity), beta, settings);
  });
}

wf_status wf_run_config_file(const char* path, const char* out_dir, int emit_fields,
                             char* summary, size_t summary_len) {
  return guarded([&] {
    require(path, "path");
    wigflux::RunConfig config = wigflux::load_config(path);
    if (out_dir != nullptr) config.output_dir = out_dir;
    if (emit_fields >= 0) config.emit_fields = emit_fields != 0;
    const wigflux::FluxReport report = wigflux::run(config);
    if (summary != nullptr && summary_len > 0) {
      const std::string line = "wrote " + config.output_dir.string() + " (" +
                               std::to_string(report.records.size()) + " output times, T=" +
                               wigflux::format_number(report.period) + ")";
      std::snprintf(summary, summary_len, "%s", line.c_str());
    }
  });
}

}  // extern "C"
