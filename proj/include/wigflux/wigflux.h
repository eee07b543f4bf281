/* C interface of the wigflux library. All handles are opaque; every function
 * that can fail returns a wf_status and leaves a message for wf_last_error(). */
#ifndef WIGFLUX_WIGFLUX_H
#define WIGFLUX_WIGFLUX_H

#include <stddef.h>

#if defined(WIGFLUX_BUILDING_LIBRARY)
#define WF_API __attribute__((visibility("default")))
#else
#define WF_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum wf_status {
  WF_OK = 0,
  WF_ERR_CONFIG = 2,
  WF_ERR_NUMERICAL = 3,
  WF_ERR_IO = 4,
  WF_ERR_INTERNAL = 5
} wf_status;

typedef enum wf_state_kind {
  WF_STATE_EIGENSTATE = 0,
  WF_STATE_COHERENT = 1,
  WF_STATE_CAT = 2
} wf_state_kind;

typedef enum wf_quantity {
  WF_SIGMA = 0,
  WF_SVN = 1,
  WF_PURITY = 2,
  WF_RENYI = 3
} wf_quantity;

typedef struct wf_state_spec {
  wf_state_kind kind;
  int n;     /* eigenstate index */
  double x0; /* coherent / cat centre */
  double k0;
} wf_state_spec;

typedef struct wf_loop_values {
  double sigma;
  double svn;
  double purity;
} wf_loop_values;

typedef struct wf_grid wf_grid;
typedef struct wf_potential wf_potential;
typedef struct wf_field wf_field;
typedef struct wf_orbit wf_orbit;

/* Message of the most recent failure on this thread; "" after success. */
WF_API const char* wf_last_error(void);
WF_API const char* wf_version(void);

WF_API wf_status wf_grid_create(double x_max, size_t n_x, double k_max, size_t n_k, wf_grid** out);
WF_API void wf_grid_destroy(wf_grid* grid);

/* kind: "harmonic", "quartic" (x^2/2 + lambda x^4), "pure_quartic" (x^4/4),
 * "double_well" (-x^2/2 + lambda x^4). */
WF_API wf_status wf_potential_create(const char* kind, double lambda, wf_potential** out);
WF_API void wf_potential_destroy(wf_potential* potential);
WF_API wf_status wf_potential_derivative(const wf_potential* potential, double x, int order,
                                         double* out);

/* Wigner field of a state evolved to tau under the potential with split-step
 * substeps no longer than dtau. */
WF_API wf_status wf_field_from_state(const wf_grid* grid, const wf_state_spec* state,
                                     const wf_potential* potential, double tau, double dtau,
                                     wf_field** out);
WF_API void wf_field_destroy(wf_field* field);
WF_API size_t wf_field_size(const wf_field* field);
/* Copies the n_x * n_k values (x-major) into buffer of length len. */
WF_API wf_status wf_field_values(const wf_field* field, double* buffer, size_t len);

WF_API wf_status wf_normalization(const wf_field* field, double* out);
WF_API wf_status wf_purity(const wf_field* field, double* out);
WF_API wf_status wf_von_neumann_entropy(const wf_field* field, double epsilon, double* out);
WF_API wf_status wf_renyi_entropy(const wf_field* field, double beta, double* out);

WF_API wf_status wf_orbit_create(const wf_potential* potential, double x0, double k0, double dtau,
                                 size_t samples, wf_orbit** out);
WF_API void wf_orbit_destroy(wf_orbit* orbit);
WF_API double wf_orbit_period(const wf_orbit* orbit);
WF_API double wf_orbit_energy(const wf_orbit* orbit);
WF_API size_t wf_orbit_sample_count(const wf_orbit* orbit);
/* Copies sample positions; either buffer may be NULL. */
WF_API wf_status wf_orbit_points(const wf_orbit* orbit, double* x, double* k, size_t len);

/* Frozen-W loop fluxes; renyi_out receives one value per beta. */
WF_API wf_status wf_loop_fluxes(const wf_field* field, const wf_orbit* orbit,
                                const wf_potential* potential, int nu_max, double epsilon,
                                const double* betas, size_t n_betas, wf_loop_values* out,
                                double* renyi_out);

/* Finite-difference rate of the quantity enclosed by the orbit at tau. */
WF_API wf_status wf_oracle_flux(const wf_grid* grid, const wf_state_spec* state,
                                const wf_potential* potential, const wf_orbit* orbit,
                                wf_quantity quantity, double beta, double tau, double dtau_fd,
                                double* out);

/* Runs a JSON run file. out_dir overrides the file's output_dir when non-NULL;
 * emit_fields < 0 keeps the file's setting. A one-line summary is written to
 * summary (may be NULL). */
WF_API wf_status wf_run_config_file(const char* path, const char* out_dir, int emit_fields,
                                    char* summary, size_t summary_len);

#ifdef __cplusplus
}
#endif

#endif
