/* C interface to the ctqw spatial-search engine.
 *
 * Objects are opaque handles owned by the caller and released with the
 * matching *_free function. Every fallible call returns a ctqw_status; on
 * failure ctqw_last_error() describes the problem for the calling thread.
 */
#ifndef CTQW_CTQW_H
#define CTQW_CTQW_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define CTQW_API __declspec(dllexport)
#else
#define CTQW_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ctqw_status {
  CTQW_OK = 0,
  CTQW_ERR_INVALID_ARGUMENT = 1,
  CTQW_ERR_DUPLICATE_COORDINATE = 2,
  CTQW_ERR_TARGET_NOT_IN_GRAPH = 3,
  CTQW_ERR_TARGET_OUT_OF_RANGE = 4,
  CTQW_ERR_NOT_SYMMETRIC = 5,
  CTQW_ERR_CONVERGENCE = 6,
  CTQW_ERR_NON_FINITE = 7,
  CTQW_ERR_STEP_COUNT = 8,
  CTQW_ERR_DIVISION_DOMAIN = 9,
  CTQW_ERR_DEGENERATE_POINTS = 10,
  CTQW_ERR_ZERO_STATE = 11,
  CTQW_ERR_EMPTY_GRAPH = 12,
  CTQW_ERR_NEGATIVE_PROBABILITY = 13,
  CTQW_ERR_IO = 14,
  CTQW_ERR_INTERNAL = 99
} ctqw_status;

typedef enum ctqw_target_kind {
  CTQW_TARGET_NONE = 0,
  CTQW_TARGET_C = 1,
  CTQW_TARGET_S = 2,
  CTQW_TARGET_1N = 3,
  CTQW_TARGET_2N = 4,
  CTQW_TARGET_EXPLICIT = 5
} ctqw_target_kind;

typedef struct ctqw_target {
  ctqw_target_kind kind;
  size_t index; /* CTQW_TARGET_EXPLICIT only */
} ctqw_target;

typedef struct ctqw_graph ctqw_graph;
typedef struct ctqw_series ctqw_series;
typedef struct ctqw_scaling_table ctqw_scaling_table;
typedef struct ctqw_image ctqw_image;

CTQW_API const char* ctqw_version(void);
CTQW_API const char* ctqw_status_name(ctqw_status status);
/* Message of the last failure on this thread; empty when none. */
CTQW_API const char* ctqw_last_error(void);

CTQW_API ctqw_status ctqw_parse_target(const char* token, ctqw_target* out);
/* Writes a NUL-terminated label ("C", "1N", "7", ...) into buf. */
CTQW_API ctqw_status ctqw_target_label(ctqw_target target, char* buf, size_t buf_size);

/* ---- lattice ---- */
CTQW_API ctqw_status ctqw_graph_hex(int layers, ctqw_graph** out);
CTQW_API ctqw_status ctqw_graph_paper31(ctqw_graph** out);
/* ij holds n (i, j) pairs; spacing_um <= 0 means unset. */
CTQW_API ctqw_status ctqw_graph_from_coords(const int* ij, size_t n, double spacing_um,
                                            ctqw_graph** out);
CTQW_API ctqw_status ctqw_graph_from_json(const char* json, const char* id, ctqw_graph** out);
CTQW_API ctqw_status ctqw_graph_load(const char* path, ctqw_graph** out);
/* Returns a new handle with the given waveguide spacing. */
CTQW_API ctqw_status ctqw_graph_with_spacing(const ctqw_graph* g, double spacing_um,
                                             ctqw_graph** out);
CTQW_API void ctqw_graph_free(ctqw_graph* g);
CTQW_API size_t ctqw_graph_size(const ctqw_graph* g);
CTQW_API size_t ctqw_graph_edge_count(const ctqw_graph* g);
/* 0 when unset. */
CTQW_API double ctqw_graph_spacing(const ctqw_graph* g);
CTQW_API const char* ctqw_graph_id(const ctqw_graph* g);
/* Caller frees the returned string with ctqw_string_free. */
CTQW_API ctqw_status ctqw_graph_to_json(const ctqw_graph* g, char** out);
CTQW_API void ctqw_string_free(char* s);
/* *found is 0 for CTQW_TARGET_NONE, else 1 with *index set. */
CTQW_API ctqw_status ctqw_resolve_target(const ctqw_graph* g, ctqw_target target, int* found,
                                         size_t* index);
/* Number of rotation symmetries; perms (may be NULL) receives count*n entries. */
CTQW_API ctqw_status ctqw_graph_rotations(const ctqw_graph* g, size_t* count, size_t* perms,
                                          size_t perms_capacity);

/* ---- search ---- */
CTQW_API ctqw_status ctqw_run_search(const ctqw_graph* g, ctqw_target target,
                                     double beta_over_gamma, const double* gamma_t_grid,
                                     size_t grid_len, ctqw_series** out);
CTQW_API void ctqw_series_free(ctqw_series* s);
CTQW_API size_t ctqw_series_length(const ctqw_series* s);
CTQW_API size_t ctqw_series_target(const ctqw_series* s);
/* Each non-NULL output array receives ctqw_series_length entries. */
CTQW_API ctqw_status ctqw_series_target_curves(const ctqw_series* s, double* p_quantum,
                                               double* p_classical, double* ratio);
/* Full quantum distribution at grid index k; out receives graph size entries. */
CTQW_API ctqw_status ctqw_series_site_probs(const ctqw_series* s, size_t k, double* out);
CTQW_API ctqw_status ctqw_series_optimal_time(const ctqw_series* s, int refine, double* t_opt,
                                              double* r_opt);
CTQW_API ctqw_status ctqw_series_write_csv(const ctqw_series* s, const char* path);

/* out is row-major beta_len x grid_len. */
CTQW_API ctqw_status ctqw_beta_time_heatmap(const ctqw_graph* g, ctqw_target target,
                                            const double* beta_grid, size_t beta_len,
                                            const double* gamma_t_grid, size_t grid_len,
                                            unsigned threads, double* out);
CTQW_API ctqw_status ctqw_write_heatmap_csv(const double* beta_grid, size_t beta_len,
                                            const double* gamma_t_grid, size_t grid_len,
                                            const double* probs, const char* path);

typedef struct ctqw_scaling_options {
  double window_factor; /* gamma*t window is [0, window_factor * n / 6] */
  double step;
  int refine;
  unsigned threads;
} ctqw_scaling_options;

typedef struct ctqw_scaling_record {
  size_t n;
  int layers;
  ctqw_target target;
  double beta_over_gamma;
  double t_opt;
  double r_opt;
  double pq_opt;
  double pc_opt;
} ctqw_scaling_record;

CTQW_API ctqw_scaling_options ctqw_scaling_defaults(void);
/* Records ordered by beta, then layers, then target; pairs whose target does
 * not exist in the patch are skipped. */
CTQW_API ctqw_status ctqw_scaling_run(const int* layers, size_t layers_len,
                                      const ctqw_target* targets, size_t targets_len,
                                      const double* betas, size_t betas_len,
                                      const ctqw_scaling_options* options,
                                      ctqw_scaling_table** out);
CTQW_API void ctqw_scaling_free(ctqw_scaling_table* t);
CTQW_API size_t ctqw_scaling_size(const ctqw_scaling_table* t);
CTQW_API ctqw_status ctqw_scaling_get(const ctqw_scaling_table* t, size_t k,
                                      ctqw_scaling_record* out);
CTQW_API ctqw_status ctqw_scaling_write_csv(const ctqw_scaling_table* t, const char* path);

/* ---- photonics ---- */
typedef struct ctqw_preset {
  char name[4];
  double spacing_um;
  double v_mm_s;
  double v0_mm_s;
  double gamma_per_mm;
  double beta_per_mm;
  double lengths_mm[2];
  double tabulated_gamma_t[2];
} ctqw_preset;

CTQW_API size_t ctqw_preset_count(void);
CTQW_API ctqw_status ctqw_preset_at(size_t k, ctqw_preset* out);
CTQW_API ctqw_status ctqw_preset_find(const char* name, ctqw_preset* out);
CTQW_API ctqw_status ctqw_presets_write_json(const char* path);

CTQW_API ctqw_status ctqw_fit_coupling_law(const double* spacing_um, const double* gamma_per_mm,
                                           size_t n, double* gamma0, double* decay_length_um);

typedef struct ctqw_array_params {
  double gamma_per_mm;
  double beta_per_mm;
  ctqw_target target;
  double length_mm;
  double wavelength_nm;
} ctqw_array_params;

typedef struct ctqw_beam_params {
  double waist_diameter_um; /* <= 0 or inf: uniform illumination */
  double tilt_x_mrad;
  double tilt_y_mrad;
  double offset_x_um;
  double offset_y_um;
} ctqw_beam_params;

/* Output intensity per waveguide (sums to one); graph needs spacing. */
CTQW_API ctqw_status ctqw_photonics_propagate(const ctqw_graph* g, const ctqw_array_params* array,
                                              const ctqw_beam_params* beam, double* intensities);
CTQW_API ctqw_status ctqw_rotation_asymmetry(const ctqw_graph* g, const double* probs,
                                             double* out);
CTQW_API ctqw_status ctqw_classical_distribution(const ctqw_graph* g, ctqw_target target,
                                                 double gamma_t, double* out);
CTQW_API ctqw_status ctqw_write_distribution_csv(const ctqw_graph* g, const double* probs,
                                                 const char* path);

CTQW_API ctqw_status ctqw_render_facet(const ctqw_graph* g, const double* intensities,
                                       double mode_diameter_um, double scale_um_per_px,
                                       ctqw_image** out);
CTQW_API void ctqw_image_free(ctqw_image* img);
CTQW_API int ctqw_image_width(const ctqw_image* img);
CTQW_API int ctqw_image_height(const ctqw_image* img);
CTQW_API const uint16_t* ctqw_image_pixels(const ctqw_image* img);
CTQW_API ctqw_status ctqw_image_write_pgm(const ctqw_image* img, const char* comment,
                                          const char* path);

#ifdef __cplusplus
}
#endif

#endif /* CTQW_CTQW_H */
