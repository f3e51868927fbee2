/* C interface to the swsyk library. All functions return a swsyk_status;
 * on failure swsyk_last_error() describes the problem (thread-local, valid
 * until the next failing call on the same thread). Handles are opaque and
 * released with their matching *_free function (NULL is accepted). */
#ifndef SWSYK_SWSYK_H
#define SWSYK_SWSYK_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(SWSYK_BUILDING_LIBRARY)
#define SWSYK_API __declspec(dllexport)
#else
#define SWSYK_API __declspec(dllimport)
#endif
#else
#define SWSYK_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum swsyk_status {
  SWSYK_OK = 0,
  SWSYK_ERR_INTERNAL = 1,
  SWSYK_ERR_VALIDATION = 2,
  SWSYK_ERR_CAPABILITY = 3,
  SWSYK_ERR_NONCONVERGENCE = 4,
  SWSYK_ERR_IO = 5
} swsyk_status;

typedef enum swsyk_sector { SWSYK_SECTOR_EVEN = 0, SWSYK_SECTOR_ODD = 1 } swsyk_sector;
typedef enum swsyk_damping { SWSYK_DAMPING_NONE = 0, SWSYK_DAMPING_JACKSON = 1, SWSYK_DAMPING_LANCZOS = 2 } swsyk_damping;
typedef enum swsyk_stream { SWSYK_STREAM_GRAPH = 0, SWSYK_STREAM_COUPLING = 1, SWSYK_STREAM_SOLVER = 2 } swsyk_stream;

typedef struct swsyk_graph swsyk_graph;
typedef struct swsyk_couplings swsyk_couplings;
typedef struct swsyk_hamiltonian swsyk_hamiltonian;
typedef struct swsyk_spectrum swsyk_spectrum;
typedef struct swsyk_bogoliubov swsyk_bogoliubov;

SWSYK_API const char* swsyk_version(void);
SWSYK_API const char* swsyk_last_error(void);
SWSYK_API const char* swsyk_status_string(swsyk_status status);

SWSYK_API swsyk_status swsyk_derive_seed(uint64_t base, swsyk_stream stream, uint64_t index, uint64_t* out);

/* Graphs: vertex v hosts Majorana v+1. */
SWSYK_API swsyk_status swsyk_graph_generate(uint32_t n, uint32_t k, double p, uint64_t seed, swsyk_graph** out);
SWSYK_API swsyk_status swsyk_graph_load(const char* path, swsyk_graph** out);
SWSYK_API swsyk_status swsyk_graph_save(const swsyk_graph* g, const char* path);
SWSYK_API swsyk_status swsyk_graph_vertex_count(const swsyk_graph* g, uint32_t* out);
SWSYK_API swsyk_status swsyk_graph_edge_count(const swsyk_graph* g, size_t* out);
SWSYK_API swsyk_status swsyk_graph_edge(const swsyk_graph* g, size_t index, uint32_t* u, uint32_t* v);
SWSYK_API void swsyk_graph_free(swsyk_graph* g);

/* Couplings: one Gaussian value per edge, in edge-index order. */
SWSYK_API swsyk_status swsyk_couplings_sample(const swsyk_graph* g, uint64_t seed, swsyk_couplings** out);
SWSYK_API swsyk_status swsyk_couplings_load(const char* path, swsyk_couplings** out);
SWSYK_API swsyk_status swsyk_couplings_save(const swsyk_couplings* c, const char* path);
SWSYK_API swsyk_status swsyk_couplings_count(const swsyk_couplings* c, size_t* out);
SWSYK_API swsyk_status swsyk_couplings_values(const swsyk_couplings* c, double* buffer, size_t capacity);
SWSYK_API swsyk_status swsyk_couplings_sigma(const swsyk_couplings* c, double* out);
SWSYK_API void swsyk_couplings_free(swsyk_couplings* c);

/* Many-body Hamiltonian restricted to a parity sector (explicit CSR). */
SWSYK_API swsyk_status swsyk_hamiltonian_build(const swsyk_graph* g, const swsyk_couplings* c, int impurity,
                                               swsyk_sector sector, unsigned workers, swsyk_hamiltonian** out);
SWSYK_API swsyk_status swsyk_hamiltonian_load(const char* path, swsyk_hamiltonian** out);
SWSYK_API swsyk_status swsyk_hamiltonian_save(const swsyk_hamiltonian* h, const char* path);
SWSYK_API swsyk_status swsyk_hamiltonian_dimension(const swsyk_hamiltonian* h, uint64_t* out);
SWSYK_API swsyk_status swsyk_hamiltonian_nnz(const swsyk_hamiltonian* h, uint64_t* out);
SWSYK_API void swsyk_hamiltonian_free(swsyk_hamiltonian* h);

typedef struct swsyk_filter_options {
  size_t degree;
  size_t block;
  swsyk_damping damping;
  double residual_tol; /* relative to the spectral bounds */
  size_t max_iterations;
  double window_fraction; /* centred fraction of the span, used unless explicit_window */
  int explicit_window;
  double window_lo;
  double window_hi;
} swsyk_filter_options;

SWSYK_API void swsyk_filter_options_init(swsyk_filter_options* opts);

/* Spectra. */
SWSYK_API swsyk_status swsyk_spectrum_dense(const swsyk_hamiltonian* h, size_t residual_samples, swsyk_spectrum** out);
SWSYK_API swsyk_status swsyk_spectrum_filter(const swsyk_graph* g, const swsyk_couplings* c, int impurity,
                                             swsyk_sector sector, const swsyk_filter_options* opts, uint64_t seed,
                                             swsyk_spectrum** out);
SWSYK_API swsyk_status swsyk_spectrum_single_particle(const swsyk_graph* g, const swsyk_couplings* c,
                                                      swsyk_spectrum** out);
SWSYK_API swsyk_status swsyk_spectrum_from_levels(const double* levels, size_t count, swsyk_spectrum** out);
SWSYK_API swsyk_status swsyk_spectrum_load(const char* path, swsyk_spectrum** out);
SWSYK_API swsyk_status swsyk_spectrum_save(const swsyk_spectrum* s, const char* path);
SWSYK_API swsyk_status swsyk_spectrum_size(const swsyk_spectrum* s, size_t* out);
SWSYK_API swsyk_status swsyk_spectrum_values(const swsyk_spectrum* s, double* buffer, size_t capacity);
SWSYK_API swsyk_status swsyk_spectrum_is_windowed(const swsyk_spectrum* s, int* out);
SWSYK_API void swsyk_spectrum_free(swsyk_spectrum* s);

typedef struct swsyk_rstats {
  double mean_r;
  size_t count;
  size_t zero_spacings;
  size_t degenerate_ratios;
} swsyk_rstats;

SWSYK_API swsyk_status swsyk_r_stats(const swsyk_spectrum* s, double fraction, swsyk_rstats* out);
SWSYK_API swsyk_status swsyk_single_particle_r_stats(const swsyk_spectrum* s, double fraction,
                                                     double exclude_fraction, swsyk_rstats* out);
SWSYK_API swsyk_status swsyk_single_particle_mean_ipr(const swsyk_graph* g, const swsyk_couplings* c,
                                                      double fraction, double exclude_fraction, double* out);

/* Free-fermion canonical form of the quadratic part. */
SWSYK_API swsyk_status swsyk_bogoliubov_compute(const swsyk_graph* g, const swsyk_couplings* c, swsyk_bogoliubov** out);
SWSYK_API swsyk_status swsyk_bogoliubov_mode_count(const swsyk_bogoliubov* b, size_t* out);
SWSYK_API swsyk_status swsyk_bogoliubov_energies(const swsyk_bogoliubov* b, double* buffer, size_t capacity);
/* Row-major N x N rotation, rows are the new modes. */
SWSYK_API swsyk_status swsyk_bogoliubov_rotation(const swsyk_bogoliubov* b, double* buffer, size_t capacity);
SWSYK_API void swsyk_bogoliubov_free(swsyk_bogoliubov* b);

typedef struct swsyk_extensivity {
  size_t support_count;
  double participation_ratio;
  double sum_sq;
  double max_abs;
  uint64_t quadruples;
} swsyk_extensivity;

/* sites: four distinct 1-based Majorana indices. */
SWSYK_API swsyk_status swsyk_quartic_extensivity(const swsyk_bogoliubov* b, const int sites[4], double tau,
                                                 unsigned workers, swsyk_extensivity* out);

typedef struct swsyk_experiment_summary {
  size_t tasks;
  size_t computed;
  size_t reused;
  char config_hash[17];
} swsyk_experiment_summary;

/* Runs the experiment in config_path. experiment may be NULL (use the
 * config's kind) or override it; out_dir receives CSVs and records.jsonl. */
SWSYK_API swsyk_status swsyk_experiment_run(const char* config_path, const char* experiment, unsigned jobs,
                                            const char* out_dir, swsyk_experiment_summary* out);

#ifdef __cplusplus
}
#endif

#endif
