#include "swsyk/swsyk.h"

#include <algorithm>
#include <cstring>
#include <exception>
#include <limits>
#include <new>
#include <string>

#include "swsyk/chebyshev.hpp"
#include "swsyk/config.hpp"
#include "swsyk/couplings.hpp"
#include "swsyk/dyson.hpp"
#include "swsyk/eigensolve.hpp"
#include "swsyk/error.hpp"
#include "swsyk/graph.hpp"
#include "swsyk/hamiltonian.hpp"
#include "swsyk/pipeline.hpp"
#include "swsyk/rng.hpp"
#include "swsyk/spectrum.hpp"
#include "swsyk/stats.hpp"

struct swsyk_graph {
  swsyk::Graph value;
};
struct swsyk_couplings {
  swsyk::CouplingSet value;
};
struct swsyk_hamiltonian {
  swsyk::SparseHamiltonian value;
};
struct swsyk_spectrum {
  swsyk::Spectrum value;
};
struct swsyk_bogoliubov {
  swsyk::BogoliubovFactorization value;
};

namespace {

thread_local std::string g_last_error;

swsyk_status fail(swsyk_status code, const std::string& msg) {
  g_last_error = msg;
  return code;
}

template <class Fn>
swsyk_status guarded(Fn&& fn) {
  try {
    fn();
    return SWSYK_OK;
  } catch (const swsyk::Error& e) {
    return fail(static_cast<swsyk_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(SWSYK_ERR_CAPABILITY, "out of memory");
  } catch (const std::exception& e) {
    return fail(SWSYK_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(SWSYK_ERR_INTERNAL, "unknown error");
  }
}

void require(const void* p, const char* what) {
  if (!p) throw swsyk::ValidationError(std::string(what) + " must not be NULL");
}

void copy_out(const double* src, std::size_t n, double* buffer, std::size_t capacity) {
  require(buffer, "buffer");
  if (capacity < n) throw swsyk::ValidationError("buffer too small: need " + std::to_string(n));
  std::copy(src, src + n, buffer);
}

swsyk::Sector to_sector(swsyk_sector s) {
  if (s == SWSYK_SECTOR_EVEN) return swsyk::Sector::even;
  if (s == SWSYK_SECTOR_ODD) return swsyk::Sector::odd;
  throw swsyk::ValidationError("invalid sector");
}

void check_pair(const swsyk_graph* g, const swsyk_couplings* c) {
  require(g, "graph");
  require(c, "couplings");
  if (c->value.values.size() != g->value.edge_count())
    throw swsyk::ValidationError("coupling count does not match the graph's edge count");
}

void fill(swsyk_rstats* out, const swsyk::RStatistics& st) {
  out->mean_r = st.mean_r;
  out->count = st.count;
  out->zero_spacings = st.zero_spacings;
  out->degenerate_ratios = st.degenerate_ratios;
}

}  // namespace

extern "C" {

const char* swsyk_version(void) { return "1.0.0"; }

const char* swsyk_last_error(void) { return g_last_error.c_str(); }

const char* swsyk_status_string(swsyk_status status) {
  switch (status) {
    case SWSYK_OK: return "ok";
    case SWSYK_ERR_INTERNAL: return "internal error";
    case SWSYK_ERR_VALIDATION: return "validation error";
    case SWSYK_ERR_CAPABILITY: return "capability error";
    case SWSYK_ERR_NONCONVERGENCE: return "non-convergence";
    case SWSYK_ERR_IO: return "i/o error";
  }
  return "unknown status";
}

swsyk_status swsyk_derive_seed(uint64_t base, swsyk_stream stream, uint64_t index, uint64_t* out) {
  return guarded([&] {
    require(out, "out");
    swsyk::StreamTag tag;
    switch (stream) {
      case SWSYK_STREAM_GRAPH: tag = swsyk::StreamTag::graph; break;
      case SWSYK_STREAM_COUPLING: tag = swsyk::StreamTag::coupling; break;
      case SWSYK_STREAM_SOLVER: tag = swsyk::StreamTag::solver; break;
      default: throw swsyk::ValidationError("invalid stream tag");
    }
    *out = swsyk::derive_seed(base, tag, index);
  });
}

// --- graphs -----------------------------------------------------------------

swsyk_status swsyk_graph_generate(uint32_t n, uint32_t k, double p, uint64_t seed, swsyk_graph** out) {
  return guarded([&] {
    require(out, "out");
    *out = new swsyk_graph{swsyk::watts_strogatz({n, k, p, seed})};
  });
}

swsyk_status swsyk_graph_load(const char* path, swsyk_graph** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new swsyk_graph{swsyk::load_graph(path)};
  });
}

swsyk_status swsyk_graph_save(const swsyk_graph* g, const char* path) {
  return guarded([&] {
    require(g, "graph");
    require(path, "path");
    swsyk::save_graph(path, g->value);
  });
}

swsyk_status swsyk_graph_vertex_count(const swsyk_graph* g, uint32_t* out) {
  return guarded([&] {
    require(g, "graph");
    require(out, "out");
    *out = g->value.n_vertices();
  });
}

swsyk_status swsyk_graph_edge_count(const swsyk_graph* g, size_t* out) {
  return guarded([&] {
    require(g, "graph");
    require(out, "out");
    *out = g->value.edge_count();
  });
}

swsyk_status swsyk_graph_edge(const swsyk_graph* g, size_t index, uint32_t* u, uint32_t* v) {
  return guarded([&] {
    require(g, "graph");
    require(u, "u");
    require(v, "v");
    if (index >= g->value.edge_count()) throw swsyk::ValidationError("edge index out of range");
    *u = g->value.edges[index].u;
    *v = g->value.edges[index].v;
  });
}

void swsyk_graph_free(swsyk_graph* g) { delete g; }

// --- couplings --------------------------------------------------------------

swsyk_status swsyk_couplings_sample(const swsyk_graph* g, uint64_t seed, swsyk_couplings** out) {
  return guarded([&] {
    require(g, "graph");
    require(out, "out");
    *out = new swsyk_couplings{swsyk::sample_couplings(g->value, seed)};
  });
}

swsyk_status swsyk_couplings_load(const char* path, swsyk_couplings** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new swsyk_couplings{swsyk::load_couplings(path)};
  });
}

swsyk_status swsyk_couplings_save(const swsyk_couplings* c, const char* path) {
  return guarded([&] {
    require(c, "couplings");
    require(path, "path");
    swsyk::save_couplings(path, c->value);
  });
}

swsyk_status swsyk_couplings_count(const swsyk_couplings* c, size_t* out) {
  return guarded([&] {
    require(c, "couplings");
    require(out, "out");
    *out = c->value.values.size();
  });
}

swsyk_status swsyk_couplings_values(const swsyk_couplings* c, double* buffer, size_t capacity) {
  return guarded([&] {
    require(c, "couplings");
    copy_out(c->value.values.data(), c->value.values.size(), buffer, capacity);
  });
}

swsyk_status swsyk_couplings_sigma(const swsyk_couplings* c, double* out) {
  return guarded([&] {
    require(c, "couplings");
    require(out, "out");
    *out = c->value.sigma;
  });
}

void swsyk_couplings_free(swsyk_couplings* c) { delete c; }

// --- hamiltonian ------------------------------------------------------------

swsyk_status swsyk_hamiltonian_build(const swsyk_graph* g, const swsyk_couplings* c, int impurity,
                                     swsyk_sector sector, unsigned workers, swsyk_hamiltonian** out) {
  return guarded([&] {
    check_pair(g, c);
    require(out, "out");
    swsyk::AssemblyOptions opts;
    opts.workers = std::max(1u, workers);
    *out = new swsyk_hamiltonian{swsyk::assemble_hamiltonian(g->value, c->value, impurity != 0, to_sector(sector), opts)};
  });
}

swsyk_status swsyk_hamiltonian_load(const char* path, swsyk_hamiltonian** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new swsyk_hamiltonian{swsyk::load_hamiltonian(path)};
  });
}

swsyk_status swsyk_hamiltonian_save(const swsyk_hamiltonian* h, const char* path) {
  return guarded([&] {
    require(h, "hamiltonian");
    require(path, "path");
    swsyk::save_hamiltonian(path, h->value);
  });
}

swsyk_status swsyk_hamiltonian_dimension(const swsyk_hamiltonian* h, uint64_t* out) {
  return guarded([&] {
    require(h, "hamiltonian");
    require(out, "out");
    *out = h->value.dimension();
  });
}

swsyk_status swsyk_hamiltonian_nnz(const swsyk_hamiltonian* h, uint64_t* out) {
  return guarded([&] {
    require(h, "hamiltonian");
    require(out, "out");
    *out = h->value.nnz();
  });
}

void swsyk_hamiltonian_free(swsyk_hamiltonian* h) { delete h; }

// --- spectra ----------------------------------------------------------------

void swsyk_filter_options_init(swsyk_filter_options* opts) {
  if (!opts) return;
  const swsyk::FilterConfig d;
  opts->degree = d.polynomial_degree;
  opts->block = d.block_size;
  opts->damping = SWSYK_DAMPING_JACKSON;
  opts->residual_tol = d.residual_tol;
  opts->max_iterations = d.max_iterations;
  opts->window_fraction = swsyk::SpectralWindow{}.center_fraction;
  opts->explicit_window = 0;
  opts->window_lo = 0.0;
  opts->window_hi = 0.0;
}

swsyk_status swsyk_spectrum_dense(const swsyk_hamiltonian* h, size_t residual_samples, swsyk_spectrum** out) {
  return guarded([&] {
    require(h, "hamiltonian");
    require(out, "out");
    swsyk::DenseOptions opts;
    opts.residual_samples = residual_samples;
    *out = new swsyk_spectrum{swsyk::dense_eigh(h->value, opts)};
  });
}

swsyk_status swsyk_spectrum_filter(const swsyk_graph* g, const swsyk_couplings* c, int impurity, swsyk_sector sector,
                                   const swsyk_filter_options* opts, uint64_t seed, swsyk_spectrum** out) {
  return guarded([&] {
    check_pair(g, c);
    require(out, "out");
    swsyk_filter_options o;
    swsyk_filter_options_init(&o);
    if (opts) o = *opts;
    swsyk::FilterConfig cfg;
    cfg.polynomial_degree = o.degree;
    cfg.block_size = o.block;
    switch (o.damping) {
      case SWSYK_DAMPING_NONE: cfg.damping = swsyk::Damping::none; break;
      case SWSYK_DAMPING_JACKSON: cfg.damping = swsyk::Damping::jackson; break;
      case SWSYK_DAMPING_LANCZOS: cfg.damping = swsyk::Damping::lanczos_sigma; break;
      default: throw swsyk::ValidationError("invalid damping");
    }
    cfg.residual_tol = o.residual_tol;
    cfg.max_iterations = o.max_iterations;
    cfg.validate();
    swsyk::SpectralWindow window;
    window.center_fraction = o.window_fraction;
    if (o.explicit_window) window.explicit_bounds = std::make_pair(o.window_lo, o.window_hi);
    const auto op = swsyk::make_operator(g->value, c->value, impurity != 0, to_sector(sector));
    auto s = swsyk::filter_diagonalize(*op, window, cfg, seed);
    if (!s.converged) throw swsyk::ConvergenceError("filter diagonalization did not converge");
    *out = new swsyk_spectrum{std::move(s)};
  });
}

swsyk_status swsyk_spectrum_single_particle(const swsyk_graph* g, const swsyk_couplings* c, swsyk_spectrum** out) {
  return guarded([&] {
    check_pair(g, c);
    require(out, "out");
    swsyk::Spectrum s;
    s.eigenvalues = swsyk::single_particle_spectrum(g->value, c->value);
    s.residuals.assign(s.eigenvalues.size(), std::numeric_limits<double>::quiet_NaN());
    s.metadata = {{"method", "single_particle_dense"},
                  {"n", std::to_string(g->value.n_vertices())},
                  {"graph_seed", std::to_string(g->value.spec.seed)},
                  {"coupling_seed", std::to_string(c->value.seed)}};
    *out = new swsyk_spectrum{std::move(s)};
  });
}

swsyk_status swsyk_spectrum_from_levels(const double* levels, size_t count, swsyk_spectrum** out) {
  return guarded([&] {
    require(out, "out");
    if (count > 0) require(levels, "levels");
    swsyk::Spectrum s;
    s.eigenvalues.assign(levels, levels + count);
    std::sort(s.eigenvalues.begin(), s.eigenvalues.end());
    s.residuals.assign(count, std::numeric_limits<double>::quiet_NaN());
    *out = new swsyk_spectrum{std::move(s)};
  });
}

swsyk_status swsyk_spectrum_load(const char* path, swsyk_spectrum** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new swsyk_spectrum{swsyk::load_spectrum(path)};
  });
}

swsyk_status swsyk_spectrum_save(const swsyk_spectrum* s, const char* path) {
  return guarded([&] {
    require(s, "spectrum");
    require(path, "path");
    swsyk::save_spectrum(path, s->value);
  });
}

swsyk_status swsyk_spectrum_size(const swsyk_spectrum* s, size_t* out) {
  return guarded([&] {
    require(s, "spectrum");
    require(out, "out");
    *out = s->value.size();
  });
}

swsyk_status swsyk_spectrum_values(const swsyk_spectrum* s, double* buffer, size_t capacity) {
  return guarded([&] {
    require(s, "spectrum");
    copy_out(s->value.eigenvalues.data(), s->value.size(), buffer, capacity);
  });
}

swsyk_status swsyk_spectrum_is_windowed(const swsyk_spectrum* s, int* out) {
  return guarded([&] {
    require(s, "spectrum");
    require(out, "out");
    *out = s->value.window.has_value() ? 1 : 0;
  });
}

void swsyk_spectrum_free(swsyk_spectrum* s) { delete s; }

swsyk_status swsyk_r_stats(const swsyk_spectrum* s, double fraction, swsyk_rstats* out) {
  return guarded([&] {
    require(s, "spectrum");
    require(out, "out");
    fill(out, swsyk::mean_r_central(s->value, fraction));
  });
}

swsyk_status swsyk_single_particle_r_stats(const swsyk_spectrum* s, double fraction, double exclude_fraction,
                                           swsyk_rstats* out) {
  return guarded([&] {
    require(s, "spectrum");
    require(out, "out");
    fill(out, swsyk::single_particle_r(s->value.eigenvalues, fraction, exclude_fraction));
  });
}

swsyk_status swsyk_single_particle_mean_ipr(const swsyk_graph* g, const swsyk_couplings* c, double fraction,
                                            double exclude_fraction, double* out) {
  return guarded([&] {
    check_pair(g, c);
    require(out, "out");
    *out = swsyk::single_particle_mean_ipr(g->value, c->value, {fraction, exclude_fraction});
  });
}

// --- bogoliubov -------------------------------------------------------------

swsyk_status swsyk_bogoliubov_compute(const swsyk_graph* g, const swsyk_couplings* c, swsyk_bogoliubov** out) {
  return guarded([&] {
    check_pair(g, c);
    require(out, "out");
    *out = new swsyk_bogoliubov{swsyk::bogoliubov(swsyk::coupling_matrix(g->value, c->value))};
  });
}

swsyk_status swsyk_bogoliubov_mode_count(const swsyk_bogoliubov* b, size_t* out) {
  return guarded([&] {
    require(b, "bogoliubov");
    require(out, "out");
    *out = static_cast<size_t>(b->value.rotation.rows());
  });
}

swsyk_status swsyk_bogoliubov_energies(const swsyk_bogoliubov* b, double* buffer, size_t capacity) {
  return guarded([&] {
    require(b, "bogoliubov");
    copy_out(b->value.eps.data(), b->value.eps.size(), buffer, capacity);
  });
}

swsyk_status swsyk_bogoliubov_rotation(const swsyk_bogoliubov* b, double* buffer, size_t capacity) {
  return guarded([&] {
    require(b, "bogoliubov");
    const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm = b->value.rotation;
    copy_out(rm.data(), static_cast<std::size_t>(rm.size()), buffer, capacity);
  });
}

void swsyk_bogoliubov_free(swsyk_bogoliubov* b) { delete b; }

swsyk_status swsyk_quartic_extensivity(const swsyk_bogoliubov* b, const int sites[4], double tau, unsigned workers,
                                       swsyk_extensivity* out) {
  return guarded([&] {
    require(b, "bogoliubov");
    require(sites, "sites");
    require(out, "out");
    swsyk::QuarticOptions opts;
    opts.workers = std::max(1u, workers);
    const auto t = swsyk::rotate_quartic(b->value.rotation, {sites[0], sites[1], sites[2], sites[3]}, opts);
    const auto m = swsyk::extensivity_measures(t, tau);
    out->support_count = m.support_count;
    out->participation_ratio = m.participation_ratio;
    out->sum_sq = t.sum_sq;
    out->max_abs = t.max_abs;
    out->quadruples = t.quadruples;
  });
}

// --- experiments ------------------------------------------------------------

swsyk_status swsyk_experiment_run(const char* config_path, const char* experiment, unsigned jobs, const char* out_dir,
                                  swsyk_experiment_summary* out) {
  return guarded([&] {
    require(config_path, "config_path");
    require(out_dir, "out_dir");
    auto cfg = swsyk::load_config(config_path);
    if (experiment && *experiment) {
      const auto kind = swsyk::parse_experiment_kind(experiment);
      if (kind != cfg.kind)
        throw swsyk::ValidationError("config declares experiment '" + swsyk::to_string(cfg.kind) + "', not '" +
                                     experiment + "'");
    }
    swsyk::RunOptions opts;
    opts.jobs = std::max(1u, jobs);
    opts.out_dir = out_dir;
    const auto result = swsyk::run_experiment(cfg, opts);
    if (out) {
      out->tasks = result.records.size();
      out->computed = result.computed;
      out->reused = result.reused;
      std::memset(out->config_hash, 0, sizeof out->config_hash);
      std::memcpy(out->config_hash, result.config_hash.c_str(),
                  std::min(result.config_hash.size(), sizeof out->config_hash - 1));
    }
  });
}

}  // extern "C"
