// Command-line front end; talks to the library only through swsyk.h.
#include <cinttypes>
#include <cstdio>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "swsyk/swsyk.h"

namespace {

struct Failure {
  swsyk_status status;
};

void check(swsyk_status s) {
  if (s != SWSYK_OK) throw Failure{s};
}

template <class T, void (*Free)(T*)>
struct Handle {
  T* ptr = nullptr;
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() { Free(ptr); }
  T** out() { return &ptr; }
  T* get() const { return ptr; }
};

using GraphHandle = Handle<swsyk_graph, swsyk_graph_free>;
using CouplingHandle = Handle<swsyk_couplings, swsyk_couplings_free>;
using HamiltonianHandle = Handle<swsyk_hamiltonian, swsyk_hamiltonian_free>;
using SpectrumHandle = Handle<swsyk_spectrum, swsyk_spectrum_free>;
using BogoliubovHandle = Handle<swsyk_bogoliubov, swsyk_bogoliubov_free>;

void print_value(const char* key, double v) { std::printf("%s: %.17g\n", key, v); }
void print_value(const char* key, std::size_t v) { std::printf("%s: %zu\n", key, v); }

// Graph/coupling source shared by the physics subcommands: files, or
// generated from (n, k, p, seed, coupling-seed).
struct SystemArgs {
  std::string graph_path;
  std::string couplings_path;
  std::uint32_t n = 0;
  std::uint32_t k = 2;
  double p = 0.0;
  std::uint64_t seed = 1;
  std::uint64_t coupling_seed = 1;

  void attach(CLI::App* app) {
    app->add_option("--graph", graph_path, "Graph file (instead of --n/--k/--p/--seed)");
    app->add_option("--couplings", couplings_path, "Coupling file (instead of --coupling-seed)");
    app->add_option("--n", n, "Number of vertices (Majoranas)");
    app->add_option("--k", k, "Circulant half-degree")->capture_default_str();
    app->add_option("--p", p, "Rewiring probability")->capture_default_str();
    app->add_option("--seed", seed, "Graph seed")->capture_default_str();
    app->add_option("--coupling-seed", coupling_seed, "Coupling seed")->capture_default_str();
  }

  void load(GraphHandle& g, CouplingHandle& c) const {
    if (!graph_path.empty()) {
      check(swsyk_graph_load(graph_path.c_str(), g.out()));
    } else {
      if (n == 0) throw CLI::ValidationError("--n", "either --graph or --n is required");
      check(swsyk_graph_generate(n, k, p, seed, g.out()));
    }
    if (!couplings_path.empty())
      check(swsyk_couplings_load(couplings_path.c_str(), c.out()));
    else
      check(swsyk_couplings_sample(g.get(), coupling_seed, c.out()));
  }
};

std::vector<double> spectrum_values(const SpectrumHandle& s) {
  std::size_t n = 0;
  check(swsyk_spectrum_size(s.get(), &n));
  std::vector<double> v(n);
  if (n) check(swsyk_spectrum_values(s.get(), v.data(), v.size()));
  return v;
}

swsyk_sector sector_from(const std::string& name) { return name == "odd" ? SWSYK_SECTOR_ODD : SWSYK_SECTOR_EVEN; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse SYK toolkit: graphs, spectra and level statistics"};
  app.require_subcommand(1);
  app.set_version_flag("--version", swsyk_version());

  // generate-graph
  auto* gen = app.add_subcommand("generate-graph", "Watts-Strogatz rewiring of a circulant graph");
  std::uint32_t gen_n = 0, gen_k = 2;
  double gen_p = 0.0;
  std::uint64_t gen_seed = 1;
  std::string gen_out;
  gen->add_option("--n", gen_n, "Number of vertices")->required();
  gen->add_option("--k", gen_k, "Circulant half-degree")->capture_default_str();
  gen->add_option("--p", gen_p, "Rewiring probability")->capture_default_str();
  gen->add_option("--seed", gen_seed, "Graph seed")->capture_default_str();
  gen->add_option("--out", gen_out, "Output graph file")->required();
  std::string gen_couplings_out;
  std::uint64_t gen_coupling_seed = 1;
  gen->add_option("--couplings-out", gen_couplings_out, "Also sample couplings into this file");
  gen->add_option("--coupling-seed", gen_coupling_seed, "Seed for --couplings-out")->capture_default_str();

  // single-particle
  auto* sp = app.add_subcommand("single-particle", "Dense spectrum of the quadratic model iJ");
  SystemArgs sp_sys;
  sp_sys.attach(sp);
  double sp_fraction = 0.2, sp_exclude = 0.01;
  std::string sp_out;
  bool sp_ipr = false;
  sp->add_option("--fraction", sp_fraction, "Central fraction for <r>")->capture_default_str();
  sp->add_option("--exclude", sp_exclude, "Fraction of smallest |E| dropped")->capture_default_str();
  sp->add_option("--out", sp_out, "Write the spectrum CSV here");
  sp->add_flag("--ipr", sp_ipr, "Also report the mean IPR of the selected states");

  // many-body
  auto* mb = app.add_subcommand("many-body", "Many-body spectrum in one parity sector");
  SystemArgs mb_sys;
  mb_sys.attach(mb);
  std::string mb_method = "dense", mb_sector = "even", mb_out, mb_dump, mb_damping = "jackson";
  bool mb_no_impurity = false;
  std::size_t mb_verify = 10;
  std::uint64_t mb_solver_seed = 1;
  unsigned mb_workers = 1;
  swsyk_filter_options fopts;
  swsyk_filter_options_init(&fopts);
  std::vector<double> mb_window;
  mb->add_option("--method", mb_method, "dense or filter")->check(CLI::IsMember({"dense", "filter"}))->capture_default_str();
  mb->add_option("--sector", mb_sector, "Parity sector")->check(CLI::IsMember({"even", "odd"}))->capture_default_str();
  mb->add_flag("--no-impurity", mb_no_impurity, "Drop the quartic impurity term");
  mb->add_option("--out", mb_out, "Write the spectrum CSV here");
  mb->add_option("--dump-hamiltonian", mb_dump, "Write the sector matrix as a binary CSR dump");
  mb->add_option("--verify", mb_verify, "Dense: residual spot checks")->capture_default_str();
  mb->add_option("--workers", mb_workers, "Assembly threads")->capture_default_str();
  mb->add_option("--solver-seed", mb_solver_seed, "Filter: random block seed")->capture_default_str();
  mb->add_option("--degree", fopts.degree, "Filter: polynomial degree")->capture_default_str();
  mb->add_option("--block", fopts.block, "Filter: block size")->capture_default_str();
  mb->add_option("--damping", mb_damping, "Filter: none, jackson or lanczos")
      ->check(CLI::IsMember({"none", "jackson", "lanczos"}))
      ->capture_default_str();
  mb->add_option("--tol", fopts.residual_tol, "Filter: relative residual tolerance")->capture_default_str();
  mb->add_option("--max-iterations", fopts.max_iterations, "Filter: iteration cap")->capture_default_str();
  mb->add_option("--window-fraction", fopts.window_fraction, "Filter: centred window fraction")->capture_default_str();
  mb->add_option("--window", mb_window, "Filter: explicit window LO HI")->expected(2);
  double mb_fraction = 0.2;
  mb->add_option("--fraction", mb_fraction, "Central fraction for <r>")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));

  // r-stats
  auto* rs = app.add_subcommand("r-stats", "Mean level-spacing ratio of a spectrum file");
  std::string rs_in;
  double rs_fraction = 0.2, rs_exclude = 0.01;
  bool rs_single = false;
  rs->add_option("--spectrum", rs_in, "Spectrum CSV")->required();
  rs->add_option("--fraction", rs_fraction, "Central fraction")->capture_default_str();
  rs->add_flag("--single-particle", rs_single, "Apply the single-particle selection rule");
  rs->add_option("--exclude", rs_exclude, "Single-particle exclusion fraction")->capture_default_str();

  // bogoliubov
  auto* bg = app.add_subcommand("bogoliubov", "Canonical modes of iJ and the rotated impurity");
  SystemArgs bg_sys;
  bg_sys.attach(bg);
  std::vector<int> bg_sites{1, 2, 3, 4};
  double bg_tau = 1e-3;
  unsigned bg_workers = 1;
  std::string bg_out;
  bg->add_option("--sites", bg_sites, "Four 1-based impurity sites")->expected(4)->delimiter(',');
  bg->add_option("--tau", bg_tau, "Support threshold relative to max|T|")->capture_default_str();
  bg->add_option("--workers", bg_workers, "Threads for the tensor")->capture_default_str();
  bg->add_option("--out", bg_out, "Write mode energies as CSV");

  // experiment
  auto* ex = app.add_subcommand("experiment", "Run a configured sweep");
  std::string ex_kind, ex_config, ex_out;
  unsigned ex_jobs = 1;
  ex->add_option("kind", ex_kind, "fig2, fig3, fig4, histogram or custom")
      ->required()
      ->check(CLI::IsMember({"fig2", "fig3", "fig4", "histogram", "custom"}));
  ex->add_option("--config", ex_config, "Config file")->required();
  ex->add_option("--jobs", ex_jobs, "Parallel tasks")->capture_default_str();
  ex->add_option("--out", ex_out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(SWSYK_ERR_VALIDATION);
  }

  try {
    if (*gen) {
      GraphHandle g;
      check(swsyk_graph_generate(gen_n, gen_k, gen_p, gen_seed, g.out()));
      check(swsyk_graph_save(g.get(), gen_out.c_str()));
      std::size_t edges = 0;
      check(swsyk_graph_edge_count(g.get(), &edges));
      print_value("edges", edges);
      if (!gen_couplings_out.empty()) {
        CouplingHandle c;
        check(swsyk_couplings_sample(g.get(), gen_coupling_seed, c.out()));
        check(swsyk_couplings_save(c.get(), gen_couplings_out.c_str()));
      }
    } else if (*sp) {
      GraphHandle g;
      CouplingHandle c;
      sp_sys.load(g, c);
      SpectrumHandle s;
      check(swsyk_spectrum_single_particle(g.get(), c.get(), s.out()));
      if (!sp_out.empty()) check(swsyk_spectrum_save(s.get(), sp_out.c_str()));
      swsyk_rstats st;
      check(swsyk_single_particle_r_stats(s.get(), sp_fraction, sp_exclude, &st));
      print_value("mean_r", st.mean_r);
      print_value("ratios", st.count);
      if (sp_ipr) {
        double v = 0.0;
        check(swsyk_single_particle_mean_ipr(g.get(), c.get(), sp_fraction, sp_exclude, &v));
        print_value("mean_ipr", v);
      }
    } else if (*mb) {
      GraphHandle g;
      CouplingHandle c;
      mb_sys.load(g, c);
      const int impurity = mb_no_impurity ? 0 : 1;
      const swsyk_sector sector = sector_from(mb_sector);
      SpectrumHandle s;
      if (mb_method == "dense" || !mb_dump.empty()) {
        HamiltonianHandle h;
        check(swsyk_hamiltonian_build(g.get(), c.get(), impurity, sector, mb_workers, h.out()));
        if (!mb_dump.empty()) check(swsyk_hamiltonian_save(h.get(), mb_dump.c_str()));
        if (mb_method == "dense") check(swsyk_spectrum_dense(h.get(), mb_verify, s.out()));
      }
      if (mb_method == "filter") {
        fopts.damping = mb_damping == "none" ? SWSYK_DAMPING_NONE
                        : mb_damping == "lanczos" ? SWSYK_DAMPING_LANCZOS
                                                  : SWSYK_DAMPING_JACKSON;
        if (mb_window.size() == 2) {
          fopts.explicit_window = 1;
          fopts.window_lo = mb_window[0];
          fopts.window_hi = mb_window[1];
        }
        check(swsyk_spectrum_filter(g.get(), c.get(), impurity, sector, &fopts, mb_solver_seed, s.out()));
      }
      if (!mb_out.empty()) check(swsyk_spectrum_save(s.get(), mb_out.c_str()));
      print_value("levels", spectrum_values(s).size());
      swsyk_rstats st;
      if (swsyk_r_stats(s.get(), mb_fraction, &st) != SWSYK_OK) {
        // too few levels in the central window; the spectrum itself is fine
        std::fprintf(stderr, "note: %s\n", swsyk_last_error());
        print_value("mean_r", std::numeric_limits<double>::quiet_NaN());
        print_value("ratios", std::size_t{0});
      } else {
        print_value("mean_r", st.mean_r);
        print_value("ratios", st.count);
        print_value("zero_spacings", st.zero_spacings);
      }
    } else if (*rs) {
      SpectrumHandle s;
      check(swsyk_spectrum_load(rs_in.c_str(), s.out()));
      swsyk_rstats st;
      if (rs_single)
        check(swsyk_single_particle_r_stats(s.get(), rs_fraction, rs_exclude, &st));
      else
        check(swsyk_r_stats(s.get(), rs_fraction, &st));
      print_value("mean_r", st.mean_r);
      print_value("ratios", st.count);
      print_value("zero_spacings", st.zero_spacings);
      print_value("degenerate_ratios", st.degenerate_ratios);
    } else if (*bg) {
      GraphHandle g;
      CouplingHandle c;
      bg_sys.load(g, c);
      BogoliubovHandle b;
      check(swsyk_bogoliubov_compute(g.get(), c.get(), b.out()));
      std::size_t modes = 0;
      check(swsyk_bogoliubov_mode_count(b.get(), &modes));
      std::vector<double> eps(modes / 2);
      check(swsyk_bogoliubov_energies(b.get(), eps.data(), eps.size()));
      if (!bg_out.empty()) {
        std::unique_ptr<std::FILE, int (*)(std::FILE*)> f(std::fopen(bg_out.c_str(), "w"), std::fclose);
        if (!f) {
          std::fprintf(stderr, "error: cannot write %s\n", bg_out.c_str());
          return static_cast<int>(SWSYK_ERR_IO);
        }
        std::fprintf(f.get(), "mode,eps\n");
        for (std::size_t i = 0; i < eps.size(); ++i) std::fprintf(f.get(), "%zu,%.17g\n", i, eps[i]);
      }
      swsyk_extensivity m;
      check(swsyk_quartic_extensivity(b.get(), bg_sites.data(), bg_tau, bg_workers, &m));
      print_value("modes", modes);
      print_value("participation_ratio", m.participation_ratio);
      print_value("support_count", m.support_count);
      print_value("sum_sq", m.sum_sq);
      print_value("max_abs", m.max_abs);
    } else if (*ex) {
      swsyk_experiment_summary summary;
      check(swsyk_experiment_run(ex_config.c_str(), ex_kind.c_str(), ex_jobs, ex_out.c_str(), &summary));
      print_value("tasks", summary.tasks);
      print_value("computed", summary.computed);
      print_value("reused", summary.reused);
      std::printf("config_hash: %s\n", summary.config_hash);
    }
  } catch (const Failure& f) {
    std::fprintf(stderr, "error (%s): %s\n", swsyk_status_string(f.status), swsyk_last_error());
    return static_cast<int>(f.status);
  } catch (const CLI::ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return static_cast<int>(SWSYK_ERR_VALIDATION);
  }
  return 0;
}
