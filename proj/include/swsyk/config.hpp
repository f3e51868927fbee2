#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "swsyk/chebyshev.hpp"
#include "swsyk/hamiltonian.hpp"

namespace swsyk {

enum class ExperimentKind { fig2, fig3, fig4, histogram, custom };

std::string to_string(ExperimentKind k);
ExperimentKind parse_experiment_kind(const std::string& name);

enum class SolveMethod { dense, filter };

std::string to_string(SolveMethod m);
SolveMethod parse_solve_method(const std::string& name);

inline constexpr int kConfigSchemaVersion = 1;

// Experiment configuration, schema version 1. File format: one `key = value`
// per line, `#` starts a comment, lists are comma separated. Keys:
//
//   schema_version   1 (mandatory)
//   experiment       fig2 | fig3 | fig4 | histogram | custom (mandatory)
//   n                list of N (Majoranas, or sites for fig4)
//   k                circulant half-degree                   [2]
//   p                list of rewiring probabilities          [0]
//   realizations     coupling draws per graph                [10]
//   graphs           graphs per (N, p)                       [1]
//   seed             base seed                               [1]
//   method           dense | filter                          [dense]
//   window_fraction  central fraction for <r>                [0.2]
//   impurity         true | false                            [true]
//   sector           even | odd                              [even]
//   include_base     fig2: also run the unrewired circulant  [true]
//   hist_bins, hist_lo, hist_hi                              [35, 0.35, 0.70]
//   exclude_fraction single-particle edge exclusion          [0.01]
//   filter_degree, filter_block, filter_damping, filter_tol, filter_max_iterations
//   verify_residuals dense residual spot checks per task     [0]
//   save_spectra     write every many-body spectrum          [false]
//   plot_description emit a JSON plot description           [true]
struct ExperimentConfig {
  int schema_version = kConfigSchemaVersion;
  ExperimentKind kind = ExperimentKind::custom;
  std::vector<std::uint32_t> n_values;
  std::uint32_t k = 2;
  std::vector<double> p_values{0.0};
  std::size_t realizations = 10;
  std::size_t graphs = 1;
  std::uint64_t seed = 1;
  SolveMethod method = SolveMethod::dense;
  double window_fraction = 0.2;
  bool impurity = true;
  Sector sector = Sector::even;
  bool include_base = true;
  std::size_t hist_bins = 35;
  double hist_lo = 0.35;
  double hist_hi = 0.70;
  double exclude_fraction = 0.01;
  FilterConfig filter;
  std::size_t verify_residuals = 0;
  bool save_spectra = false;
  bool plot_description = true;

  /// Cross-field checks; throws ValidationError.
  void validate() const;
  /// Normalized `key = value` text; equal configs give equal text.
  std::string canonical() const;
  /// FNV-1a 64 of canonical(), as 16 hex digits.
  std::string hash() const;
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

}  // namespace swsyk
