#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "swsyk/config.hpp"
#include "swsyk/stats.hpp"

namespace swsyk {

enum class TaskKind { many_body, many_body_base, single_particle };

std::string to_string(TaskKind k);

/// One unit of work. Every task is reproducible from its seeds alone: the
/// graph comes from (n, k, p, graph_seed), the couplings from coupling_seed
/// drawn in edge-index order, the solver from solver_seed.
struct Task {
  std::size_t index = 0;
  TaskKind kind = TaskKind::many_body;
  std::uint32_t n = 0;
  double p = 0.0;
  std::size_t p_index = 0;
  std::size_t graph_index = 0;
  std::size_t realization = 0;
  std::uint64_t graph_seed = 0;
  std::uint64_t coupling_seed = 0;
  std::uint64_t solver_seed = 0;
};

/// Outcome of one task. `seconds` is informational and never reaches a CSV.
struct RunRecord {
  std::string config_hash;
  Task task;
  std::string status = "ok";
  double mean_r = 0.0;
  std::size_t ratio_count = 0;
  std::size_t zero_spacings = 0;
  std::string spectrum_file;
  double seconds = 0.0;
};

/// Seed layout. Each key packs (N, p index, graph index, realization) into
/// disjoint bit fields and goes through derive_seed with its stream tag.
/// Coupling keys omit the p and graph fields for fig2, so base and rewired
/// graphs (and every p) share one coupling realization per index.
std::uint64_t task_key(std::uint32_t n, std::size_t p_index, std::size_t graph_index, std::size_t realization);

/// Deterministic task list for a config, in output order.
std::vector<Task> plan_tasks(const ExperimentConfig& cfg);

/// Runs a single task in the calling thread.
RunRecord run_task(const ExperimentConfig& cfg, const Task& task, const std::string& spectra_dir = {});

struct RunOptions {
  unsigned jobs = 1;
  /// Empty: nothing is written and nothing is resumed.
  std::string out_dir;
  bool resume = true;
  std::function<void(const RunRecord&)> on_record;
};

struct Fig2Row {
  std::uint32_t n = 0;
  double p = 0.0;
  std::size_t realization = 0;
  std::uint64_t graph_seed = 0;
  std::uint64_t coupling_seed = 0;
  double mean_r_rewired = 0.0;
  double mean_r_base = 0.0;  // NaN when include_base is off
};

struct SummaryRow {
  std::uint32_t n = 0;
  double p = 0.0;
  std::size_t count = 0;
  double mean = 0.0;
  double std_dev = 0.0;
};

struct HistogramTable {
  std::uint32_t n = 0;
  Histogram hist;
  std::vector<double> samples;
  double bimodality = 0.0;
  std::string method;
};

struct ExperimentOutput {
  std::string config_hash;
  std::vector<RunRecord> records;  // task order
  std::vector<Fig2Row> fig2;
  std::vector<SummaryRow> summary;  // fig2 rewired / fig3 per N / fig4 per p / custom per (N, p)
  std::vector<SummaryRow> summary_base;
  std::vector<HistogramTable> histograms;
  std::vector<std::string> files;  // written, relative to out_dir
  std::size_t computed = 0;
  std::size_t reused = 0;
};

/// Plans, executes (task-parallel, merged in task order), summarizes and,
/// with an output directory, persists records.jsonl and the CSV tables.
ExperimentOutput run_experiment(const ExperimentConfig& cfg, const RunOptions& opts = {});

inline ExperimentOutput run_fig2(ExperimentConfig cfg, const RunOptions& opts = {}) {
  cfg.kind = ExperimentKind::fig2;
  return run_experiment(cfg, opts);
}
inline ExperimentOutput run_fig3(ExperimentConfig cfg, const RunOptions& opts = {}) {
  cfg.kind = ExperimentKind::fig3;
  return run_experiment(cfg, opts);
}
inline ExperimentOutput run_fig4(ExperimentConfig cfg, const RunOptions& opts = {}) {
  cfg.kind = ExperimentKind::fig4;
  return run_experiment(cfg, opts);
}
inline ExperimentOutput run_histogram(ExperimentConfig cfg, const RunOptions& opts = {}) {
  cfg.kind = ExperimentKind::histogram;
  return run_experiment(cfg, opts);
}

}  // namespace swsyk
