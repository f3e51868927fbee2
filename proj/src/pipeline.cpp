#include "swsyk/pipeline.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include "json.hpp"
#include <sstream>
#include <thread>

#include "swsyk/couplings.hpp"
#include "swsyk/dyson.hpp"
#include "swsyk/eigensolve.hpp"
#include "swsyk/error.hpp"
#include "swsyk/graph.hpp"
#include "swsyk/io.hpp"
#include "swsyk/rng.hpp"

namespace swsyk {

namespace fs = std::filesystem;
using json = nlohmann::json;

std::string to_string(TaskKind k) {
  switch (k) {
    case TaskKind::many_body: return "many_body";
    case TaskKind::many_body_base: return "many_body_base";
    case TaskKind::single_particle: return "single_particle";
  }
  return "many_body";
}

namespace {

TaskKind parse_task_kind(const std::string& s) {
  for (auto k : {TaskKind::many_body, TaskKind::many_body_base, TaskKind::single_particle})
    if (to_string(k) == s) return k;
  throw ValidationError("unknown task kind '" + s + "'");
}

constexpr std::size_t kMaxP = std::size_t{1} << 11;
constexpr std::size_t kMaxGraphs = std::size_t{1} << 12;
constexpr std::size_t kMaxRealizations = std::size_t{1} << 24;

}  // namespace

std::uint64_t task_key(std::uint32_t n, std::size_t p_index, std::size_t graph_index, std::size_t realization) {
  // bits 47..62 N, 36..46 p index, 24..35 graph, 0..23 realization
  return (static_cast<std::uint64_t>(n & 0xffffu) << 47) | (static_cast<std::uint64_t>(p_index & 0x7ffu) << 36) |
         (static_cast<std::uint64_t>(graph_index & 0xfffu) << 24) | static_cast<std::uint64_t>(realization & 0xffffffu);
}

std::vector<Task> plan_tasks(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.p_values.size() > kMaxP || cfg.graphs > kMaxGraphs || cfg.realizations > kMaxRealizations)
    throw CapabilityError("plan_tasks: sweep exceeds the seed key layout");
  std::vector<Task> tasks;
  auto push = [&](Task t) {
    t.index = tasks.size();
    tasks.push_back(t);
  };
  const auto base = cfg.seed;
  for (auto n : cfg.n_values) {
    switch (cfg.kind) {
      case ExperimentKind::fig2:
        for (std::size_t pi = 0; pi < cfg.p_values.size(); ++pi) {
          for (std::size_t r = 0; r < cfg.realizations; ++r) {
            Task t;
            t.kind = TaskKind::many_body;
            t.n = n;
            t.p = cfg.p_values[pi];
            t.p_index = pi;
            t.realization = r;
            t.graph_seed = derive_seed(base, StreamTag::graph, task_key(n, pi, 0, 0));
            t.coupling_seed = derive_seed(base, StreamTag::coupling, task_key(n, 0, 0, r));
            t.solver_seed = derive_seed(base, StreamTag::solver, task_key(n, pi, 0, r));
            push(t);
            if (cfg.include_base) {
              t.kind = TaskKind::many_body_base;
              t.graph_seed = 0;
              t.solver_seed = derive_seed(base, StreamTag::solver, task_key(n, pi, 0, r) | (std::uint64_t{1} << 63));
              push(t);
            }
          }
        }
        break;
      case ExperimentKind::fig3:
      case ExperimentKind::histogram:
        for (std::size_t r = 0; r < cfg.realizations; ++r) {
          Task t;
          t.kind = TaskKind::many_body;
          t.n = n;
          t.realization = r;
          t.graph_seed = derive_seed(base, StreamTag::graph, task_key(n, 0, 0, 0));
          t.coupling_seed = derive_seed(base, StreamTag::coupling, task_key(n, 0, 0, r));
          t.solver_seed = derive_seed(base, StreamTag::solver, task_key(n, 0, 0, r));
          push(t);
        }
        break;
      case ExperimentKind::fig4:
      case ExperimentKind::custom:
        for (std::size_t pi = 0; pi < cfg.p_values.size(); ++pi)
          for (std::size_t g = 0; g < cfg.graphs; ++g)
            for (std::size_t r = 0; r < cfg.realizations; ++r) {
              Task t;
              t.kind = cfg.kind == ExperimentKind::fig4 ? TaskKind::single_particle : TaskKind::many_body;
              t.n = n;
              t.p = cfg.p_values[pi];
              t.p_index = pi;
              t.graph_index = g;
              t.realization = r;
              t.graph_seed = derive_seed(base, StreamTag::graph, task_key(n, pi, g, 0));
              t.coupling_seed = derive_seed(base, StreamTag::coupling, task_key(n, pi, g, r));
              t.solver_seed = derive_seed(base, StreamTag::solver, task_key(n, pi, g, r));
              push(t);
            }
        break;
    }
  }
  return tasks;
}

RunRecord run_task(const ExperimentConfig& cfg, const Task& task, const std::string& spectra_dir) {
  const auto start = std::chrono::steady_clock::now();
  GraphSpec spec{task.n, cfg.k, task.kind == TaskKind::many_body_base ? 0.0 : task.p, task.graph_seed};
  const Graph g = spec.p == 0.0 ? base_circulant(spec) : watts_strogatz(spec);
  const CouplingSet c = sample_couplings(g, task.coupling_seed);

  RunRecord rec;
  rec.config_hash = cfg.hash();
  rec.task = task;
  RStatistics st;
  if (task.kind == TaskKind::single_particle) {
    st = single_particle_rstats(g, c, {cfg.window_fraction, cfg.exclude_fraction});
  } else {
    Spectrum s;
    if (cfg.method == SolveMethod::dense) {
      if (task.n > kMaxExplicitMajoranas) throw CapabilityError("dense method needs N <= 34");
      const auto h = assemble_hamiltonian(g, c, cfg.impurity, cfg.sector);
      DenseOptions dopts;
      dopts.residual_samples = cfg.verify_residuals;
      s = dense_eigh(h, dopts);
    } else {
      const auto op = make_operator(g, c, cfg.impurity, cfg.sector);
      SpectralWindow window;
      window.center_fraction = cfg.window_fraction;
      s = filter_diagonalize(*op, window, cfg.filter, task.solver_seed);
      if (!s.converged)
        throw ConvergenceError("filter diagonalization did not converge for task " + std::to_string(task.index));
    }
    st = mean_r_central(s, cfg.window_fraction);
    if (!spectra_dir.empty()) {
      char name[48];
      std::snprintf(name, sizeof name, "task_%06zu.csv", task.index);
      s.metadata.emplace_back("graph_seed", std::to_string(task.graph_seed));
      s.metadata.emplace_back("coupling_seed", std::to_string(task.coupling_seed));
      s.metadata.emplace_back("solver_seed", std::to_string(task.solver_seed));
      s.metadata.emplace_back("p", format_double(spec.p));
      save_spectrum((fs::path(spectra_dir) / name).string(), s);
      rec.spectrum_file = (fs::path("spectra") / name).string();
    }
  }
  rec.mean_r = st.mean_r;
  rec.ratio_count = st.count;
  rec.zero_spacings = st.zero_spacings;
  rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

namespace {

json to_json(const RunRecord& r) {
  const Task& t = r.task;
  return json{{"config_hash", r.config_hash},
              {"task", t.index},
              {"kind", to_string(t.kind)},
              {"n", t.n},
              {"p", t.p},
              {"p_index", t.p_index},
              {"graph_index", t.graph_index},
              {"realization", t.realization},
              {"graph_seed", t.graph_seed},
              {"coupling_seed", t.coupling_seed},
              {"solver_seed", t.solver_seed},
              {"status", r.status},
              {"mean_r", r.mean_r},
              {"ratio_count", r.ratio_count},
              {"zero_spacings", r.zero_spacings},
              {"spectrum_file", r.spectrum_file},
              {"seconds", r.seconds}};
}

RunRecord from_json(const json& j) {
  RunRecord r;
  r.config_hash = j.at("config_hash").get<std::string>();
  r.task.index = j.at("task").get<std::size_t>();
  r.task.kind = parse_task_kind(j.at("kind").get<std::string>());
  r.task.n = j.at("n").get<std::uint32_t>();
  r.task.p = j.at("p").get<double>();
  r.task.p_index = j.at("p_index").get<std::size_t>();
  r.task.graph_index = j.at("graph_index").get<std::size_t>();
  r.task.realization = j.at("realization").get<std::size_t>();
  r.task.graph_seed = j.at("graph_seed").get<std::uint64_t>();
  r.task.coupling_seed = j.at("coupling_seed").get<std::uint64_t>();
  r.task.solver_seed = j.at("solver_seed").get<std::uint64_t>();
  r.status = j.at("status").get<std::string>();
  r.mean_r = j.at("mean_r").get<double>();
  r.ratio_count = j.at("ratio_count").get<std::size_t>();
  r.zero_spacings = j.at("zero_spacings").get<std::size_t>();
  r.spectrum_file = j.value("spectrum_file", std::string{});
  r.seconds = j.value("seconds", 0.0);
  return r;
}

bool same_task(const Task& a, const Task& b) {
  return a.index == b.index && a.kind == b.kind && a.n == b.n && a.p == b.p && a.graph_seed == b.graph_seed &&
         a.coupling_seed == b.coupling_seed && a.solver_seed == b.solver_seed;
}

// Completed records from an earlier run of the same config; damaged lines
// (e.g. an interrupted final write) are skipped.
std::map<std::size_t, RunRecord> load_records(const fs::path& file, const std::string& hash,
                                              const std::vector<Task>& tasks) {
  std::map<std::size_t, RunRecord> done;
  std::ifstream in(file);
  if (!in) return done;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    try {
      auto rec = from_json(json::parse(line));
      if (rec.config_hash != hash || rec.status != "ok") continue;
      if (rec.task.index >= tasks.size() || !same_task(rec.task, tasks[rec.task.index])) continue;
      done[rec.task.index] = std::move(rec);
    } catch (const std::exception&) {
      continue;
    }
  }
  return done;
}

SummaryRow summarize(std::uint32_t n, double p, const std::vector<double>& values) {
  SummaryRow row;
  row.n = n;
  row.p = p;
  row.count = values.size();
  row.mean = values.empty() ? std::numeric_limits<double>::quiet_NaN() : mean(values);
  row.std_dev = stddev(values);
  return row;
}

Metadata csv_metadata(const ExperimentConfig& cfg) {
  std::string ns;
  for (std::size_t i = 0; i < cfg.n_values.size(); ++i) ns += (i ? "," : "") + std::to_string(cfg.n_values[i]);
  return {{"experiment", to_string(cfg.kind)},
          {"schema_version", std::to_string(cfg.schema_version)},
          {"config_hash", cfg.hash()},
          {"seed", std::to_string(cfg.seed)},
          {"n", ns},
          {"k", std::to_string(cfg.k)},
          {"method", cfg.kind == ExperimentKind::fig4 ? "single_particle_dense" : to_string(cfg.method)},
          {"impurity", cfg.impurity ? "true" : "false"},
          {"sector", to_string(cfg.sector)},
          {"window_fraction", format_double(cfg.window_fraction)},
          {"seed_rule", "derive_seed(seed, tag, key); key = N<<47 | p_index<<36 | graph<<24 | realization"}};
}

std::string records_csv(const ExperimentConfig& cfg, const std::vector<RunRecord>& records) {
  std::string out = metadata_block(csv_metadata(cfg));
  out += "task,kind,n,p,graph_index,realization_index,graph_seed,coupling_seed,solver_seed,mean_r,count,zero_spacings\n";
  for (const auto& r : records) {
    const Task& t = r.task;
    out += std::to_string(t.index) + "," + to_string(t.kind) + "," + std::to_string(t.n) + "," + format_double(t.p) +
           "," + std::to_string(t.graph_index) + "," + std::to_string(t.realization) + "," +
           std::to_string(t.graph_seed) + "," + std::to_string(t.coupling_seed) + "," + std::to_string(t.solver_seed) +
           "," + format_double(r.mean_r) + "," + std::to_string(r.ratio_count) + "," + std::to_string(r.zero_spacings) +
           "\n";
  }
  return out;
}

std::string summary_csv(const ExperimentConfig& cfg, const std::vector<SummaryRow>& rows, const std::string& series) {
  std::string out = metadata_block(csv_metadata(cfg));
  out += "n,p,series,count,mean_r,std_r\n";
  for (const auto& r : rows)
    out += std::to_string(r.n) + "," + format_double(r.p) + "," + series + "," + std::to_string(r.count) + "," +
           format_double(r.mean) + "," + format_double(r.std_dev) + "\n";
  return out;
}

void write_plot(const fs::path& dir, const std::string& name, json desc) {
  desc["references"] = {{"poisson", ReferenceValues::poisson}, {"gue", ReferenceValues::gue}};
  write_text_file((dir / name).string(), desc.dump(2) + "\n");
}

}  // namespace

ExperimentOutput run_experiment(const ExperimentConfig& cfg, const RunOptions& opts) {
  const auto tasks = plan_tasks(cfg);
  ExperimentOutput out;
  out.config_hash = cfg.hash();

  fs::path dir;
  std::string spectra_dir;
  std::map<std::size_t, RunRecord> done;
  if (!opts.out_dir.empty()) {
    dir = opts.out_dir;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
    if (cfg.save_spectra) {
      spectra_dir = (dir / "spectra").string();
      fs::create_directories(spectra_dir, ec);
      if (ec) throw IoError("cannot create " + spectra_dir);
    }
    if (opts.resume) done = load_records(dir / "records.jsonl", out.config_hash, tasks);
  }

  std::vector<RunRecord> records(tasks.size());
  std::vector<std::size_t> pending;
  for (const auto& t : tasks) {
    if (auto it = done.find(t.index); it != done.end()) {
      records[t.index] = it->second;
      ++out.reused;
    } else {
      pending.push_back(t.index);
    }
  }

  std::ofstream journal;
  if (!dir.empty()) {
    const auto path = dir / "records.jsonl";
    bool torn = false;
    if (opts.resume) {
      std::ifstream tail(path, std::ios::binary | std::ios::ate);
      if (tail && tail.tellg() > 0) {
        tail.seekg(-1, std::ios::end);
        torn = tail.get() != '\n';
      }
    }
    journal.open(path, opts.resume ? std::ios::app : std::ios::trunc);
    if (!journal) throw IoError("cannot open " + path.string());
    if (torn) journal << '\n';
  }
  std::mutex journal_mutex;
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::exception_ptr failure;

  auto worker = [&] {
    while (!stop.load()) {
      const std::size_t slot = next.fetch_add(1);
      if (slot >= pending.size()) return;
      const std::size_t idx = pending[slot];
      try {
        RunRecord rec = run_task(cfg, tasks[idx], spectra_dir);
        std::lock_guard<std::mutex> lock(journal_mutex);
        if (journal.is_open()) journal << to_json(rec).dump() << '\n' << std::flush;
        if (opts.on_record) opts.on_record(rec);
        records[idx] = std::move(rec);
      } catch (...) {
        std::lock_guard<std::mutex> lock(journal_mutex);
        if (!failure) failure = std::current_exception();
        stop.store(true);
      }
    }
  };
  const unsigned jobs = static_cast<unsigned>(std::max<std::size_t>(1, std::min<std::size_t>(opts.jobs, pending.size())));
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
  out.computed = pending.size();
  out.records = records;

  // Tables, always assembled in task order.
  std::map<std::pair<std::uint32_t, std::size_t>, std::vector<double>> by_np, by_np_base;
  for (const auto& r : records) {
    auto& bucket = r.task.kind == TaskKind::many_body_base ? by_np_base : by_np;
    bucket[{r.task.n, r.task.p_index}].push_back(r.mean_r);
  }
  for (const auto& [key, values] : by_np) out.summary.push_back(summarize(key.first, cfg.p_values[key.second], values));
  for (const auto& [key, values] : by_np_base)
    out.summary_base.push_back(summarize(key.first, cfg.p_values[key.second], values));

  if (cfg.kind == ExperimentKind::fig2) {
    for (std::size_t i = 0; i < records.size(); ++i) {
      const auto& r = records[i];
      if (r.task.kind != TaskKind::many_body) continue;
      Fig2Row row;
      row.n = r.task.n;
      row.p = r.task.p;
      row.realization = r.task.realization;
      row.graph_seed = r.task.graph_seed;
      row.coupling_seed = r.task.coupling_seed;
      row.mean_r_rewired = r.mean_r;
      row.mean_r_base = std::numeric_limits<double>::quiet_NaN();
      if (cfg.include_base && i + 1 < records.size() && records[i + 1].task.kind == TaskKind::many_body_base)
        row.mean_r_base = records[i + 1].mean_r;
      out.fig2.push_back(row);
    }
  }
  if (cfg.kind == ExperimentKind::histogram) {
    for (const auto& [key, values] : by_np) {
      HistogramTable h;
      h.n = key.first;
      h.samples = values;
      h.hist = histogram(values, cfg.hist_bins, cfg.hist_lo, cfg.hist_hi);
      h.bimodality = values.size() >= 4 ? bimodality_coefficient(values) : std::numeric_limits<double>::quiet_NaN();
      h.method = to_string(cfg.method);
      out.histograms.push_back(std::move(h));
    }
  }

  if (dir.empty()) return out;

  const std::string kind = to_string(cfg.kind);
  auto emit = [&](const std::string& name, const std::string& text) {
    write_text_file((dir / name).string(), text);
    out.files.push_back(name);
  };
  emit(kind + "_records.csv", records_csv(cfg, records));

  switch (cfg.kind) {
    case ExperimentKind::fig2: {
      std::string text = metadata_block(csv_metadata(cfg));
      text += "n,p,realization,graph_seed,coupling_seed,mean_r_rewired,mean_r_base\n";
      for (const auto& r : out.fig2)
        text += std::to_string(r.n) + "," + format_double(r.p) + "," + std::to_string(r.realization) + "," +
                std::to_string(r.graph_seed) + "," + std::to_string(r.coupling_seed) + "," +
                format_double(r.mean_r_rewired) + "," + format_double(r.mean_r_base) + "\n";
      emit("fig2.csv", text);
      std::string summary = summary_csv(cfg, out.summary, "rewired");
      if (!out.summary_base.empty()) {
        const auto base = summary_csv(cfg, out.summary_base, "base");
        summary += base.substr(base.find("n,p,series") + std::string("n,p,series,count,mean_r,std_r\n").size());
      }
      emit("fig2_summary.csv", summary);
      if (cfg.plot_description)
        write_plot(dir, "fig2_plot.json",
                   {{"type", "line"}, {"data", "fig2.csv"}, {"x", "realization"},
                    {"y", {"mean_r_rewired", "mean_r_base"}}, {"group_by", {"n", "p"}}});
      break;
    }
    case ExperimentKind::fig3:
    case ExperimentKind::fig4:
    case ExperimentKind::custom: {
      emit(kind + ".csv", summary_csv(cfg, out.summary, cfg.kind == ExperimentKind::fig4 ? "single_particle" : "many_body"));
      if (cfg.plot_description) {
        const bool vs_p = cfg.kind != ExperimentKind::fig3;
        write_plot(dir, kind + "_plot.json",
                   {{"type", "errorbar"}, {"data", kind + ".csv"}, {"x", vs_p ? "p" : "n"}, {"y", "mean_r"},
                    {"error", "std_r"}, {"group_by", vs_p ? "n" : "p"}});
      }
      break;
    }
    case ExperimentKind::histogram: {
      for (const auto& h : out.histograms) {
        Metadata meta = csv_metadata(cfg);
        meta.emplace_back("histogram_n", std::to_string(h.n));
        meta.emplace_back("samples", std::to_string(h.samples.size()));
        meta.emplace_back("below", std::to_string(h.hist.below));
        meta.emplace_back("above", std::to_string(h.hist.above));
        meta.emplace_back("bimodality_coefficient", format_double(h.bimodality));
        meta.emplace_back("bimodality_threshold", format_double(kBimodalityThreshold));
        std::string text = metadata_block(meta);
        text += "bin_left,bin_right,count\n";
        for (std::size_t b = 0; b < h.hist.counts.size(); ++b)
          text += format_double(h.hist.edges[b]) + "," + format_double(h.hist.edges[b + 1]) + "," +
                  std::to_string(h.hist.counts[b]) + "\n";
        emit("histogram_N" + std::to_string(h.n) + ".csv", text);
      }
      emit("histogram_summary.csv", summary_csv(cfg, out.summary, "many_body"));
      if (cfg.plot_description)
        write_plot(dir, "histogram_plot.json",
                   {{"type", "histogram"}, {"data_pattern", "histogram_N{n}.csv"}, {"x", "bin_left"}, {"y", "count"}});
      break;
    }
  }
  return out;
}

}  // namespace swsyk
