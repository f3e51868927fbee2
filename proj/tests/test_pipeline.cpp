#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "doctest.h"
#include "swsyk/error.hpp"
#include "swsyk/io.hpp"
#include "swsyk/pipeline.hpp"
#include "swsyk/rng.hpp"
#include "swsyk/eigensolve.hpp"
#include "swsyk/graph.hpp"
#include "swsyk/couplings.hpp"

using namespace swsyk;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("swsyk_pipeline_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) { return read_text_file(p.string()); }

std::size_t line_count(const fs::path& p) {
  std::ifstream in(p);
  std::size_t n = 0;
  std::string line;
  while (std::getline(in, line)) ++n;
  return n;
}

const char* kFig3 =
    "# small fig3 sweep\n"
    "schema_version = 1\n"
    "experiment = fig3\n"
    "n = 12, 14\n"
    "k = 2\n"
    "p = 0\n"
    "realizations = 6\n"
    "seed = 2024\n";

}  // namespace

TEST_CASE("derived seeds separate streams and do not collide") {
  CHECK(derive_seed(1, StreamTag::graph, 0) == derive_seed(1, StreamTag::graph, 0));
  CHECK(derive_seed(1, StreamTag::graph, 0) != derive_seed(1, StreamTag::coupling, 0));
  CHECK(derive_seed(1, StreamTag::coupling, 0) != derive_seed(1, StreamTag::solver, 0));
  CHECK(derive_seed(1, StreamTag::graph, 0) != derive_seed(2, StreamTag::graph, 0));
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(3'000'000);
  for (std::uint64_t i = 0; i < 1'000'000; ++i)
    for (auto tag : {StreamTag::graph, StreamTag::coupling, StreamTag::solver}) seen.insert(derive_seed(7, tag, i));
  CHECK(seen.size() == 3'000'000);
  CHECK(parse_stream_tag("coupling") == StreamTag::coupling);
  CHECK_FALSE(parse_stream_tag("other").has_value());
}

TEST_CASE("task keys keep the fields disjoint") {
  CHECK(task_key(24, 0, 0, 0) != task_key(24, 1, 0, 0));
  CHECK(task_key(24, 0, 1, 0) != task_key(24, 0, 0, 1));
  CHECK(task_key(24, 0, 0, 0) != task_key(26, 0, 0, 0));
  CHECK((task_key(65535, 2047, 4095, 16777215) >> 63) == 0);
}

TEST_CASE("config parsing and validation") {
  const auto cfg = parse_config(kFig3);
  CHECK(cfg.kind == ExperimentKind::fig3);
  CHECK(cfg.n_values == std::vector<std::uint32_t>{12, 14});
  CHECK(cfg.realizations == 6);
  CHECK(cfg.seed == 2024);
  CHECK(cfg.method == SolveMethod::dense);
  CHECK(parse_config(cfg.canonical()).canonical() == cfg.canonical());
  CHECK(parse_config(cfg.canonical()).hash() == cfg.hash());
  CHECK(cfg.hash().size() == 16);

  auto other = cfg;
  other.seed = 2025;
  CHECK(other.hash() != cfg.hash());

  CHECK_THROWS_AS(parse_config("experiment = fig3\nn = 12\n"), ValidationError);
  CHECK_THROWS_AS(parse_config("schema_version = 2\nexperiment = fig3\nn = 12\n"), ValidationError);
  CHECK_THROWS_AS(parse_config("schema_version = 1\nexperiment = fig9\nn = 12\n"), ValidationError);
  CHECK_THROWS_AS(parse_config("schema_version = 1\nexperiment = fig3\nn = 12\nbogus = 1\n"), ValidationError);
  CHECK_THROWS_AS(parse_config("schema_version = 1\nexperiment = fig3\nn = 13\n"), ValidationError);
  CHECK_THROWS_AS(parse_config("schema_version = 1\nexperiment = fig3\nn = 12\np = 0.5\n"), ValidationError);
  CHECK_THROWS_AS(parse_config("schema_version = 1\nexperiment = fig2\nn = 12\np = 1.5\n"), ValidationError);
  CHECK_THROWS_AS(parse_config("schema_version = 1\nexperiment = fig2\nn = 12\nn = 14\n"), ValidationError);
  CHECK_THROWS_AS(parse_config("schema_version = 1\nexperiment = fig2\nn = 12\nrealizations = x\n"), ValidationError);
}

TEST_CASE("task plans follow the seed rules") {
  auto cfg = parse_config(
      "schema_version = 1\nexperiment = fig2\nn = 12\np = 0.1, 0.9\nrealizations = 3\nseed = 5\n");
  const auto tasks = plan_tasks(cfg);
  REQUIRE(tasks.size() == 12);
  // rewired and base share couplings; couplings are shared across p
  CHECK(tasks[0].kind == TaskKind::many_body);
  CHECK(tasks[1].kind == TaskKind::many_body_base);
  CHECK(tasks[0].coupling_seed == tasks[1].coupling_seed);
  CHECK(tasks[0].coupling_seed == tasks[6].coupling_seed);
  CHECK(tasks[0].coupling_seed != tasks[2].coupling_seed);
  // one graph per p
  CHECK(tasks[0].graph_seed == tasks[2].graph_seed);
  CHECK(tasks[0].graph_seed != tasks[6].graph_seed);
  CHECK(tasks[0].coupling_seed == derive_seed(5, StreamTag::coupling, task_key(12, 0, 0, 0)));
  for (std::size_t i = 0; i < tasks.size(); ++i) CHECK(tasks[i].index == i);
}

TEST_CASE("fig4 bookkeeping: graphs x realizations records per p") {
  auto cfg = parse_config(
      "schema_version = 1\nexperiment = fig4\nn = 60\nk = 2\np = 0, 1\ngraphs = 5\nrealizations = 30\nseed = 3\n");
  const auto out = run_experiment(cfg);
  REQUIRE(out.summary.size() == 2);
  CHECK(out.summary[0].count == 150);
  CHECK(out.summary[1].count == 150);
  CHECK(out.records.size() == 300);
  std::unordered_set<std::uint64_t> graphs;
  for (const auto& r : out.records) graphs.insert(r.task.graph_seed);
  CHECK(graphs.size() == 10);
}

TEST_CASE("outputs are byte identical across worker counts") {
  const auto cfg = parse_config(kFig3);
  const auto a = scratch("jobs1");
  const auto b = scratch("jobs3");
  RunOptions o1, o3;
  o1.jobs = 1;
  o1.out_dir = a.string();
  o3.jobs = 3;
  o3.out_dir = b.string();
  const auto ra = run_experiment(cfg, o1);
  const auto rb = run_experiment(cfg, o3);
  REQUIRE(ra.files == rb.files);
  CHECK(ra.files.size() >= 2);
  for (const auto& f : ra.files) CHECK(slurp(a / f) == slurp(b / f));
  CHECK(fs::exists(a / "fig3_plot.json"));
  const auto text = slurp(a / "fig3.csv");
  CHECK(text.find("# config_hash: " + cfg.hash()) != std::string::npos);
  CHECK(text.find("n,p,series,count,mean_r,std_r\n") != std::string::npos);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("interrupted runs resume from completed records") {
  const auto cfg = parse_config(kFig3);
  const auto dir = scratch("resume");
  RunOptions opts;
  opts.out_dir = dir.string();
  const auto first = run_experiment(cfg, opts);
  CHECK(first.computed == 12);
  const auto reference = slurp(dir / "fig3.csv");

  // keep 5 records plus a torn final line
  std::vector<std::string> lines;
  {
    std::ifstream in(dir / "records.jsonl");
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
  }
  REQUIRE(lines.size() == 12);
  {
    std::ofstream out(dir / "records.jsonl", std::ios::trunc);
    for (std::size_t i = 0; i < 5; ++i) out << lines[i] << '\n';
    out << lines[5].substr(0, lines[5].size() / 2);
  }
  fs::remove(dir / "fig3.csv");
  std::size_t callbacks = 0;
  opts.on_record = [&](const RunRecord&) { ++callbacks; };
  const auto second = run_experiment(cfg, opts);
  CHECK(second.reused == 5);
  CHECK(second.computed == 7);
  CHECK(callbacks == 7);
  CHECK(slurp(dir / "fig3.csv") == reference);

  // a changed config recomputes everything
  auto changed = cfg;
  changed.seed = 1;
  opts.on_record = nullptr;
  const auto third = run_experiment(changed, opts);
  CHECK(third.reused == 0);
  CHECK(line_count(dir / "records.jsonl") > 12);
  fs::remove_all(dir);
}

TEST_CASE("records reproduce from their seeds alone") {
  const auto cfg = parse_config(kFig3);
  const auto out = run_experiment(cfg);
  const auto& rec = out.records[7];
  const Graph g = base_circulant({rec.task.n, cfg.k, 0.0, rec.task.graph_seed});
  const auto c = sample_couplings(g, rec.task.coupling_seed);
  DenseOptions d;
  d.residual_samples = 0;
  const auto s = dense_eigh(assemble_hamiltonian(g, c, true, Sector::even), d);
  CHECK(mean_r_central(s, 0.2).mean_r == rec.mean_r);
  CHECK(run_task(cfg, rec.task).mean_r == rec.mean_r);
}

TEST_CASE("fig2 pairs rewired and base runs; no impurity stays far from GUE") {
  auto cfg = parse_config(
      "schema_version = 1\nexperiment = fig2\nn = 16\np = 0.9\nrealizations = 8\nimpurity = false\nseed = 9\n");
  const auto out = run_experiment(cfg);
  REQUIRE(out.fig2.size() == 8);
  double acc = 0.0;
  for (const auto& row : out.fig2) {
    CHECK_FALSE(std::isnan(row.mean_r_base));
    acc += row.mean_r_rewired;
  }
  CHECK(acc / 8.0 < 0.45);
  REQUIRE(out.summary_base.size() == 1);
}

TEST_CASE("histogram tables respect the sample count") {
  auto cfg = parse_config(
      "schema_version = 1\nexperiment = histogram\nn = 12\nrealizations = 40\nhist_bins = 7\nseed = 4\n");
  const auto dir = scratch("hist");
  RunOptions opts;
  opts.out_dir = dir.string();
  const auto out = run_experiment(cfg, opts);
  REQUIRE(out.histograms.size() == 1);
  CHECK(out.histograms[0].hist.total() + out.histograms[0].hist.below + out.histograms[0].hist.above == 40);
  CHECK(out.histograms[0].hist.counts.size() == 7);
  CHECK(fs::exists(dir / "histogram_N12.csv"));
  const auto text = slurp(dir / "histogram_N12.csv");
  CHECK(text.find("# method: dense") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("filter method through the pipeline") {
  auto cfg = parse_config(
      "schema_version = 1\nexperiment = custom\nn = 14\np = 0.5\nrealizations = 2\nmethod = filter\nseed = 2\n"
      "save_spectra = true\n");
  const auto dir = scratch("filter");
  RunOptions opts;
  opts.out_dir = dir.string();
  const auto out = run_experiment(cfg, opts);
  REQUIRE(out.records.size() == 2);
  for (const auto& r : out.records) {
    CHECK(r.mean_r > 0.0);
    CHECK(fs::exists(dir / r.spectrum_file));
  }
  fs::remove_all(dir);
}

TEST_CASE("small-N histogram is unimodal") {
  auto cfg = parse_config("schema_version = 1\nexperiment = histogram\nn = 16\nrealizations = 200\nseed = 16\n");
  RunOptions opts;
  opts.jobs = 2;
  const auto out = run_experiment(cfg, opts);
  REQUIRE(out.histograms.size() == 1);
  MESSAGE("bimodality coefficient N=16: " << out.histograms[0].bimodality);
  CHECK(out.histograms[0].bimodality < kBimodalityThreshold);
  CHECK(out.histograms[0].hist.total() + out.histograms[0].hist.below + out.histograms[0].hist.above == 200);
}
