#include "swsyk/config.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include "swsyk/error.hpp"
#include "swsyk/io.hpp"

namespace swsyk {

std::string to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::fig2: return "fig2";
    case ExperimentKind::fig3: return "fig3";
    case ExperimentKind::fig4: return "fig4";
    case ExperimentKind::histogram: return "histogram";
    case ExperimentKind::custom: return "custom";
  }
  return "custom";
}

ExperimentKind parse_experiment_kind(const std::string& name) {
  for (auto k : {ExperimentKind::fig2, ExperimentKind::fig3, ExperimentKind::fig4, ExperimentKind::histogram,
                 ExperimentKind::custom})
    if (to_string(k) == name) return k;
  throw ValidationError("unknown experiment kind '" + name + "'");
}

std::string to_string(SolveMethod m) { return m == SolveMethod::dense ? "dense" : "filter"; }

SolveMethod parse_solve_method(const std::string& name) {
  if (name == "dense") return SolveMethod::dense;
  if (name == "filter") return SolveMethod::filter;
  throw ValidationError("unknown method '" + name + "' (expected dense or filter)");
}

namespace {

std::uint64_t parse_uint(const std::string& key, const std::string& v) {
  if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos)
    throw ValidationError("config key '" + key + "': expected a non-negative integer, got '" + v + "'");
  try {
    return std::stoull(v);
  } catch (const std::exception&) {
    throw ValidationError("config key '" + key + "': integer out of range");
  }
}

double parse_real(const std::string& key, const std::string& v) {
  try {
    return parse_double(v);
  } catch (const Error&) {
    throw ValidationError("config key '" + key + "': expected a number, got '" + v + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ValidationError("config key '" + key + "': expected true or false, got '" + v + "'");
}

std::vector<std::string> list_items(const std::string& v) {
  std::vector<std::string> out;
  for (const auto& item : split(v, ',')) {
    const auto t = trim(item);
    if (!t.empty()) out.push_back(t);
  }
  return out;
}

std::string join_doubles(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_double(v[i]);
  return s;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (schema_version != kConfigSchemaVersion)
    throw ValidationError("unsupported schema_version " + std::to_string(schema_version));
  if (n_values.empty()) throw ValidationError("config: n list is empty");
  if (p_values.empty()) throw ValidationError("config: p list is empty");
  for (double p : p_values)
    if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("config: p values must lie in [0, 1]");
  for (auto n : n_values) {
    if (n % 2 != 0 || n < 2 * k + 2) throw ValidationError("config: N=" + std::to_string(n) + " must be even and >= 2k+2");
    if (n > 65535) throw CapabilityError("config: N above 65535 is not supported");
  }
  if (k == 0) throw ValidationError("config: k must be >= 1");
  if (realizations == 0 || graphs == 0) throw ValidationError("config: realizations and graphs must be positive");
  if (!(window_fraction > 0.0 && window_fraction <= 1.0)) throw ValidationError("config: window_fraction must lie in (0, 1]");
  if (!(exclude_fraction >= 0.0 && exclude_fraction < 1.0)) throw ValidationError("config: exclude_fraction must lie in [0, 1)");
  if (hist_bins == 0 || !(hist_lo < hist_hi)) throw ValidationError("config: histogram binning is invalid");
  if (kind == ExperimentKind::fig3 || kind == ExperimentKind::histogram) {
    if (p_values.size() != 1 || p_values[0] != 0.0) throw ValidationError("config: " + to_string(kind) + " requires p = 0");
  }
  filter.validate();
}

std::string ExperimentConfig::canonical() const {
  std::ostringstream os;
  os << "schema_version = " << schema_version << '\n';
  os << "experiment = " << to_string(kind) << '\n';
  os << "n = ";
  for (std::size_t i = 0; i < n_values.size(); ++i) os << (i ? "," : "") << n_values[i];
  os << '\n';
  os << "k = " << k << '\n';
  os << "p = " << join_doubles(p_values) << '\n';
  os << "realizations = " << realizations << '\n';
  os << "graphs = " << graphs << '\n';
  os << "seed = " << seed << '\n';
  os << "method = " << to_string(method) << '\n';
  os << "window_fraction = " << format_double(window_fraction) << '\n';
  os << "impurity = " << (impurity ? "true" : "false") << '\n';
  os << "sector = " << to_string(sector) << '\n';
  os << "include_base = " << (include_base ? "true" : "false") << '\n';
  os << "hist_bins = " << hist_bins << '\n';
  os << "hist_lo = " << format_double(hist_lo) << '\n';
  os << "hist_hi = " << format_double(hist_hi) << '\n';
  os << "exclude_fraction = " << format_double(exclude_fraction) << '\n';
  os << "filter_degree = " << filter.polynomial_degree << '\n';
  os << "filter_block = " << filter.block_size << '\n';
  os << "filter_damping = " << to_string(filter.damping) << '\n';
  os << "filter_tol = " << format_double(filter.residual_tol) << '\n';
  os << "filter_max_iterations = " << filter.max_iterations << '\n';
  os << "verify_residuals = " << verify_residuals << '\n';
  os << "save_spectra = " << (save_spectra ? "true" : "false") << '\n';
  return os.str();
}

std::string ExperimentConfig::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ExperimentConfig parse_config(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream is(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ValidationError("config line " + std::to_string(lineno) + ": expected key = value");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key.empty()) throw ValidationError("config line " + std::to_string(lineno) + ": empty key");
    if (!kv.emplace(key, value).second) throw ValidationError("config: duplicate key '" + key + "'");
  }

  if (!kv.count("schema_version")) throw ValidationError("config: schema_version is mandatory");
  if (!kv.count("experiment")) throw ValidationError("config: experiment is mandatory");

  ExperimentConfig cfg;
  std::set<std::string> used;
  auto take = [&](const char* key) -> const std::string* {
    auto it = kv.find(key);
    if (it == kv.end()) return nullptr;
    used.insert(key);
    return &it->second;
  };

  cfg.schema_version = static_cast<int>(parse_uint("schema_version", *take("schema_version")));
  if (cfg.schema_version != kConfigSchemaVersion)
    throw ValidationError("config: unsupported schema_version " + std::to_string(cfg.schema_version));
  cfg.kind = parse_experiment_kind(*take("experiment"));

  if (auto v = take("n")) {
    for (const auto& item : list_items(*v)) {
      const auto n = parse_uint("n", item);
      if (n > 0xffffffffULL) throw ValidationError("config: N too large");
      cfg.n_values.push_back(static_cast<std::uint32_t>(n));
    }
  }
  if (auto v = take("k")) cfg.k = static_cast<std::uint32_t>(parse_uint("k", *v));
  if (auto v = take("p")) {
    cfg.p_values.clear();
    for (const auto& item : list_items(*v)) cfg.p_values.push_back(parse_real("p", item));
  }
  if (auto v = take("realizations")) cfg.realizations = parse_uint("realizations", *v);
  if (auto v = take("graphs")) cfg.graphs = parse_uint("graphs", *v);
  if (auto v = take("seed")) cfg.seed = parse_uint("seed", *v);
  if (auto v = take("method")) cfg.method = parse_solve_method(*v);
  if (auto v = take("window_fraction")) cfg.window_fraction = parse_real("window_fraction", *v);
  if (auto v = take("impurity")) cfg.impurity = parse_bool("impurity", *v);
  if (auto v = take("sector")) cfg.sector = parse_sector(*v);
  if (auto v = take("include_base")) cfg.include_base = parse_bool("include_base", *v);
  if (auto v = take("hist_bins")) cfg.hist_bins = parse_uint("hist_bins", *v);
  if (auto v = take("hist_lo")) cfg.hist_lo = parse_real("hist_lo", *v);
  if (auto v = take("hist_hi")) cfg.hist_hi = parse_real("hist_hi", *v);
  if (auto v = take("exclude_fraction")) cfg.exclude_fraction = parse_real("exclude_fraction", *v);
  if (auto v = take("filter_degree")) cfg.filter.polynomial_degree = parse_uint("filter_degree", *v);
  if (auto v = take("filter_block")) cfg.filter.block_size = parse_uint("filter_block", *v);
  if (auto v = take("filter_damping")) cfg.filter.damping = parse_damping(*v);
  if (auto v = take("filter_tol")) cfg.filter.residual_tol = parse_real("filter_tol", *v);
  if (auto v = take("filter_max_iterations")) cfg.filter.max_iterations = parse_uint("filter_max_iterations", *v);
  if (auto v = take("verify_residuals")) cfg.verify_residuals = parse_uint("verify_residuals", *v);
  if (auto v = take("save_spectra")) cfg.save_spectra = parse_bool("save_spectra", *v);
  if (auto v = take("plot_description")) cfg.plot_description = parse_bool("plot_description", *v);

  for (const auto& [key, value] : kv)
    if (!used.count(key)) throw ValidationError("config: unknown key '" + key + "'");
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) { return parse_config(read_text_file(path)); }

}  // namespace swsyk
