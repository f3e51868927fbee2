#include "swsyk/graph.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <queue>
#include <sstream>
#include <unordered_set>

#include "swsyk/error.hpp"
#include "swsyk/io.hpp"
#include "swsyk/rng.hpp"

namespace swsyk {

namespace {

std::uint64_t edge_key(std::uint32_t a, std::uint32_t b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

std::string describe(const GraphSpec& s) {
  std::ostringstream os;
  os << "GraphSpec{n=" << s.n_vertices << ", k=" << s.k << ", p=" << format_double(s.p) << ", seed=" << s.seed << "}";
  return os.str();
}

}  // namespace

void GraphSpec::validate() const {
  if (n_vertices == 0 || n_vertices % 2 != 0)
    throw ValidationError("graph: n_vertices must be positive and even, got " + std::to_string(n_vertices));
  if (k < 1) throw ValidationError("graph: k must be >= 1");
  if (static_cast<std::uint64_t>(n_vertices) < 2ULL * k + 2)
    throw ValidationError("graph: need n_vertices >= 2k + 2 (n=" + std::to_string(n_vertices) +
                          ", k=" + std::to_string(k) + ")");
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("graph: p must lie in [0, 1]");
}

std::vector<std::uint32_t> Graph::degrees() const {
  std::vector<std::uint32_t> deg(n_vertices(), 0);
  for (const auto& e : edges) {
    ++deg[e.u];
    ++deg[e.v];
  }
  return deg;
}

Graph base_circulant(const GraphSpec& spec) {
  spec.validate();
  const std::uint32_t n = spec.n_vertices;
  Graph g;
  g.spec = spec;
  g.edges.reserve(static_cast<std::size_t>(spec.k) * n);
  for (std::uint32_t j = 1; j <= spec.k; ++j) {
    for (std::uint32_t i = 0; i < n; ++i) {
      const std::uint32_t a = i;
      const std::uint32_t b = (i + j) % n;
      g.edges.push_back({std::min(a, b), std::max(a, b)});
    }
  }
  return g;
}

std::vector<std::size_t> rewire_selection(const GraphSpec& spec, std::uint64_t attempt) {
  spec.validate();
  const std::size_t n_edges = static_cast<std::size_t>(spec.k) * spec.n_vertices;
  Rng decide(substream(substream(spec.seed, attempt), 0));
  std::vector<std::size_t> selected;
  for (std::size_t e = 0; e < n_edges; ++e) {
    if (decide.uniform() < spec.p) selected.push_back(e);
  }
  return selected;
}

Graph watts_strogatz(const GraphSpec& spec, const WattsStrogatzOptions& opts) {
  spec.validate();
  const Graph base = base_circulant(spec);
  if (spec.p == 0.0) return base;

  const std::uint32_t n = spec.n_vertices;
  for (std::uint32_t attempt = 0; attempt < opts.max_attempts; ++attempt) {
    Graph g = base;
    std::unordered_set<std::uint64_t> present;
    present.reserve(g.edges.size() * 2);
    for (const auto& e : g.edges) present.insert(edge_key(e.u, e.v));
    std::vector<std::uint32_t> deg = g.degrees();

    Rng redraw(substream(substream(spec.seed, attempt), 1));
    for (std::size_t idx : rewire_selection(spec, attempt)) {
      Edge& e = g.edges[idx];
      const std::uint32_t keep = e.u;
      if (deg[keep] >= n - 1) continue;  // no admissible partner
      std::uint32_t w;
      do {
        w = static_cast<std::uint32_t>(redraw.uniform_index(n));
      } while (w == keep || present.count(edge_key(keep, w)) != 0);
      present.erase(edge_key(e.u, e.v));
      --deg[e.v];
      present.insert(edge_key(keep, w));
      ++deg[w];
      e = {std::min(keep, w), std::max(keep, w)};
    }
    if (is_connected(g)) return g;
  }
  throw Error(ErrorCode::non_convergence,
              "graph: no connected graph after " + std::to_string(opts.max_attempts) + " attempts for " + describe(spec));
}

bool is_connected(std::uint32_t n_vertices, const std::vector<Edge>& edges) {
  if (n_vertices == 0) return true;
  std::vector<std::vector<std::uint32_t>> adj(n_vertices);
  for (const auto& e : edges) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  std::vector<char> seen(n_vertices, 0);
  std::queue<std::uint32_t> frontier;
  frontier.push(0);
  seen[0] = 1;
  std::uint32_t reached = 1;
  while (!frontier.empty()) {
    const auto x = frontier.front();
    frontier.pop();
    for (auto y : adj[x]) {
      if (!seen[y]) {
        seen[y] = 1;
        ++reached;
        frontier.push(y);
      }
    }
  }
  return reached == n_vertices;
}

void check_graph(const Graph& g) {
  g.spec.validate();
  std::unordered_set<std::uint64_t> seen;
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    const auto& e = g.edges[i];
    if (e.u >= e.v) throw ValidationError("graph: edge " + std::to_string(i) + " not normalized u < v");
    if (e.v >= g.n_vertices()) throw ValidationError("graph: edge " + std::to_string(i) + " endpoint out of range");
    if (!seen.insert(edge_key(e.u, e.v)).second)
      throw ValidationError("graph: duplicate edge at index " + std::to_string(i));
  }
  if (g.edges.size() != static_cast<std::size_t>(g.spec.k) * g.n_vertices())
    throw ValidationError("graph: edge count differs from k * n");
  if (!is_connected(g)) throw ValidationError("graph: not connected");
}

void write_graph(std::ostream& os, const Graph& g) {
  os << g.spec.n_vertices << ' ' << g.spec.k << ' ' << format_double(g.spec.p) << ' ' << g.spec.seed << '\n';
  for (std::size_t i = 0; i < g.edges.size(); ++i) os << i << ' ' << g.edges[i].u << ' ' << g.edges[i].v << '\n';
}

Graph read_graph(std::istream& is) {
  Graph g;
  std::string line;
  if (!std::getline(is, line)) throw IoError("graph file: missing header");
  {
    std::istringstream hs(line);
    if (!(hs >> g.spec.n_vertices >> g.spec.k >> g.spec.p >> g.spec.seed))
      throw IoError("graph file: malformed header '" + line + "'");
  }
  g.spec.validate();
  std::size_t expected = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::size_t idx;
    std::uint32_t u, v;
    if (!(ls >> idx >> u >> v)) throw IoError("graph file: malformed edge line '" + line + "'");
    if (idx != expected) throw IoError("graph file: edge indices must be consecutive from 0");
    if (u > v) std::swap(u, v);
    g.edges.push_back({u, v});
    ++expected;
  }
  check_graph(g);
  return g;
}

void save_graph(const std::string& path, const Graph& g) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open '" + path + "' for writing");
  write_graph(os, g);
  if (!os) throw IoError("write failed for '" + path + "'");
}

Graph load_graph(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open '" + path + "'");
  return read_graph(is);
}

}  // namespace swsyk
