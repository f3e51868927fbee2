#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace swsyk {

struct GraphSpec {
  std::uint32_t n_vertices = 0;
  std::uint32_t k = 1;
  double p = 0.0;
  std::uint64_t seed = 0;

  /// Throws ValidationError unless n even, k >= 1, n >= 2k + 2, p in [0, 1].
  void validate() const;
};

struct Edge {
  std::uint32_t u = 0;  // u < v
  std::uint32_t v = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Undirected simple graph with a stable edge index. Vertex v hosts the
/// Majorana operator gamma^{v+1}.
struct Graph {
  GraphSpec spec;
  std::vector<Edge> edges;

  std::uint32_t n_vertices() const { return spec.n_vertices; }
  std::size_t edge_count() const { return edges.size(); }
  std::vector<std::uint32_t> degrees() const;
};

/// Circulant ring: for j = 1..k, for i = 0..n-1, edge (i, (i+j) mod n).
/// Seed-independent.
Graph base_circulant(const GraphSpec& spec);

/// Edge indices whose rewiring draw u_e satisfies u_e < p, for one attempt.
/// One uniform per edge, consumed in edge-index order, so the selection is
/// monotone in p for a fixed seed and attempt.
std::vector<std::size_t> rewire_selection(const GraphSpec& spec, std::uint64_t attempt = 0);

struct WattsStrogatzOptions {
  std::uint32_t max_attempts = 1000;
};

/// Watts-Strogatz rewiring of base_circulant(spec). Selected edges keep their
/// lower endpoint and redraw the other uniformly, rejecting self-loops and
/// duplicates. A disconnected result is discarded and the whole graph is
/// regenerated from the next substream of spec.seed.
Graph watts_strogatz(const GraphSpec& spec, const WattsStrogatzOptions& opts = {});

bool is_connected(std::uint32_t n_vertices, const std::vector<Edge>& edges);
inline bool is_connected(const Graph& g) { return is_connected(g.n_vertices(), g.edges); }

/// Checks the Graph invariants (ordering, no loops, no duplicates,
/// connectivity, n_E = k n). Throws ValidationError on the first violation.
void check_graph(const Graph& g);

// Text format: "N k p seed" then one "index u v" line per edge.
void write_graph(std::ostream& os, const Graph& g);
Graph read_graph(std::istream& is);
void save_graph(const std::string& path, const Graph& g);
Graph load_graph(const std::string& path);

}  // namespace swsyk
