#include "swsyk/couplings.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "swsyk/error.hpp"
#include "swsyk/io.hpp"
#include "swsyk/rng.hpp"

namespace swsyk {

namespace {

void check_lengths(const Graph& g, const CouplingSet& c) {
  if (c.size() != g.edge_count())
    throw ValidationError("couplings: " + std::to_string(c.size()) + " values for a graph with " +
                          std::to_string(g.edge_count()) + " edges");
}

}  // namespace

double coupling_variance(std::uint32_t n_vertices, std::size_t n_edges) {
  if (n_edges == 0) throw ValidationError("couplings: graph has no edges");
  return (static_cast<double>(n_vertices) - 1.0) / (2.0 * static_cast<double>(n_edges));
}

CouplingSet sample_couplings(const Graph& g, std::uint64_t seed) {
  CouplingSet c;
  c.seed = seed;
  c.sigma = std::sqrt(coupling_variance(g.n_vertices(), g.edge_count()));
  c.values.resize(g.edge_count());
  Rng rng(seed);
  for (auto& v : c.values) v = c.sigma * rng.normal();
  return c;
}

Eigen::MatrixXd coupling_matrix(const Graph& g, const CouplingSet& c) {
  check_lengths(g, c);
  const Eigen::Index n = g.n_vertices();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    a(g.edges[e].u, g.edges[e].v) = c.values[e];
    a(g.edges[e].v, g.edges[e].u) = -c.values[e];
  }
  return a;
}

Eigen::MatrixXcd single_particle_matrix(const Graph& g, const CouplingSet& c) {
  check_lengths(g, c);
  const Eigen::Index n = g.n_vertices();
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    h(g.edges[e].u, g.edges[e].v) = cplx(0.0, c.values[e]);
    h(g.edges[e].v, g.edges[e].u) = cplx(0.0, -c.values[e]);
  }
  return h;
}

void write_couplings(std::ostream& os, const CouplingSet& c) {
  os << c.size() << ' ' << c.seed << ' ' << format_double(c.sigma) << '\n';
  for (std::size_t i = 0; i < c.values.size(); ++i) os << i << ' ' << format_double(c.values[i]) << '\n';
}

CouplingSet read_couplings(std::istream& is) {
  CouplingSet c;
  std::string line;
  std::size_t count = 0;
  if (!std::getline(is, line)) throw IoError("coupling file: missing header");
  {
    std::istringstream hs(line);
    std::string sigma;
    if (!(hs >> count >> c.seed >> sigma)) throw IoError("coupling file: malformed header '" + line + "'");
    c.sigma = parse_double(sigma);
  }
  c.values.reserve(count);
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::size_t idx;
    std::string value;
    if (!(ls >> idx >> value)) throw IoError("coupling file: malformed line '" + line + "'");
    if (idx != c.values.size()) throw IoError("coupling file: indices must be consecutive from 0");
    c.values.push_back(parse_double(value));
  }
  if (c.values.size() != count) throw IoError("coupling file: header announces " + std::to_string(count) + " values");
  return c;
}

void save_couplings(const std::string& path, const CouplingSet& c) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open '" + path + "' for writing");
  write_couplings(os, c);
  if (!os) throw IoError("write failed for '" + path + "'");
}

CouplingSet load_couplings(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open '" + path + "'");
  return read_couplings(is);
}

}  // namespace swsyk
