#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "swsyk/graph.hpp"

namespace swsyk {

using cplx = std::complex<double>;

/// Gaussian edge couplings J_e, indexed by edge index (not endpoints).
struct CouplingSet {
  std::vector<double> values;
  double sigma = 1.0;
  std::uint64_t seed = 0;

  std::size_t size() const { return values.size(); }
};

/// sigma^2 = (N - 1) / (2 n_E).
double coupling_variance(std::uint32_t n_vertices, std::size_t n_edges);

/// i.i.d. N(0, sigma^2) draws consumed in edge-index order. Depends only on
/// (N, n_E, seed), so a rewired graph and its base circulant share values.
CouplingSet sample_couplings(const Graph& g, std::uint64_t seed);

/// Real antisymmetric A with A(u,v) = J_e, A(v,u) = -J_e for edge e = (u,v), u < v.
Eigen::MatrixXd coupling_matrix(const Graph& g, const CouplingSet& c);

/// Single-particle (Dyson) hopping matrix h = i A: h(u,v) = i J_e, h(v,u) = -i J_e.
Eigen::MatrixXcd single_particle_matrix(const Graph& g, const CouplingSet& c);

void write_couplings(std::ostream& os, const CouplingSet& c);
CouplingSet read_couplings(std::istream& is);
void save_couplings(const std::string& path, const CouplingSet& c);
CouplingSet load_couplings(const std::string& path);

}  // namespace swsyk
