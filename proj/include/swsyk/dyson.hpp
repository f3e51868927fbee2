#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <vector>

#include "swsyk/couplings.hpp"
#include "swsyk/graph.hpp"
#include "swsyk/stats.hpp"

namespace swsyk {

/// Orthogonal canonical form of a real antisymmetric A: the rows of
/// `rotation` are the new modes chi = O gamma, and
///   O A O^T = diag([[0, eps_1], [-eps_1, 0]], ..., [[0, eps_n], [-eps_n, 0]])
/// with eps ascending and non-negative.
struct BogoliubovFactorization {
  Eigen::MatrixXd rotation;
  std::vector<double> eps;
  /// Clusters of eps closer than the degeneracy tolerance (zero cluster included).
  std::size_t degenerate_clusters = 0;
};

struct BogoliubovOptions {
  double antisymmetry_tol = 1e-12;
  double degeneracy_tol = 1e-10;
};

/// Built from the Hermitian eigenproblem of iA: each eigenvector u of
/// eigenvalue -eps gives the rotation plane (sqrt2 Re u, sqrt2 Im u). Gauge:
/// u is rephased so its largest-magnitude entry (lowest index on ties) is
/// real positive. Near-zero modes are paired via a real Schur form of A
/// restricted to their invariant subspace.
BogoliubovFactorization bogoliubov(const Eigen::MatrixXd& a, const BogoliubovOptions& opts = {});

/// Canonical list entry of a fully antisymmetric rank-4 tensor (a<b<c<d, 0-based).
struct QuarticEntry {
  std::array<std::uint16_t, 4> modes{};
  double value = 0.0;
};

struct QuarticTensor {
  std::uint32_t n_modes = 0;
  std::array<int, 4> sites{1, 2, 3, 4};
  std::vector<QuarticEntry> entries;  // canonical order; |value| > keep_threshold
  double keep_threshold = 0.0;
  // Accumulated over every quadruple, stored or not.
  std::uint64_t quadruples = 0;
  double sum_sq = 0.0;
  double sum_quartic = 0.0;
  double max_abs = 0.0;
};

struct QuarticOptions {
  /// Entries with |T| <= keep_threshold are not stored (norms still exact).
  /// Negative keeps everything, zeros included.
  double keep_threshold = -1.0;
  unsigned workers = 1;
  double orthogonality_tol = 1e-10;
};

/// T_{abcd} = det of rows (a,b,c,d), columns `sites` of O: the coefficient of
/// chi^a chi^b chi^c chi^d in gamma^{s1} gamma^{s2} gamma^{s3} gamma^{s4}.
QuarticTensor rotate_quartic(const Eigen::MatrixXd& rotation, std::array<int, 4> sites = {1, 2, 3, 4},
                             const QuarticOptions& opts = {});

struct ExtensivityMeasures {
  std::size_t support_count = 0;
  double participation_ratio = 0.0;
  double tau = 1e-3;
};

/// support_count = #{|T| > tau max|T|}; participation_ratio = (sum T^2)^2 / sum T^4.
ExtensivityMeasures extensivity_measures(const QuarticTensor& t, double tau = 1e-3);

/// All N eigenvalues of the single-particle matrix iJ, ascending.
std::vector<double> single_particle_spectrum(const Graph& g, const CouplingSet& c);

struct SingleParticleOptions {
  double fraction = 0.2;
  double exclude_fraction = 0.01;
};

/// Dense diagonalization of iJ followed by the positive-branch r rule.
RStatistics single_particle_rstats(const Graph& g, const CouplingSet& c, const SingleParticleOptions& opts = {});

/// Mean IPR of the single-particle eigenvectors selected by the r rule.
double single_particle_mean_ipr(const Graph& g, const CouplingSet& c, const SingleParticleOptions& opts = {});

}  // namespace swsyk
