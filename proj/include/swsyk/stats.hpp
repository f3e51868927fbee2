#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

#include "swsyk/spectrum.hpp"

namespace swsyk {

/// Mean level-spacing ratios of the standard ensembles.
struct ReferenceValues {
  static constexpr double poisson = 0.38;
  static constexpr double goe = 0.53;
  static constexpr double gue = 0.60;
  static constexpr double gse = 0.67;
};

/// r_i = min(s_i, s_{i+1}) / max(s_i, s_{i+1}) for consecutive spacings.
/// Spacings at or below `degeneracy_tol` times the spectral span count as
/// zero: a 0/0 ratio is set to 1 and counted in `degenerate_ratios`.
struct SpacingRatios {
  std::vector<double> values;
  std::size_t zero_spacings = 0;
  std::size_t degenerate_ratios = 0;
};

inline constexpr double kDefaultDegeneracyTol = 1e-12;

SpacingRatios r_ratios(std::span<const double> sorted_levels, double degeneracy_tol = kDefaultDegeneracyTol);

struct RStatistics {
  double mean_r = 0.0;
  std::size_t count = 0;
  double window_fraction = 0.0;
  std::size_t zero_spacings = 0;
  std::size_t degenerate_ratios = 0;
  std::vector<double> per_realization;
};

/// Rank-centred slice holding round(fraction * n) of the sorted levels.
std::span<const double> central_levels(std::span<const double> sorted_levels, double fraction);

/// Mean r over the central `fraction` of levels (by rank). Windowed spectra
/// are already restricted, so all of their levels are used.
RStatistics mean_r_central(const Spectrum& spectrum, double fraction = 0.2);
RStatistics mean_r_central(std::span<const double> sorted_levels, double fraction = 0.2);

/// Single-particle rule: positive half of a +-paired spectrum, dropping the
/// smallest `exclude_fraction` of |E| levels, then the central `fraction`.
RStatistics single_particle_r(std::span<const double> sorted_levels, double fraction = 0.2,
                              double exclude_fraction = 0.01);

/// GUE sample: H_ii ~ N(0, 1), H_ij = (a + i b) / sqrt(2) with a, b ~ N(0, 1),
/// so E|H_ij|^2 = 1 for all entries. Returns the sorted eigenvalues.
Spectrum gue_sample(std::size_t dim, std::uint64_t seed);

/// Sorted i.i.d. uniform levels on [0, 1): the Poisson reference.
std::vector<double> poisson_levels(std::size_t count, std::uint64_t seed);

struct Histogram {
  std::vector<double> edges;  // bin_count + 1
  std::vector<std::size_t> counts;
  std::size_t below = 0;
  std::size_t above = 0;
  std::size_t total() const;
};

/// Bins [lo, hi) ... [.., hi]: left-closed, with the last bin right-closed.
Histogram histogram(std::span<const double> values, std::size_t bin_count, double lo, double hi);

/// Sarle's bimodality coefficient (g^2 + 1) / (k + 3 (n-1)^2 / ((n-2)(n-3)))
/// with sample skewness g and excess kurtosis k. Values above 5/9 suggest
/// bimodality.
double bimodality_coefficient(std::span<const double> values);
inline constexpr double kBimodalityThreshold = 5.0 / 9.0;

/// Inverse participation ratio sum |psi_v|^4 of a normalized vector.
double ipr(const Eigen::VectorXcd& psi, double norm_tol = 1e-10);

double mean(std::span<const double> v);
/// Sample standard deviation (n - 1 denominator); 0 for fewer than two values.
double stddev(std::span<const double> v);

}  // namespace swsyk
