#include "swsyk/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "swsyk/eigensolve.hpp"
#include "swsyk/error.hpp"
#include "swsyk/rng.hpp"

namespace swsyk {

SpacingRatios r_ratios(std::span<const double> levels, double degeneracy_tol) {
  if (levels.size() < 3) throw ValidationError("r_ratios: need at least 3 levels, got " + std::to_string(levels.size()));
  const double span = levels.back() - levels.front();
  if (span < 0.0) throw ValidationError("r_ratios: levels must be sorted ascending");
  const double zero = degeneracy_tol * span;
  SpacingRatios out;
  out.values.reserve(levels.size() - 2);
  std::vector<double> s(levels.size() - 1);
  for (std::size_t i = 0; i + 1 < levels.size(); ++i) {
    s[i] = levels[i + 1] - levels[i];
    if (s[i] < 0.0) throw ValidationError("r_ratios: levels must be sorted ascending");
    if (s[i] <= zero) {
      s[i] = 0.0;
      ++out.zero_spacings;
    }
  }
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    const double lo = std::min(s[i], s[i + 1]);
    const double hi = std::max(s[i], s[i + 1]);
    if (hi == 0.0) {
      out.values.push_back(1.0);
      ++out.degenerate_ratios;
    } else {
      out.values.push_back(lo / hi);
    }
  }
  return out;
}

std::span<const double> central_levels(std::span<const double> levels, double fraction) {
  if (!(fraction > 0.0 && fraction <= 1.0)) throw ValidationError("central fraction must lie in (0, 1]");
  const auto n = levels.size();
  const auto keep = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
  const std::size_t start = (n - std::min(keep, n)) / 2;
  return levels.subspan(start, std::min(keep, n));
}

namespace {

RStatistics summarize(std::span<const double> levels, double fraction) {
  if (levels.size() < 3)
    throw ValidationError("mean_r: need at least 3 levels in the selected region, got " + std::to_string(levels.size()));
  const auto ratios = r_ratios(levels);
  RStatistics st;
  st.mean_r = mean(ratios.values);
  st.count = ratios.values.size();
  st.window_fraction = fraction;
  st.zero_spacings = ratios.zero_spacings;
  st.degenerate_ratios = ratios.degenerate_ratios;
  return st;
}

}  // namespace

RStatistics mean_r_central(std::span<const double> levels, double fraction) {
  return summarize(central_levels(levels, fraction), fraction);
}

RStatistics mean_r_central(const Spectrum& spectrum, double fraction) {
  if (spectrum.window) return summarize(spectrum.eigenvalues, fraction);
  return mean_r_central(std::span<const double>(spectrum.eigenvalues), fraction);
}

RStatistics single_particle_r(std::span<const double> levels, double fraction, double exclude_fraction) {
  if (!(exclude_fraction >= 0.0 && exclude_fraction < 1.0)) throw ValidationError("exclude_fraction must lie in [0, 1)");
  // +-paired spectrum: the upper half by rank is the non-negative branch.
  const auto positive = levels.subspan(levels.size() / 2);
  const auto drop = static_cast<std::size_t>(std::floor(exclude_fraction * static_cast<double>(positive.size())));
  return summarize(central_levels(positive.subspan(drop), fraction), fraction);
}

Spectrum gue_sample(std::size_t dim, std::uint64_t seed) {
  if (dim < 2) throw ValidationError("gue_sample: dim must be >= 2");
  Rng rng(seed);
  const auto n = static_cast<Eigen::Index>(dim);
  Eigen::MatrixXcd h(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    h(i, i) = rng.normal();
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double re = rng.normal();
      const double im = rng.normal();
      h(i, j) = cplx(re, im) / std::sqrt(2.0);
      h(j, i) = std::conj(h(i, j));
    }
  }
  DenseOptions opts;
  opts.residual_samples = 0;
  Spectrum s = dense_eigh(h, opts);
  s.metadata.emplace_back("ensemble", "gue");
  s.metadata.emplace_back("seed", std::to_string(seed));
  return s;
}

std::vector<double> poisson_levels(std::size_t count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> levels(count);
  for (auto& x : levels) x = rng.uniform();
  std::sort(levels.begin(), levels.end());
  return levels;
}

std::size_t Histogram::total() const { return std::accumulate(counts.begin(), counts.end(), std::size_t{0}); }

Histogram histogram(std::span<const double> values, std::size_t bin_count, double lo, double hi) {
  if (values.empty()) throw ValidationError("histogram: empty input");
  if (bin_count < 1) throw ValidationError("histogram: bin_count must be >= 1");
  if (!(std::isfinite(lo) && std::isfinite(hi) && lo < hi)) throw ValidationError("histogram: range must be finite with lo < hi");
  Histogram hist;
  hist.edges.resize(bin_count + 1);
  for (std::size_t i = 0; i <= bin_count; ++i)
    hist.edges[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(bin_count);
  hist.counts.assign(bin_count, 0);
  for (double v : values) {
    if (v < lo) {
      ++hist.below;
    } else if (v > hi) {
      ++hist.above;
    } else {
      // Locate by edges so bins are exactly [e_i, e_{i+1}).
      auto it = std::upper_bound(hist.edges.begin(), hist.edges.end(), v);
      auto bin = static_cast<std::size_t>(it - hist.edges.begin()) - 1;
      ++hist.counts[std::min(bin, bin_count - 1)];
    }
  }
  return hist;
}

double mean(std::span<const double> v) {
  if (v.empty()) throw ValidationError("mean of empty sequence");
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double stddev(std::span<const double> v) {
  if (v.size() < 2) return 0.0;
  const double m = mean(v);
  double acc = 0.0;
  for (double x : v) acc += (x - m) * (x - m);
  return std::sqrt(acc / static_cast<double>(v.size() - 1));
}

double bimodality_coefficient(std::span<const double> v) {
  const auto n = static_cast<double>(v.size());
  if (v.size() < 4) throw ValidationError("bimodality_coefficient: need at least 4 values");
  const double m = mean(v);
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double x : v) {
    const double d = x - m;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  if (m2 == 0.0) return 0.0;
  const double g1 = m3 / std::pow(m2, 1.5);
  const double g2 = m4 / (m2 * m2) - 3.0;
  // Bias-corrected skewness and excess kurtosis.
  const double skew = g1 * std::sqrt(n * (n - 1.0)) / (n - 2.0);
  const double kurt = (n - 1.0) / ((n - 2.0) * (n - 3.0)) * ((n + 1.0) * g2 + 6.0);
  return (skew * skew + 1.0) / (kurt + 3.0 * (n - 1.0) * (n - 1.0) / ((n - 2.0) * (n - 3.0)));
}

double ipr(const Eigen::VectorXcd& psi, double norm_tol) {
  const double norm2 = psi.squaredNorm();
  if (std::abs(norm2 - 1.0) > norm_tol) throw ValidationError("ipr: vector is not normalized");
  double acc = 0.0;
  for (Eigen::Index i = 0; i < psi.size(); ++i) acc += std::norm(psi(i)) * std::norm(psi(i));
  return acc;
}

}  // namespace swsyk
