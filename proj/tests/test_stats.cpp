#include <algorithm>
#include <cmath>
#include <numeric>

#include "doctest.h"
#include "swsyk/error.hpp"
#include "swsyk/rng.hpp"
#include "swsyk/stats.hpp"

using namespace swsyk;

TEST_CASE("r ratios of a hand-made sequence") {
  const std::vector<double> levels{0.0, 1.0, 3.0, 4.0, 8.0};
  const auto r = r_ratios(levels);
  // spacings 1, 2, 1, 4
  REQUIRE(r.values.size() == 3);
  CHECK(r.values[0] == 0.5);
  CHECK(r.values[1] == 0.5);
  CHECK(r.values[2] == 0.25);
  CHECK(r.zero_spacings == 0);
  CHECK_THROWS_AS(r_ratios(std::vector<double>{1.0, 2.0}), ValidationError);
}

TEST_CASE("degenerate spacings follow the declared convention") {
  const std::vector<double> levels{0.0, 1.0, 1.0, 1.0, 2.0};
  const auto r = r_ratios(levels);
  // spacings 1, 0, 0, 1 -> ratios 0, 1 (0/0, flagged), 0
  REQUIRE(r.values.size() == 3);
  CHECK(r.values[0] == 0.0);
  CHECK(r.values[1] == 1.0);
  CHECK(r.values[2] == 0.0);
  CHECK(r.zero_spacings == 2);
  CHECK(r.degenerate_ratios == 1);
}

TEST_CASE("central window keeps round(f n) levels by rank") {
  std::vector<double> levels(100);
  std::iota(levels.begin(), levels.end(), 0.0);
  const auto c = central_levels(levels, 0.2);
  REQUIRE(c.size() == 20);
  CHECK(c.front() == 40.0);
  CHECK(c.back() == 59.0);
  const auto st = mean_r_central(levels, 0.2);
  CHECK(st.count == 18);
  CHECK(st.mean_r == 1.0);
  CHECK_THROWS_AS(central_levels(levels, 0.0), ValidationError);
}

TEST_CASE("windowed spectra use every level") {
  Spectrum s;
  s.eigenvalues = {0.0, 1.0, 3.0, 4.0, 8.0};
  s.window = std::make_pair(-1.0, 9.0);
  const auto st = mean_r_central(s, 0.2);
  CHECK(st.count == 3);
  CHECK(st.mean_r == doctest::Approx(1.25 / 3.0));
}

TEST_CASE("single-particle rule takes the upper half and drops the smallest levels") {
  // +-paired spectrum: 200 levels, positive branch 1..100
  std::vector<double> levels;
  for (int i = 100; i >= 1; --i) levels.push_back(-static_cast<double>(i * i));
  for (int i = 1; i <= 100; ++i) levels.push_back(static_cast<double>(i * i));
  const auto st = single_particle_r(levels, 0.5, 0.1);
  // drop 10 -> 90 left -> central 45 levels starting at rank 22 of the remainder
  CHECK(st.count == 43);
  double expect = 0.0;
  for (int i = 11 + 22; i < 11 + 22 + 43; ++i) {
    const double s1 = static_cast<double>((i + 1) * (i + 1) - i * i);
    const double s2 = static_cast<double>((i + 2) * (i + 2) - (i + 1) * (i + 1));
    expect += std::min(s1, s2) / std::max(s1, s2);
  }
  CHECK(st.mean_r == doctest::Approx(expect / 43.0).epsilon(1e-13));
}

TEST_CASE("GUE and Poisson references") {
  // pooled over 30 samples of dim 200: about 1100 central ratios, sd near 0.008
  double sum = 0.0;
  std::size_t count = 0;
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const auto st = mean_r_central(gue_sample(200, seed), 0.2);
    sum += st.mean_r * static_cast<double>(st.count);
    count += st.count;
  }
  CHECK(std::abs(sum / static_cast<double>(count) - 0.5996) < 0.03);
  const auto poi = poisson_levels(200000, 2);
  const double r = mean_r_central(poi, 1.0).mean_r;
  // exact Poisson value 2 ln 2 - 1
  CHECK(std::abs(r - (2 * std::log(2.0) - 1)) < 0.005);
  CHECK(gue_sample(50, 3).eigenvalues == gue_sample(50, 3).eigenvalues);
}

TEST_CASE("histogram bins are left-closed with a closed last bin") {
  const std::vector<double> v{0.0, 0.1, 0.25, 0.5, 0.75, 1.0, -0.1, 1.1};
  const auto h = histogram(v, 4, 0.0, 1.0);
  REQUIRE(h.counts.size() == 4);
  CHECK(h.counts[0] == 2);
  CHECK(h.counts[1] == 1);
  CHECK(h.counts[2] == 1);
  CHECK(h.counts[3] == 2);
  CHECK(h.below == 1);
  CHECK(h.above == 1);
  CHECK(h.total() == 6);
  CHECK(h.total() + h.below + h.above == v.size());
  CHECK(h.edges.front() == 0.0);
  CHECK(h.edges.back() == 1.0);
}

TEST_CASE("bimodality coefficient separates one and two peaks") {
  Rng rng(4);
  std::vector<double> one, two;
  for (int i = 0; i < 400; ++i) {
    one.push_back(rng.normal());
    two.push_back((i % 2 ? 3.0 : -3.0) + 0.5 * rng.normal());
  }
  CHECK(bimodality_coefficient(one) < kBimodalityThreshold);
  CHECK(bimodality_coefficient(two) > kBimodalityThreshold);
}

TEST_CASE("inverse participation ratio limits") {
  Eigen::VectorXcd e = Eigen::VectorXcd::Zero(10);
  e(3) = 1.0;
  CHECK(ipr(e) == 1.0);
  Eigen::VectorXcd flat = Eigen::VectorXcd::Constant(10, std::complex<double>(0.0, 1.0 / std::sqrt(10.0)));
  CHECK(ipr(flat) == doctest::Approx(0.1));
  CHECK_THROWS_AS(ipr(2.0 * e), ValidationError);
}

TEST_CASE("mean and sample standard deviation") {
  const std::vector<double> v{1.0, 2.0, 3.0, 4.0};
  CHECK(mean(v) == 2.5);
  CHECK(stddev(v) == doctest::Approx(std::sqrt(5.0 / 3.0)));
}

TEST_CASE("small r examples and invariances") {
  CHECK(r_ratios(std::vector<double>{1, 2, 3}).values == std::vector<double>{1.0});
  CHECK(r_ratios(std::vector<double>{0, 1, 3}).values == std::vector<double>{0.5});
  const auto levels = poisson_levels(500, 9);
  const auto base = r_ratios(levels).values;
  std::vector<double> affine, reversed;
  for (double x : levels) affine.push_back(3.5 * x - 2.0);
  for (auto it = levels.rbegin(); it != levels.rend(); ++it) reversed.push_back(-*it);
  const auto a = r_ratios(affine).values;
  auto r = r_ratios(reversed).values;
  REQUIRE(a.size() == base.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - base[i]) < 1e-12);
  std::reverse(r.begin(), r.end());
  for (std::size_t i = 0; i < r.size(); ++i) CHECK(std::abs(r[i] - base[i]) < 1e-12);
  for (double x : base) {
    CHECK(x >= 0.0);
    CHECK(x <= 1.0);
  }
}

TEST_CASE("2x2 GUE spacing moments") {
  // s^2 = 2 chi^2_3 for this normalization: E[s^2] = 6, E[s] = 4 / sqrt(pi)
  const int samples = 20000;
  double m1 = 0.0, m2 = 0.0;
  for (int i = 0; i < samples; ++i) {
    const auto s = gue_sample(2, static_cast<std::uint64_t>(i));
    const double d = s.eigenvalues[1] - s.eigenvalues[0];
    m1 += d;
    m2 += d * d;
  }
  m1 /= samples;
  m2 /= samples;
  const double e1 = 4.0 / std::sqrt(std::acos(-1.0));
  const double var1 = 6.0 - e1 * e1;
  CHECK(std::abs(m1 - e1) < 4 * std::sqrt(var1 / samples));
  // Var[s^2] = 4 Var[chi^2_3] = 24
  CHECK(std::abs(m2 - 6.0) < 4 * std::sqrt(24.0 / samples));
}

TEST_CASE("histogram examples") {
  const auto h = histogram(std::vector<double>{0.1, 0.5, 0.9}, 2, 0.0, 1.0);
  CHECK(h.counts == std::vector<std::size_t>{1, 2});
  const auto c = histogram(std::vector<double>(10, 0.42), 5, 0.35, 0.70);
  CHECK(std::count(c.counts.begin(), c.counts.end(), 0u) == 4);
  CHECK(c.total() == 10);
  CHECK_THROWS_AS(histogram(std::vector<double>{}, 2, 0.0, 1.0), ValidationError);
}

TEST_CASE("Poisson Monte Carlo over 1e6 levels") {
  const auto poi = poisson_levels(1'000'000, 11);
  CHECK(std::abs(mean_r_central(poi, 1.0).mean_r - 0.386) < 0.002);
}
