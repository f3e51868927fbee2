#include <cmath>
#include <sstream>

#include "doctest.h"
#include "swsyk/couplings.hpp"
#include "swsyk/error.hpp"

using namespace swsyk;

TEST_CASE("variance normalization") {
  CHECK(coupling_variance(24, 48) == doctest::Approx(23.0 / 96.0).epsilon(1e-15));
  CHECK(coupling_variance(1000, 2000) == doctest::Approx(999.0 / 4000.0).epsilon(1e-15));
  CHECK_THROWS_AS(coupling_variance(24, 0), ValidationError);
}

TEST_CASE("sample variance matches (N-1)/(2 n_E)") {
  // 400 edges x 250 draws = 1e5 samples; relative sd of s^2 ~ sqrt(2/1e5) = 0.45%.
  const Graph g = base_circulant({200, 2, 0.0, 0});
  const double target = coupling_variance(200, g.edge_count());
  double sum = 0.0, sum2 = 0.0;
  std::size_t count = 0;
  for (std::uint64_t seed = 0; seed < 250; ++seed) {
    const auto c = sample_couplings(g, seed);
    CHECK(c.sigma == doctest::Approx(std::sqrt(target)));
    for (double v : c.values) {
      sum += v;
      sum2 += v * v;
      ++count;
    }
  }
  const double n = static_cast<double>(count);
  const double mean = sum / n;
  const double var = sum2 / n - mean * mean;
  CHECK(std::abs(mean) < 5 * std::sqrt(target / n));
  CHECK(std::abs(var / target - 1.0) < 5 * std::sqrt(2.0 / n));
}

TEST_CASE("couplings depend on (N, n_E, seed) only") {
  const Graph base = base_circulant({24, 2, 0.0, 0});
  const Graph rewired = watts_strogatz({24, 2, 0.8, 5});
  CHECK(sample_couplings(base, 42).values == sample_couplings(rewired, 42).values);
  CHECK(sample_couplings(base, 42).values != sample_couplings(base, 43).values);
}

TEST_CASE("coupling matrix is antisymmetric and indexed by edge") {
  const Graph g = watts_strogatz({16, 2, 0.5, 9});
  const auto c = sample_couplings(g, 1);
  const Eigen::MatrixXd a = coupling_matrix(g, c);
  CHECK((a + a.transpose()).cwiseAbs().maxCoeff() == 0.0);
  for (std::size_t i = 0; i < g.edge_count(); ++i) {
    const auto& e = g.edges[i];
    CHECK(a(e.u, e.v) == c.values[i]);
  }
  CHECK((a.array() != 0.0).count() == static_cast<Eigen::Index>(2 * g.edge_count()));
  const Eigen::MatrixXcd h = single_particle_matrix(g, c);
  CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((h.imag() - a).cwiseAbs().maxCoeff() == 0.0);
  CHECK(h.real().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("coupling file round trip is bit exact") {
  const Graph g = base_circulant({40, 3, 0.0, 0});
  const auto c = sample_couplings(g, 31337);
  std::stringstream ss;
  write_couplings(ss, c);
  const auto back = read_couplings(ss);
  CHECK(back.values == c.values);
  CHECK(back.seed == c.seed);
  CHECK(back.sigma == c.sigma);
}

TEST_CASE("mismatched coupling sets are rejected") {
  const Graph g = base_circulant({16, 2, 0.0, 0});
  CouplingSet c = sample_couplings(g, 1);
  c.values.pop_back();
  CHECK_THROWS_AS(coupling_matrix(g, c), ValidationError);
}

TEST_CASE("variance at N = 34, k = 2") { CHECK(coupling_variance(34, 68) == doctest::Approx(33.0 / 136.0)); }

TEST_CASE("uniform ring has a +- symmetric single-particle spectrum") {
  const Graph ring = base_circulant({4, 1, 0.0, 0});
  CouplingSet c;
  c.values.assign(4, 1.0);
  const Eigen::MatrixXcd h = single_particle_matrix(ring, c);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  const auto& e = es.eigenvalues();
  for (Eigen::Index i = 0; i < 4; ++i) CHECK(e(i) == doctest::Approx(-e(3 - i)).epsilon(1e-14));
  CouplingSet zero;
  zero.values.assign(4, 0.0);
  CHECK(single_particle_matrix(ring, zero).cwiseAbs().maxCoeff() == 0.0);
}
