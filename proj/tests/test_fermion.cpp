#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>

#include "doctest.h"
#include "swsyk/eigensolve.hpp"
#include "swsyk/error.hpp"
#include "swsyk/hamiltonian.hpp"
#include "swsyk/pauli.hpp"
#include "swsyk/rng.hpp"

using namespace swsyk;
using Mat = Eigen::MatrixXcd;

namespace {

// Independent Jordan-Wigner construction from Kronecker products. Qubit q
// is bit q-1 of the basis index, so it is the (n-q)-th factor from the left.
Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Mat pauli(char c) {
  Mat m(2, 2);
  const cplx i(0, 1);
  switch (c) {
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, -i, i, 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: m << 1, 0, 0, 1;
  }
  return m;
}

Mat gamma_oracle(int index, int n_qubits) {
  const int q = (index + 1) / 2;
  Mat out = Mat::Identity(1, 1);
  for (int f = n_qubits; f >= 1; --f) {
    char c = 'I';
    if (f < q) c = 'Z';
    if (f == q) c = index % 2 == 1 ? 'X' : 'Y';
    out = kron(out, pauli(c));
  }
  return out / std::sqrt(2.0);
}

Mat full_hamiltonian_oracle(const Graph& g, const CouplingSet& c, bool impurity) {
  const int n = static_cast<int>(g.n_vertices());
  const int nq = n / 2;
  std::vector<Mat> gam;
  for (int i = 1; i <= n; ++i) gam.push_back(gamma_oracle(i, nq));
  const Eigen::Index dim = Eigen::Index{1} << nq;
  Mat h = Mat::Zero(dim, dim);
  for (std::size_t e = 0; e < g.edge_count(); ++e)
    h += cplx(0, -c.values[e]) * gam[g.edges[e].u] * gam[g.edges[e].v];
  if (impurity) h += gam[0] * gam[1] * gam[2] * gam[3];
  return h;
}

Mat restrict_to_sector(const Mat& full, Sector s) {
  std::vector<Eigen::Index> states;
  for (Eigen::Index b = 0; b < full.rows(); ++b) {
    const bool odd = std::popcount(static_cast<std::uint64_t>(b)) & 1;
    if (odd == (s == Sector::odd)) states.push_back(b);
  }
  const auto d = static_cast<Eigen::Index>(states.size());
  Mat out(d, d);
  for (Eigen::Index r = 0; r < d; ++r)
    for (Eigen::Index col = 0; col < d; ++col) out(r, col) = full(states[r], states[col]);
  return out;
}

std::vector<double> sorted_eigs(const Mat& h) {
  Eigen::SelfAdjointEigenSolver<Mat> es(h, Eigen::EigenvaluesOnly);
  return {es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size()};
}

}  // namespace

TEST_CASE("Majorana matrices match the Kronecker construction") {
  for (int nq : {1, 3, 6}) {
    for (int i = 1; i <= 2 * nq; ++i) {
      const Mat lib = term_matrix(majorana(i), nq);
      CHECK((lib - gamma_oracle(i, nq)).cwiseAbs().maxCoeff() < 1e-15);
    }
  }
}

TEST_CASE("anticommutation is exact for N = 12") {
  // gamma^i = c P_i with P_i an integer Pauli string and c = 1/sqrt2, so
  // {gamma^i, gamma^j} = c^2 {P_i, P_j} = delta_ij I iff {P_i, P_j} = 2 delta_ij I.
  const int nq = 6;
  const Mat id = Mat::Identity(64, 64);
  for (int i = 1; i <= 12; ++i) {
    CHECK(majorana(i).coefficient == cplx(1.0 / std::sqrt(2.0), 0.0));
    PauliTerm ti = majorana(i);
    ti.coefficient = 1.0;
    const Mat pi = term_matrix(ti, nq);
    CHECK((pi - pi.adjoint()).cwiseAbs().maxCoeff() == 0.0);
    for (int j = 1; j <= 12; ++j) {
      PauliTerm tj = majorana(j);
      tj.coefficient = 1.0;
      const Mat pj = term_matrix(tj, nq);
      const Mat ac = pi * pj + pj * pi;
      const Mat expect = (i == j) ? Mat(2.0 * id) : Mat(Mat::Zero(64, 64));
      CHECK((ac - expect).cwiseAbs().maxCoeff() == 0.0);
    }
  }
}

TEST_CASE("Pauli multiplication tracks the phase") {
  Rng rng(5);
  const int nq = 4;
  for (int trial = 0; trial < 200; ++trial) {
    PauliTerm a{rng.uniform_index(16), rng.uniform_index(16), cplx(rng.normal(), rng.normal())};
    PauliTerm b{rng.uniform_index(16), rng.uniform_index(16), cplx(rng.normal(), rng.normal())};
    const Mat prod = term_matrix(a, nq) * term_matrix(b, nq);
    CHECK((term_matrix(multiply(a, b), nq) - prod).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("apply_phase agrees with the explicit string matrix") {
  const int nq = 4;
  for (std::uint64_t x = 0; x < 16; ++x)
    for (std::uint64_t z = 0; z < 16; ++z) {
      const Mat m = pauli_string_matrix(x, z, nq);
      for (std::uint64_t b = 0; b < 16; ++b) {
        CHECK(m(static_cast<Eigen::Index>(b ^ x), static_cast<Eigen::Index>(b)) == apply_phase(x, z, b));
      }
    }
}

TEST_CASE("edge terms and the impurity have the expected Pauli form") {
  const PauliTerm t = majorana_term(1, 2, 0.7);
  CHECK(t.x_mask == 0);
  CHECK(t.z_mask == 1);
  CHECK(t.coefficient == cplx(0.35, 0.0));
  const PauliTerm imp = impurity_term(8);
  CHECK(imp.x_mask == 0);
  CHECK(imp.z_mask == 3);
  CHECK(imp.coefficient == cplx(-0.25, 0.0));
  const Mat oracle = gamma_oracle(1, 4) * gamma_oracle(2, 4) * gamma_oracle(3, 4) * gamma_oracle(4, 4);
  CHECK((term_matrix(imp, 4) - oracle).cwiseAbs().maxCoeff() < 1e-15);
  CHECK_THROWS_AS(majorana_term(3, 2, 1.0), ValidationError);
  CHECK_THROWS_AS(impurity_term(2), ValidationError);
  for (int i = 1; i <= 10; ++i)
    for (int j = i + 1; j <= 10; ++j) CHECK(preserves_parity(majorana_term(i, j, 1.0)));
  CHECK_FALSE(preserves_parity(majorana(3)));
}

TEST_CASE("sector basis is sorted with the requested parity") {
  for (Sector s : {Sector::even, Sector::odd}) {
    SectorBasis basis{5, s};
    std::uint64_t prev = 0;
    for (std::uint64_t r = 0; r < basis.dimension(); ++r) {
      const auto st = basis.state(r);
      CHECK(((std::popcount(st) & 1) == (s == Sector::odd ? 1 : 0)));
      CHECK(SectorBasis::row(st) == r);
      if (r) CHECK(st > prev);
      prev = st;
    }
  }
}

TEST_CASE("sector matrices equal the restricted Kronecker Hamiltonian") {
  for (std::uint32_t n : {8u, 12u}) {
    for (double p : {0.0, 0.7}) {
      const Graph g = watts_strogatz({n, 2, p, 3});
      const auto c = sample_couplings(g, 8);
      const Mat full = full_hamiltonian_oracle(g, c, true);
      for (Sector s : {Sector::even, Sector::odd}) {
        const auto h = assemble_hamiltonian(g, c, true, s);
        CHECK(h.dimension() == (std::size_t{1} << (n / 2 - 1)));
        CHECK((h.to_dense() - restrict_to_sector(full, s)).cwiseAbs().maxCoeff() < 1e-14);
        CHECK(is_structurally_hermitian(h));
      }
      // parity blocks decouple
      const Mat even = restrict_to_sector(full, Sector::even);
      const Mat odd = restrict_to_sector(full, Sector::odd);
      auto all = sorted_eigs(full);
      auto parts = sorted_eigs(even);
      const auto o = sorted_eigs(odd);
      parts.insert(parts.end(), o.begin(), o.end());
      std::sort(parts.begin(), parts.end());
      for (std::size_t i = 0; i < all.size(); ++i) CHECK(std::abs(all[i] - parts[i]) < 1e-12);
    }
  }
}

TEST_CASE("CSR rows hold one entry per distinct flip pattern") {
  const Graph g = watts_strogatz({16, 2, 0.5, 4});
  const auto c = sample_couplings(g, 4);
  const auto h = assemble_hamiltonian(g, c, true, Sector::even);
  const auto groups = group_terms(hamiltonian_terms(g, c, true));
  CHECK(h.max_row_nnz() <= groups.size());
  for (std::size_t r = 0; r < h.dimension(); ++r) {
    for (auto k = h.row_ptr()[r] + 1; k < h.row_ptr()[r + 1]; ++k) CHECK(h.col_idx()[k - 1] < h.col_idx()[k]);
  }
}

TEST_CASE("threaded assembly and matvec are bit identical") {
  const Graph g = watts_strogatz({20, 2, 0.6, 21});
  const auto c = sample_couplings(g, 22);
  const auto a = assemble_hamiltonian(g, c, true, Sector::odd, {1});
  auto b = assemble_hamiltonian(g, c, true, Sector::odd, {3});
  CHECK(a.row_ptr() == b.row_ptr());
  CHECK(a.col_idx() == b.col_idx());
  CHECK(a.values() == b.values());
  Rng rng(1);
  std::vector<cplx> x(a.dimension()), y1(a.dimension()), y2(a.dimension());
  for (auto& v : x) v = cplx(rng.normal(), rng.normal());
  a.apply(x, y1);
  b.set_workers(3);
  b.apply(x, y2);
  CHECK(y1 == y2);
}

TEST_CASE("matrix-free operator matches CSR") {
  const Graph g = watts_strogatz({18, 3, 0.4, 2});
  const auto c = sample_couplings(g, 3);
  const auto csr = assemble_hamiltonian(g, c, true, Sector::even);
  HamiltonianInfo info;
  info.n_majoranas = 18;
  PauliSumOperator mf(info, group_terms(hamiltonian_terms(g, c, true)));
  REQUIRE(mf.dimension() == csr.dimension());
  Rng rng(9);
  std::vector<cplx> x(csr.dimension()), y1(csr.dimension()), y2(csr.dimension());
  for (auto& v : x) v = cplx(rng.normal(), rng.normal());
  csr.apply(x, y1);
  mf.apply(x, y2);
  double diff = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) diff = std::max(diff, std::abs(y1[i] - y2[i]));
  CHECK(diff < 1e-12);
  CHECK(mf.norm_bound() >= dense_eigh(csr, {std::size_t{1} << 14, 0, 1e-10}).eigenvalues.back());
}

TEST_CASE("quadratic spectra match the free-fermion level sums") {
  for (std::uint32_t n : {8u, 10u, 12u, 14u, 16u}) {
    const Graph g = watts_strogatz({n, 2, 0.5, n});
    const auto c = sample_couplings(g, 100 + n);
    const Mat hsp = single_particle_matrix(g, c);
    for (Sector s : {Sector::even, Sector::odd}) {
      const auto h = assemble_hamiltonian(g, c, false, s);
      const auto dense = dense_eigh(h, {std::size_t{1} << 14, 0, 1e-10}).eigenvalues;
      const auto oracle = quadratic_spectrum_oracle(hsp, s);
      REQUIRE(oracle.size() == dense.size());
      double diff = 0.0;
      for (std::size_t i = 0; i < dense.size(); ++i) diff = std::max(diff, std::abs(dense[i] - oracle[i]));
      CHECK(diff < 1e-10);
    }
  }
}

TEST_CASE("two-Majorana oracle: levels +-J/2 split across sectors") {
  Mat h = Mat::Zero(2, 2);
  h(0, 1) = cplx(0, 0.8);
  h(1, 0) = cplx(0, -0.8);
  const auto even = quadratic_spectrum_oracle(h, Sector::even);
  const auto odd = quadratic_spectrum_oracle(h, Sector::odd);
  REQUIRE(even.size() == 1);
  REQUIRE(odd.size() == 1);
  // -iJ g1 g2 = (J/2) Z: |0> (even) has +J/2, |1> (odd) has -J/2.
  CHECK(even[0] == doctest::Approx(0.4));
  CHECK(odd[0] == doctest::Approx(-0.4));
  const auto both = quadratic_spectrum_oracle(h);
  CHECK(both.size() == 2);
}

TEST_CASE("impurity alone gives +-1/4 with equal multiplicity") {
  const Graph g = base_circulant({12, 2, 0.0, 0});
  CouplingSet zero;
  zero.values.assign(g.edge_count(), 0.0);
  for (Sector s : {Sector::even, Sector::odd}) {
    const auto h = assemble_hamiltonian(g, zero, true, s);
    const auto eig = dense_eigh(h).eigenvalues;
    std::size_t minus = 0, plus = 0;
    for (double e : eig) {
      if (std::abs(e + 0.25) <= 1e-12) ++minus;
      if (std::abs(e - 0.25) <= 1e-12) ++plus;
    }
    CHECK(minus == eig.size() / 2);
    CHECK(plus == eig.size() / 2);
  }
}

TEST_CASE("binary dump round trip") {
  const Graph g = watts_strogatz({14, 2, 0.3, 5});
  const auto c = sample_couplings(g, 6);
  const auto h = assemble_hamiltonian(g, c, true, Sector::odd);
  const auto path = (std::filesystem::temp_directory_path() / "swsyk_dump_test.bin").string();
  save_hamiltonian(path, h);
  const auto back = load_hamiltonian(path);
  CHECK(back.row_ptr() == h.row_ptr());
  CHECK(back.col_idx() == h.col_idx());
  CHECK(back.values() == h.values());
  CHECK(back.info().sector == Sector::odd);
  CHECK(back.info().coupling_seed == 6);
  CHECK(back.info().n_majoranas == 14);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(load_hamiltonian(path), IoError);
}

TEST_CASE("parity-breaking terms are rejected") {
  std::vector<PauliTerm> terms{majorana(1)};
  CHECK_THROWS_AS(group_terms(terms), ValidationError);
}

TEST_CASE("pair term on Majoranas 1 and 3 is (J/2) Y1 X2") {
  const Mat term = term_matrix(majorana_term(1, 3, 0.6), 2);
  // qubit 1 is the last Kronecker factor
  const Mat y1x2 = kron(pauli('X'), pauli('Y'));
  const Mat oracle = cplx(0, -0.6) * gamma_oracle(1, 2) * gamma_oracle(3, 2);
  CHECK((term - oracle).cwiseAbs().maxCoeff() < 1e-15);
  const bool plus = (term - 0.3 * y1x2).cwiseAbs().maxCoeff() < 1e-15;
  const bool minus = (term + 0.3 * y1x2).cwiseAbs().maxCoeff() < 1e-15;
  CHECK((plus || minus));
}

TEST_CASE("impurity squares to I/16 and commutes with distant pair terms") {
  const Mat imp = term_matrix(impurity_term(12), 6);
  CHECK((imp * imp - Mat::Identity(64, 64) / 16.0).cwiseAbs().maxCoeff() == 0.0);
  for (int i = 5; i <= 12; ++i)
    for (int j = i + 1; j <= 12; ++j) {
      const Mat t = term_matrix(majorana_term(i, j, 1.0), 6);
      CHECK((imp * t - t * imp).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("single edge on four Majoranas") {
  const std::vector<PauliTerm> terms{majorana_term(1, 2, 1.0)};
  const auto h = assemble_terms(4, terms, Sector::even);
  const Mat d = h.to_dense();
  CHECK(d(0, 0) == cplx(0.5, 0));
  CHECK(d(1, 1) == cplx(-0.5, 0));
  CHECK(std::abs(d(0, 1)) == 0.0);
  Mat zero = Mat::Zero(4, 4);
  for (double e : quadratic_spectrum_oracle(zero)) CHECK(e == 0.0);
}

TEST_CASE("N = 34 rows hold at most 69 entries") {
  const Graph g = watts_strogatz({34, 2, 0.9, 3});
  const auto h = assemble_hamiltonian(g, sample_couplings(g, 4), true, Sector::even);
  CHECK(h.dimension() == 65536);
  CHECK(h.max_row_nnz() <= 69);
}
