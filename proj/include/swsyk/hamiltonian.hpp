#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "swsyk/couplings.hpp"
#include "swsyk/graph.hpp"
#include "swsyk/pauli.hpp"

namespace swsyk {

enum class Sector { even, odd };

std::string to_string(Sector s);
Sector parse_sector(const std::string& name);

/// Hermitian operator with a matvec. Implementations must be deterministic
/// and thread-compatible (apply may be called concurrently on const objects).
class LinearOperator {
 public:
  virtual ~LinearOperator() = default;
  virtual std::size_t dimension() const = 0;
  /// y = A x.
  virtual void apply(std::span<const cplx> x, std::span<cplx> y) const = 0;
  /// Y = A X for a block of column vectors.
  virtual void apply_block(const Eigen::MatrixXcd& x, Eigen::MatrixXcd& y) const;
  /// Upper bound on the spectral radius (e.g. a Gershgorin estimate).
  virtual double norm_bound() const = 0;
};

/// Dense Hermitian matrix wrapped as an operator; mostly for tests.
class DenseOperator final : public LinearOperator {
 public:
  explicit DenseOperator(Eigen::MatrixXcd m);
  std::size_t dimension() const override { return static_cast<std::size_t>(m_.rows()); }
  void apply(std::span<const cplx> x, std::span<cplx> y) const override;
  void apply_block(const Eigen::MatrixXcd& x, Eigen::MatrixXcd& y) const override;
  double norm_bound() const override;
  const Eigen::MatrixXcd& matrix() const { return m_; }

 private:
  Eigen::MatrixXcd m_;
};

/// Where an assembled Hamiltonian came from; carried into dumps and spectra.
struct HamiltonianInfo {
  std::uint32_t n_majoranas = 0;
  std::uint32_t k = 0;
  double p = 0.0;
  std::uint64_t graph_seed = 0;
  std::uint64_t coupling_seed = 0;
  Sector sector = Sector::even;
  bool impurity = true;
};

/// Basis of a parity sector: states with fixed popcount parity, sorted by
/// integer value. Row r holds state (r << 1) | (parity(r) xor sector bit).
struct SectorBasis {
  int n_qubits = 0;
  Sector sector = Sector::even;

  std::uint64_t dimension() const { return std::uint64_t{1} << (n_qubits - 1); }
  std::uint64_t state(std::uint64_t row) const {
    const std::uint64_t bit = static_cast<std::uint64_t>(popcount(row) & 1) ^ (sector == Sector::odd ? 1u : 0u);
    return (row << 1) | bit;
  }
  static std::uint64_t row(std::uint64_t state) { return state >> 1; }
};

/// Terms sharing one x_mask; each z entry has the i^{|x&z|} phase folded in.
struct PauliGroup {
  std::uint64_t x_mask = 0;
  std::vector<std::uint64_t> z_masks;
  std::vector<cplx> weights;
};

/// Term list of the Hamiltonian: -i sum_e J_e gamma^{u+1} gamma^{v+1} (+ impurity).
std::vector<PauliTerm> hamiltonian_terms(const Graph& g, const CouplingSet& c, bool impurity);

/// Groups terms by x_mask (ascending), validating parity conservation.
std::vector<PauliGroup> group_terms(std::span<const PauliTerm> terms);

/// Compressed-sparse-row Hermitian matrix restricted to one parity sector.
class SparseHamiltonian final : public LinearOperator {
 public:
  SparseHamiltonian() = default;
  SparseHamiltonian(HamiltonianInfo info, std::vector<std::uint64_t> row_ptr, std::vector<std::uint64_t> col_idx,
                    std::vector<cplx> values);

  std::size_t dimension() const override { return row_ptr_.empty() ? 0 : row_ptr_.size() - 1; }
  std::size_t nnz() const { return values_.size(); }
  void apply(std::span<const cplx> x, std::span<cplx> y) const override;
  void apply_block(const Eigen::MatrixXcd& x, Eigen::MatrixXcd& y) const override;
  double norm_bound() const override;

  /// Row partitions processed by this many threads in apply (default 1).
  void set_workers(unsigned workers) { workers_ = workers == 0 ? 1 : workers; }

  const HamiltonianInfo& info() const { return info_; }
  const std::vector<std::uint64_t>& row_ptr() const { return row_ptr_; }
  const std::vector<std::uint64_t>& col_idx() const { return col_idx_; }
  const std::vector<cplx>& values() const { return values_; }
  std::size_t max_row_nnz() const;

  Eigen::MatrixXcd to_dense() const;

 private:
  HamiltonianInfo info_;
  std::vector<std::uint64_t> row_ptr_;
  std::vector<std::uint64_t> col_idx_;
  std::vector<cplx> values_;
  unsigned workers_ = 1;
};

/// Matrix-free sector operator evaluating the Pauli groups on the fly.
class PauliSumOperator final : public LinearOperator {
 public:
  PauliSumOperator(HamiltonianInfo info, std::vector<PauliGroup> groups);
  std::size_t dimension() const override { return static_cast<std::size_t>(basis_.dimension()); }
  void apply(std::span<const cplx> x, std::span<cplx> y) const override;
  double norm_bound() const override;
  void set_workers(unsigned workers) { workers_ = workers == 0 ? 1 : workers; }
  const HamiltonianInfo& info() const { return info_; }

 private:
  HamiltonianInfo info_;
  SectorBasis basis_;
  std::vector<PauliGroup> groups_;
  unsigned workers_ = 1;
};

struct AssemblyOptions {
  unsigned workers = 1;
};

/// Sum of all edge terms plus (optionally) the impurity, restricted to the
/// parity sector, in CSR form with columns ascending in each row.
SparseHamiltonian assemble_hamiltonian(const Graph& g, const CouplingSet& c, bool impurity, Sector sector,
                                       const AssemblyOptions& opts = {});

/// Lower-level assembly from an explicit term list over n_majoranas sites.
SparseHamiltonian assemble_terms(std::uint32_t n_majoranas, std::span<const PauliTerm> terms, Sector sector,
                                 const HamiltonianInfo& info = {}, const AssemblyOptions& opts = {});

/// Largest N stored as an explicit matrix by make_operator.
inline constexpr std::uint32_t kMaxExplicitMajoranas = 34;

/// CSR for N <= 34, matrix-free above.
std::unique_ptr<LinearOperator> make_operator(const Graph& g, const CouplingSet& c, bool impurity, Sector sector,
                                              const AssemblyOptions& opts = {});

/// Exact structural Hermiticity check: every (r, c, v) has (c, r, conj v).
bool is_structurally_hermitian(const SparseHamiltonian& h);

/// Binary CSR dump (little-endian): magic "SWSYKCSR", u64 version, then u64
/// N, k; f64 p; u64 graph_seed, coupling_seed, sector (0 even, 1 odd),
/// impurity, D, nnz; u64 row_ptr[D+1]; u64 col[nnz]; (f64 re, f64 im)[nnz].
void save_hamiltonian(const std::string& path, const SparseHamiltonian& h);
SparseHamiltonian load_hamiltonian(const std::string& path);

/// Exact free-fermion many-body spectrum: all sums sum_k sigma_k eps_k / 2
/// over sign patterns in the sector, where the parity of a pattern is
/// det(O) * prod sigma_k (O the Bogoliubov rotation). N <= 24.
/// h is the single-particle matrix i*A (see single_particle_matrix).
std::vector<double> quadratic_spectrum_oracle(const Eigen::MatrixXcd& h, Sector sector);
/// Same over both sectors (2^{N/2} levels).
std::vector<double> quadratic_spectrum_oracle(const Eigen::MatrixXcd& h);

inline constexpr std::uint32_t kMaxOracleMajoranas = 24;

}  // namespace swsyk
