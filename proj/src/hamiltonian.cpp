#include "swsyk/hamiltonian.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>

#include "swsyk/dyson.hpp"
#include "swsyk/error.hpp"
#include "swsyk/parallel.hpp"

namespace swsyk {

std::string to_string(Sector s) { return s == Sector::even ? "even" : "odd"; }

Sector parse_sector(const std::string& name) {
  if (name == "even") return Sector::even;
  if (name == "odd") return Sector::odd;
  throw ValidationError("unknown parity sector '" + name + "' (expected even|odd)");
}

void LinearOperator::apply_block(const Eigen::MatrixXcd& x, Eigen::MatrixXcd& y) const {
  y.resize(x.rows(), x.cols());
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    apply(std::span<const cplx>(x.col(j).data(), static_cast<std::size_t>(x.rows())),
          std::span<cplx>(y.col(j).data(), static_cast<std::size_t>(y.rows())));
  }
}

// ---------------------------------------------------------------------------

DenseOperator::DenseOperator(Eigen::MatrixXcd m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) throw ValidationError("dense operator must be square");
}

void DenseOperator::apply(std::span<const cplx> x, std::span<cplx> y) const {
  Eigen::Map<const Eigen::VectorXcd> xv(x.data(), m_.cols());
  Eigen::Map<Eigen::VectorXcd> yv(y.data(), m_.rows());
  yv.noalias() = m_ * xv;
}

void DenseOperator::apply_block(const Eigen::MatrixXcd& x, Eigen::MatrixXcd& y) const { y.noalias() = m_ * x; }

double DenseOperator::norm_bound() const {
  return m_.rows() == 0 ? 0.0 : m_.cwiseAbs().rowwise().sum().maxCoeff();
}

// ---------------------------------------------------------------------------

std::vector<PauliTerm> hamiltonian_terms(const Graph& g, const CouplingSet& c, bool impurity) {
  if (c.size() != g.edge_count()) throw ValidationError("hamiltonian: coupling count does not match edge count");
  std::vector<PauliTerm> terms;
  terms.reserve(g.edge_count() + 1);
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    if (c.values[e] == 0.0) continue;
    terms.push_back(majorana_term(static_cast<int>(g.edges[e].u) + 1, static_cast<int>(g.edges[e].v) + 1, c.values[e]));
  }
  if (impurity) terms.push_back(impurity_term(static_cast<int>(g.n_vertices())));
  return terms;
}

std::vector<PauliGroup> group_terms(std::span<const PauliTerm> terms) {
  std::map<std::uint64_t, PauliGroup> by_x;
  for (const auto& t : terms) {
    if (!preserves_parity(t)) throw ValidationError("hamiltonian: term with odd x popcount breaks fermion parity");
    auto& grp = by_x[t.x_mask];
    grp.x_mask = t.x_mask;
    grp.z_masks.push_back(t.z_mask);
    grp.weights.push_back(t.coefficient * i_power(popcount(t.x_mask & t.z_mask)));
  }
  std::vector<PauliGroup> out;
  out.reserve(by_x.size());
  for (auto& [x, grp] : by_x) out.push_back(std::move(grp));
  return out;
}

namespace {

cplx group_element(const PauliGroup& grp, std::uint64_t source_state) {
  cplx acc{0.0, 0.0};
  for (std::size_t t = 0; t < grp.z_masks.size(); ++t) {
    acc += (popcount(grp.z_masks[t] & source_state) & 1) ? -grp.weights[t] : grp.weights[t];
  }
  return acc;
}

int qubits_for(std::uint32_t n_majoranas) {
  if (n_majoranas < 2 || n_majoranas % 2 != 0)
    throw ValidationError("hamiltonian: number of Majoranas must be even and >= 2");
  if (n_majoranas > 2 * 63) throw CapabilityError("hamiltonian: at most 126 Majoranas supported");
  return static_cast<int>(n_majoranas / 2);
}

}  // namespace

SparseHamiltonian::SparseHamiltonian(HamiltonianInfo info, std::vector<std::uint64_t> row_ptr,
                                     std::vector<std::uint64_t> col_idx, std::vector<cplx> values)
    : info_(info), row_ptr_(std::move(row_ptr)), col_idx_(std::move(col_idx)), values_(std::move(values)) {
  if (row_ptr_.empty() || row_ptr_.back() != values_.size() || col_idx_.size() != values_.size())
    throw ValidationError("CSR arrays are inconsistent");
}

void SparseHamiltonian::apply(std::span<const cplx> x, std::span<cplx> y) const {
  const std::size_t dim = dimension();
  if (x.size() != dim || y.size() != dim) throw ValidationError("matvec: vector length mismatch");
  parallel_for(dim, workers_, [&](std::size_t r0, std::size_t r1) {
    for (std::size_t r = r0; r < r1; ++r) {
      cplx acc{0.0, 0.0};
      for (std::uint64_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) acc += values_[k] * x[col_idx_[k]];
      y[r] = acc;
    }
  });
}

void SparseHamiltonian::apply_block(const Eigen::MatrixXcd& x, Eigen::MatrixXcd& y) const {
  using RowBlock = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const auto dim = static_cast<Eigen::Index>(dimension());
  if (x.rows() != dim) throw ValidationError("block matvec: row count mismatch");
  const RowBlock xr = x;
  RowBlock yr(dim, x.cols());
  parallel_for(static_cast<std::size_t>(dim), workers_, [&](std::size_t r0, std::size_t r1) {
    for (std::size_t r = r0; r < r1; ++r) {
      auto out = yr.row(static_cast<Eigen::Index>(r));
      out.setZero();
      for (std::uint64_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
        out += values_[k] * xr.row(static_cast<Eigen::Index>(col_idx_[k]));
    }
  });
  y = yr;
}

double SparseHamiltonian::norm_bound() const {
  double best = 0.0;
  for (std::size_t r = 0; r < dimension(); ++r) {
    double s = 0.0;
    for (std::uint64_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) s += std::abs(values_[k]);
    best = std::max(best, s);
  }
  return best;
}

std::size_t SparseHamiltonian::max_row_nnz() const {
  std::size_t best = 0;
  for (std::size_t r = 0; r < dimension(); ++r) best = std::max<std::size_t>(best, row_ptr_[r + 1] - row_ptr_[r]);
  return best;
}

Eigen::MatrixXcd SparseHamiltonian::to_dense() const {
  const auto dim = static_cast<Eigen::Index>(dimension());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r)
    for (std::uint64_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) m(r, static_cast<Eigen::Index>(col_idx_[k])) += values_[k];
  return m;
}

// ---------------------------------------------------------------------------

PauliSumOperator::PauliSumOperator(HamiltonianInfo info, std::vector<PauliGroup> groups)
    : info_(info), groups_(std::move(groups)) {
  basis_.n_qubits = qubits_for(info.n_majoranas);
  basis_.sector = info.sector;
}

void PauliSumOperator::apply(std::span<const cplx> x, std::span<cplx> y) const {
  const std::size_t dim = dimension();
  if (x.size() != dim || y.size() != dim) throw ValidationError("matvec: vector length mismatch");
  parallel_for(dim, workers_, [&](std::size_t r0, std::size_t r1) {
    for (std::size_t r = r0; r < r1; ++r) {
      const std::uint64_t target = basis_.state(r);
      cplx acc{0.0, 0.0};
      for (const auto& grp : groups_) {
        const std::uint64_t source = target ^ grp.x_mask;
        acc += group_element(grp, source) * x[SectorBasis::row(source)];
      }
      y[r] = acc;
    }
  });
}

double PauliSumOperator::norm_bound() const {
  double s = 0.0;
  for (const auto& grp : groups_)
    for (const auto& w : grp.weights) s += std::abs(w);
  return s;
}

// ---------------------------------------------------------------------------

SparseHamiltonian assemble_terms(std::uint32_t n_majoranas, std::span<const PauliTerm> terms, Sector sector,
                                 const HamiltonianInfo& info_in, const AssemblyOptions& opts) {
  const int n_qubits = qubits_for(n_majoranas);
  if (n_qubits > 40) throw CapabilityError("explicit sector matrix limited to N <= 80");
  const auto groups = group_terms(terms);
  for (const auto& g : groups) {
    if (g.x_mask >> n_qubits) throw ValidationError("hamiltonian: term acts outside the qubit register");
  }
  const SectorBasis basis{n_qubits, sector};
  const std::uint64_t dim = basis.dimension();

  // Entries of a row come from distinct x masks; sort per row by column.
  const std::size_t per_row = groups.size();
  std::vector<std::uint64_t> row_ptr(dim + 1);
  for (std::uint64_t r = 0; r <= dim; ++r) row_ptr[r] = r * per_row;
  std::vector<std::uint64_t> cols(dim * per_row);
  std::vector<cplx> vals(dim * per_row);
  parallel_for(dim, opts.workers, [&](std::size_t r0, std::size_t r1) {
    std::vector<std::pair<std::uint64_t, cplx>> row(per_row);
    for (std::size_t r = r0; r < r1; ++r) {
      const std::uint64_t target = basis.state(r);
      for (std::size_t gi = 0; gi < per_row; ++gi) {
        const std::uint64_t source = target ^ groups[gi].x_mask;
        row[gi] = {SectorBasis::row(source), group_element(groups[gi], source)};
      }
      std::sort(row.begin(), row.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
      for (std::size_t gi = 0; gi < per_row; ++gi) {
        cols[r * per_row + gi] = row[gi].first;
        vals[r * per_row + gi] = row[gi].second;
      }
    }
  });
  HamiltonianInfo info = info_in;
  info.n_majoranas = n_majoranas;
  info.sector = sector;
  return SparseHamiltonian(info, std::move(row_ptr), std::move(cols), std::move(vals));
}

namespace {

HamiltonianInfo info_for(const Graph& g, const CouplingSet& c, bool impurity, Sector sector) {
  HamiltonianInfo info;
  info.n_majoranas = g.n_vertices();
  info.k = g.spec.k;
  info.p = g.spec.p;
  info.graph_seed = g.spec.seed;
  info.coupling_seed = c.seed;
  info.sector = sector;
  info.impurity = impurity;
  return info;
}

}  // namespace

SparseHamiltonian assemble_hamiltonian(const Graph& g, const CouplingSet& c, bool impurity, Sector sector,
                                       const AssemblyOptions& opts) {
  const auto terms = hamiltonian_terms(g, c, impurity);
  auto h = assemble_terms(g.n_vertices(), terms, sector, info_for(g, c, impurity, sector), opts);
  h.set_workers(opts.workers);
  return h;
}

std::unique_ptr<LinearOperator> make_operator(const Graph& g, const CouplingSet& c, bool impurity, Sector sector,
                                              const AssemblyOptions& opts) {
  if (g.n_vertices() <= kMaxExplicitMajoranas) {
    return std::make_unique<SparseHamiltonian>(assemble_hamiltonian(g, c, impurity, sector, opts));
  }
  const auto terms = hamiltonian_terms(g, c, impurity);
  auto op = std::make_unique<PauliSumOperator>(info_for(g, c, impurity, sector), group_terms(terms));
  op->set_workers(opts.workers);
  return op;
}

bool is_structurally_hermitian(const SparseHamiltonian& h) {
  const auto& rp = h.row_ptr();
  const auto& ci = h.col_idx();
  const auto& v = h.values();
  for (std::size_t r = 0; r < h.dimension(); ++r) {
    for (std::uint64_t k = rp[r]; k < rp[r + 1]; ++k) {
      const std::uint64_t c = ci[k];
      const auto begin = ci.begin() + static_cast<std::ptrdiff_t>(rp[c]);
      const auto end = ci.begin() + static_cast<std::ptrdiff_t>(rp[c + 1]);
      const auto it = std::lower_bound(begin, end, static_cast<std::uint64_t>(r));
      if (it == end || *it != r) return false;
      if (v[static_cast<std::size_t>(it - ci.begin())] != std::conj(v[k])) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------

namespace {

constexpr char kMagic[8] = {'S', 'W', 'S', 'Y', 'K', 'C', 'S', 'R'};
constexpr std::uint64_t kDumpVersion = 1;

void put_u64(std::ostream& os, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  os.write(reinterpret_cast<const char*>(b), 8);
}

void put_f64(std::ostream& os, double d) { put_u64(os, std::bit_cast<std::uint64_t>(d)); }

std::uint64_t get_u64(std::istream& is) {
  unsigned char b[8];
  if (!is.read(reinterpret_cast<char*>(b), 8)) throw IoError("matrix dump: truncated file");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

double get_f64(std::istream& is) { return std::bit_cast<double>(get_u64(is)); }

}  // namespace

void save_hamiltonian(const std::string& path, const SparseHamiltonian& h) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open '" + path + "' for writing");
  const auto& info = h.info();
  os.write(kMagic, sizeof kMagic);
  put_u64(os, kDumpVersion);
  put_u64(os, info.n_majoranas);
  put_u64(os, info.k);
  put_f64(os, info.p);
  put_u64(os, info.graph_seed);
  put_u64(os, info.coupling_seed);
  put_u64(os, info.sector == Sector::even ? 0 : 1);
  put_u64(os, info.impurity ? 1 : 0);
  put_u64(os, h.dimension());
  put_u64(os, h.nnz());
  for (auto v : h.row_ptr()) put_u64(os, v);
  for (auto v : h.col_idx()) put_u64(os, v);
  for (const auto& v : h.values()) {
    put_f64(os, v.real());
    put_f64(os, v.imag());
  }
  if (!os) throw IoError("write failed for '" + path + "'");
}

SparseHamiltonian load_hamiltonian(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open '" + path + "'");
  char magic[8];
  if (!is.read(magic, 8) || std::memcmp(magic, kMagic, 8) != 0) throw IoError("matrix dump: bad magic in '" + path + "'");
  if (get_u64(is) != kDumpVersion) throw IoError("matrix dump: unsupported version");
  HamiltonianInfo info;
  info.n_majoranas = static_cast<std::uint32_t>(get_u64(is));
  info.k = static_cast<std::uint32_t>(get_u64(is));
  info.p = get_f64(is);
  info.graph_seed = get_u64(is);
  info.coupling_seed = get_u64(is);
  info.sector = get_u64(is) == 0 ? Sector::even : Sector::odd;
  info.impurity = get_u64(is) != 0;
  const std::uint64_t dim = get_u64(is);
  const std::uint64_t nnz = get_u64(is);
  std::vector<std::uint64_t> row_ptr(dim + 1), cols(nnz);
  std::vector<cplx> vals(nnz);
  for (auto& v : row_ptr) v = get_u64(is);
  for (auto& v : cols) v = get_u64(is);
  for (auto& v : vals) {
    const double re = get_f64(is);
    const double im = get_f64(is);
    v = {re, im};
  }
  return SparseHamiltonian(info, std::move(row_ptr), std::move(cols), std::move(vals));
}

// ---------------------------------------------------------------------------

namespace {

std::vector<double> level_sums(const Eigen::MatrixXcd& h, std::optional<Sector> sector) {
  if (h.rows() != h.cols() || h.rows() % 2 != 0) throw ValidationError("oracle: single-particle matrix must be square with even N");
  if (h.rows() > kMaxOracleMajoranas)
    throw CapabilityError("oracle: exponential enumeration limited to N <= " + std::to_string(kMaxOracleMajoranas));
  const Eigen::MatrixXd a = h.imag();
  const auto fact = bogoliubov(a);
  const int modes = static_cast<int>(fact.eps.size());
  const int det_sign = fact.rotation.determinant() > 0 ? 1 : -1;
  std::vector<double> levels;
  levels.reserve(std::size_t{1} << modes);
  for (std::uint64_t pattern = 0; pattern < (std::uint64_t{1} << modes); ++pattern) {
    // bit set -> sigma_k = -1
    const int sign_product = (popcount(pattern) & 1) ? -1 : 1;
    const int parity = det_sign * sign_product;
    if (sector && parity != (*sector == Sector::even ? 1 : -1)) continue;
    double e = 0.0;
    for (int k = 0; k < modes; ++k) e += ((pattern >> k) & 1 ? -0.5 : 0.5) * fact.eps[static_cast<std::size_t>(k)];
    levels.push_back(e);
  }
  std::sort(levels.begin(), levels.end());
  return levels;
}

}  // namespace

std::vector<double> quadratic_spectrum_oracle(const Eigen::MatrixXcd& h, Sector sector) { return level_sums(h, sector); }

std::vector<double> quadratic_spectrum_oracle(const Eigen::MatrixXcd& h) { return level_sums(h, std::nullopt); }

}  // namespace swsyk
