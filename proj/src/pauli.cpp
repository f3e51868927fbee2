#include "swsyk/pauli.hpp"

#include <array>
#include <cmath>

#include "swsyk/error.hpp"

namespace swsyk {

PauliTerm multiply(const PauliTerm& a, const PauliTerm& b) {
  // sigma(x,z) = i^{|x&z|} X^x Z^z and Z^z1 X^x2 = (-1)^{|z1&x2|} X^x2 Z^z1.
  PauliTerm out;
  out.x_mask = a.x_mask ^ b.x_mask;
  out.z_mask = a.z_mask ^ b.z_mask;
  const int k = popcount(a.x_mask & a.z_mask) + popcount(b.x_mask & b.z_mask) +
                2 * popcount(a.z_mask & b.x_mask) - popcount(out.x_mask & out.z_mask);
  out.coefficient = a.coefficient * b.coefficient * i_power(k);
  return out;
}

namespace {

// Unnormalized Majorana: gamma^i = unit_majorana(i) / sqrt(2).
PauliTerm unit_majorana(int i) {
  if (i < 1 || i > 128) throw ValidationError("majorana index out of range [1, 128]: " + std::to_string(i));
  const int q = (i + 1) / 2;  // 1-based qubit
  const std::uint64_t bit = std::uint64_t{1} << (q - 1);
  PauliTerm t;
  t.x_mask = bit;
  t.z_mask = bit - 1;
  if (i % 2 == 0) t.z_mask |= bit;
  return t;
}

}  // namespace

PauliTerm majorana(int i) {
  PauliTerm t = unit_majorana(i);
  t.coefficient = {1.0 / std::sqrt(2.0), 0.0};
  return t;
}

PauliTerm majorana_product(std::span<const int> sites, cplx scale) {
  PauliTerm acc;
  for (int s : sites) acc = multiply(acc, unit_majorana(s));
  const int m = static_cast<int>(sites.size());
  double norm = std::ldexp(1.0, -(m / 2));
  if (m % 2) norm /= std::sqrt(2.0);
  acc.coefficient *= scale * norm;
  return acc;
}

PauliTerm majorana_term(int i, int j, double coupling) {
  if (i >= j) throw ValidationError("majorana_term requires i < j, got (" + std::to_string(i) + ", " + std::to_string(j) + ")");
  const std::array<int, 2> sites{i, j};
  PauliTerm t = majorana_product(sites, cplx(0.0, -coupling));
  // Hermitian by construction; drop the signed-zero imaginary part.
  t.coefficient = {t.coefficient.real(), 0.0};
  return t;
}

PauliTerm impurity_term(int n_majoranas) {
  if (n_majoranas < 4) throw ValidationError("impurity term needs at least 4 Majoranas");
  const std::array<int, 4> sites{1, 2, 3, 4};
  PauliTerm t = majorana_product(sites);
  t.coefficient = {t.coefficient.real(), 0.0};
  return t;
}

Eigen::MatrixXcd pauli_string_matrix(std::uint64_t x_mask, std::uint64_t z_mask, int n_qubits) {
  if (n_qubits < 0 || n_qubits > 14) throw CapabilityError("explicit Pauli matrices limited to 14 qubits");
  const Eigen::Index dim = Eigen::Index{1} << n_qubits;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (Eigen::Index b = 0; b < dim; ++b) {
    const auto state = static_cast<std::uint64_t>(b);
    m(static_cast<Eigen::Index>(state ^ x_mask), b) = apply_phase(x_mask, z_mask, state);
  }
  return m;
}

Eigen::MatrixXcd term_matrix(const PauliTerm& t, int n_qubits) {
  return t.coefficient * pauli_string_matrix(t.x_mask, t.z_mask, n_qubits);
}

}  // namespace swsyk
