#pragma once

#include <Eigen/Dense>
#include <bit>
#include <complex>
#include <cstdint>
#include <span>

namespace swsyk {

using cplx = std::complex<double>;

/// coefficient * (sigma_1 (x) ... (x) sigma_n), where qubit q (bit q-1 of the
/// masks) carries I, X, Z or Y for (x,z) = (0,0), (1,0), (0,1), (1,1).
/// Basis state |b> has qubit q in state bit (q-1) of b.
struct PauliTerm {
  std::uint64_t x_mask = 0;
  std::uint64_t z_mask = 0;
  cplx coefficient{1.0, 0.0};
};

/// i^k for integer k (exact).
constexpr cplx i_power(int k) noexcept {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

inline int popcount(std::uint64_t v) noexcept { return std::popcount(v); }

/// Product a * b with the phase tracked exactly.
PauliTerm multiply(const PauliTerm& a, const PauliTerm& b);

/// sigma|b> = i^{|x&z|} (-1)^{|z&b|} |b ^ x>; returns the phase (without coefficient).
inline cplx apply_phase(std::uint64_t x_mask, std::uint64_t z_mask, std::uint64_t state) noexcept {
  const cplx base = i_power(popcount(x_mask & z_mask));
  return (popcount(z_mask & state) & 1) ? -base : base;
}

/// Majorana operator gamma^i (1 <= i <= 2*64) with {gamma^i, gamma^j} = delta^{ij}:
///   gamma^{2q-1} = Z_1 ... Z_{q-1} X_q / sqrt(2),  gamma^{2q} = Z_1 ... Z_{q-1} Y_q / sqrt(2).
PauliTerm majorana(int i);

/// gamma^{i_1} ... gamma^{i_m} with coefficient scale * 2^{-m/2}, computed
/// without rounding for even m.
PauliTerm majorana_product(std::span<const int> sites, cplx scale = {1.0, 0.0});

/// -i J gamma^i gamma^j, 1 <= i < j. Hermitian with real coefficient.
PauliTerm majorana_term(int i, int j, double coupling);

/// gamma^1 gamma^2 gamma^3 gamma^4 = -(1/4) Z_1 Z_2; needs n_majoranas >= 4.
PauliTerm impurity_term(int n_majoranas);

/// True when the term commutes with the global parity Z (x) ... (x) Z.
inline bool preserves_parity(const PauliTerm& t) noexcept { return (popcount(t.x_mask) & 1) == 0; }

/// Explicit 2^n x 2^n matrix of the unit-coefficient Pauli string; entries
/// are exactly 0, +-1 or +-i.
Eigen::MatrixXcd pauli_string_matrix(std::uint64_t x_mask, std::uint64_t z_mask, int n_qubits);

/// Explicit matrix of a term (coefficient included).
Eigen::MatrixXcd term_matrix(const PauliTerm& t, int n_qubits);

}  // namespace swsyk
