#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>

#include "swsyk/hamiltonian.hpp"
#include "swsyk/spectrum.hpp"

namespace swsyk {

struct DenseOptions {
  /// Largest dimension accepted (dense storage is D^2 complex entries).
  std::size_t max_dimension = std::size_t{1} << 14;
  /// Eigenpairs whose residual ||Hv - lambda v|| is checked; 0 skips the
  /// (costly) eigenvector computation entirely.
  std::size_t residual_samples = 10;
  /// Accept when max sampled residual <= residual_factor * ||H||.
  double residual_factor = 1e-10;
};

/// Full spectrum of a Hermitian matrix via Householder tridiagonalization
/// and implicit QR (Eigen::SelfAdjointEigenSolver).
Spectrum dense_eigh(const Eigen::MatrixXcd& h, const DenseOptions& opts = {});
Spectrum dense_eigh(const SparseHamiltonian& h, const DenseOptions& opts = {});

struct SpectralBounds {
  double lower = 0.0;
  double upper = 0.0;
  double span() const { return upper - lower; }
};

struct BoundsOptions {
  std::size_t krylov_steps = 60;
  /// Relative inflation of the interval, as a fraction of its width.
  double margin = 0.01;
};

/// Interval enclosing the spectrum: extremal Ritz values of a Lanczos run
/// (full reorthogonalization), widened by the Ritz residual norms plus
/// `margin` * width, then clipped to the operator's norm bound. Restarts with
/// a fresh start vector on breakdown before reaching either Ritz extreme.
SpectralBounds spectral_bounds(const LinearOperator& h, std::uint64_t seed, const BoundsOptions& opts = {});

}  // namespace swsyk
