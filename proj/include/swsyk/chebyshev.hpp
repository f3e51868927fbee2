#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "swsyk/eigensolve.hpp"

namespace swsyk {

/// Damping kernels for truncated Chebyshev expansions.
enum class Damping { none, jackson, lanczos_sigma };

std::string to_string(Damping d);
Damping parse_damping(const std::string& name);

/// Energy window: explicit [lo, hi], or a centered fraction of the
/// estimated spectral span.
struct SpectralWindow {
  double center_fraction = 0.2;
  std::optional<std::pair<double, double>> explicit_bounds;

  std::pair<double, double> resolve(const SpectralBounds& bounds) const;
};

struct FilterConfig {
  std::size_t polynomial_degree = 128;
  std::size_t block_size = 32;
  Damping damping = Damping::jackson;
  double residual_tol = 1e-8;  // relative to max(|lower|, |upper|) of the bounds
  std::size_t max_iterations = 40;
  double bound_margin = 0.01;
  std::size_t max_degree = 8192;
  std::size_t count_probes = 8;
  std::size_t bound_steps = 60;

  void validate() const;
};

/// Damped expansion coefficients c_n g_n (n = 0..degree) of the indicator of
/// [a, b] within [-1, 1].
std::vector<double> window_coefficients(double a, double b, std::size_t degree, Damping damping);

/// Scalar evaluation sum_n coeffs[n] T_n(x) for x in [-1, 1] (Clenshaw).
double evaluate_chebyshev(const std::vector<double>& coeffs, double x);

/// Affine map sending [bounds.lower, bounds.upper] to [-1, 1].
struct ChebyshevScaling {
  double center = 0.0;
  double half_width = 1.0;
  explicit ChebyshevScaling(const SpectralBounds& b) : center(0.5 * (b.upper + b.lower)), half_width(0.5 * (b.upper - b.lower)) {}
  double to_unit(double e) const { return (e - center) / half_width; }
};

/// Applies the damped window polynomial p(H~) to every column of X using the
/// three-term recurrence (one block matvec per degree).
Eigen::MatrixXcd chebyshev_filter_apply(const LinearOperator& h, const SpectralBounds& bounds,
                                        std::pair<double, double> window, std::size_t degree, Damping damping,
                                        const Eigen::MatrixXcd& x);

struct CountEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
};

/// Stochastic trace of the window polynomial with random-phase probes.
CountEstimate estimate_window_count(const LinearOperator& h, const SpectralBounds& bounds,
                                    std::pair<double, double> window, std::size_t degree, Damping damping,
                                    std::size_t probes, std::uint64_t seed);

struct FilterResult {
  Spectrum spectrum;
  Eigen::MatrixXcd vectors;  // converged Ritz vectors, columns match spectrum order
  SpectralBounds bounds;
  CountEstimate estimate;
  std::size_t iterations = 0;
  std::size_t final_degree = 0;
  std::size_t final_block = 0;
};

/// Chebyshev filter diagonalization of the eigenpairs inside `window`:
/// filter a block, orthonormalize against locked vectors, Rayleigh-Ritz,
/// lock pairs with small residual inside the window, and stop when no
/// unconverged Ritz value remains in the window and the locked count is
/// unchanged over two consecutive iterations. The block grows when in-window
/// Ritz values crowd the search space; the degree doubles when an iteration
/// locks nothing new. Non-convergence yields `converged == false`.
FilterResult filter_diagonalize_detailed(const LinearOperator& h, const SpectralWindow& window, const FilterConfig& cfg,
                                         std::uint64_t seed);

inline Spectrum filter_diagonalize(const LinearOperator& h, const SpectralWindow& window, const FilterConfig& cfg,
                                   std::uint64_t seed) {
  return filter_diagonalize_detailed(h, window, cfg, seed).spectrum;
}

}  // namespace swsyk
