#include <algorithm>
#include <cmath>
#include <limits>

#include "swsyk/eigensolve.hpp"
#include "swsyk/error.hpp"
#include "swsyk/rng.hpp"

namespace swsyk {

Spectrum dense_eigh(const Eigen::MatrixXcd& h, const DenseOptions& opts) {
  if (h.rows() != h.cols()) throw ValidationError("dense_eigh: matrix must be square");
  const auto dim = static_cast<std::size_t>(h.rows());
  if (dim > opts.max_dimension)
    throw CapabilityError("dense_eigh: dimension " + std::to_string(dim) + " exceeds the dense cap " +
                          std::to_string(opts.max_dimension) + "; use filter diagonalization");
  if (dim > 0) {
    const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
    if ((h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale) throw ValidationError("dense_eigh: matrix is not Hermitian");
  }
  Spectrum s;
  s.metadata = {{"method", "dense"}, {"dimension", std::to_string(dim)}};
  if (dim == 0) return s;

  const std::size_t samples = std::min(opts.residual_samples, dim);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, samples > 0 ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw ConvergenceError("dense_eigh: QR iteration did not converge");
  const Eigen::VectorXd& ev = solver.eigenvalues();
  s.eigenvalues.assign(ev.data(), ev.data() + ev.size());
  s.residuals.assign(dim, std::numeric_limits<double>::quiet_NaN());

  if (samples > 0) {
    const double scale = std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
    double worst = 0.0;
    for (std::size_t j = 0; j < samples; ++j) {
      const auto idx = static_cast<Eigen::Index>(samples == 1 ? 0 : j * (dim - 1) / (samples - 1));
      const Eigen::VectorXcd v = solver.eigenvectors().col(idx);
      const double r = (h * v - ev(idx) * v).norm();
      s.residuals[static_cast<std::size_t>(idx)] = r;
      worst = std::max(worst, r);
    }
    if (worst > opts.residual_factor * std::max(scale, 1.0))
      throw ConvergenceError("dense_eigh: sampled residual " + std::to_string(worst) + " above tolerance");
  }
  return s;
}

Spectrum dense_eigh(const SparseHamiltonian& h, const DenseOptions& opts) {
  if (h.dimension() > opts.max_dimension)
    throw CapabilityError("dense_eigh: dimension " + std::to_string(h.dimension()) + " exceeds the dense cap " +
                          std::to_string(opts.max_dimension) + "; use filter diagonalization");
  Spectrum s = dense_eigh(h.to_dense(), opts);
  const auto& info = h.info();
  s.metadata.emplace_back("n", std::to_string(info.n_majoranas));
  s.metadata.emplace_back("sector", to_string(info.sector));
  s.metadata.emplace_back("impurity", info.impurity ? "true" : "false");
  s.metadata.emplace_back("graph_seed", std::to_string(info.graph_seed));
  s.metadata.emplace_back("coupling_seed", std::to_string(info.coupling_seed));
  return s;
}

SpectralBounds spectral_bounds(const LinearOperator& h, std::uint64_t seed, const BoundsOptions& opts) {
  const auto dim = static_cast<Eigen::Index>(h.dimension());
  if (dim == 0) throw ValidationError("spectral_bounds: empty operator");
  const Eigen::Index steps = std::min<Eigen::Index>(dim, static_cast<Eigen::Index>(std::max<std::size_t>(opts.krylov_steps, 2)));

  Rng rng(seed);
  auto random_vector = [&] {
    Eigen::VectorXcd v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) v(i) = cplx(rng.normal(), rng.normal());
    return v;
  };

  Eigen::MatrixXcd basis(dim, steps);
  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(steps);
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(steps);  // beta(j) couples j and j+1
  Eigen::VectorXcd w(dim);
  const double scale_hint = std::max(h.norm_bound(), std::numeric_limits<double>::min());

  auto fresh_direction = [&](Eigen::Index filled) -> bool {
    for (int attempt = 0; attempt < 8; ++attempt) {
      Eigen::VectorXcd v = random_vector();
      for (int pass = 0; pass < 2; ++pass)
        if (filled > 0) v -= basis.leftCols(filled) * (basis.leftCols(filled).adjoint() * v);
      const double nv = v.norm();
      if (nv > 1e-8) {
        basis.col(filled) = v / nv;
        return true;
      }
    }
    return false;
  };

  if (!fresh_direction(0)) throw ConvergenceError("spectral_bounds: could not build a start vector");
  Eigen::Index m = 0;
  for (Eigen::Index j = 0; j < steps; ++j) {
    h.apply(std::span<const cplx>(basis.col(j).data(), static_cast<std::size_t>(dim)),
            std::span<cplx>(w.data(), static_cast<std::size_t>(dim)));
    alpha(j) = basis.col(j).dot(w).real();
    for (int pass = 0; pass < 2; ++pass) w -= basis.leftCols(j + 1) * (basis.leftCols(j + 1).adjoint() * w);
    m = j + 1;
    const double b = w.norm();
    if (j + 1 == steps) {
      beta(j) = b;
      break;
    }
    if (b <= 1e-12 * scale_hint) {
      // Invariant subspace found: restart in the orthogonal complement.
      beta(j) = 0.0;
      if (!fresh_direction(j + 1)) break;
    } else {
      beta(j) = b;
      basis.col(j + 1) = w / b;
    }
  }

  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    t(j, j) = alpha(j);
    if (j + 1 < m) t(j, j + 1) = t(j + 1, j) = beta(j);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri(t);
  const Eigen::VectorXd& theta = tri.eigenvalues();
  const double tail = m < dim ? beta(m - 1) : 0.0;
  const double res_lo = std::abs(tail * tri.eigenvectors()(m - 1, 0));
  const double res_hi = std::abs(tail * tri.eigenvectors()(m - 1, m - 1));

  double lo = theta(0) - res_lo;
  double hi = theta(m - 1) + res_hi;
  const double width = std::max(hi - lo, 1e-8 * std::max(1.0, scale_hint));
  lo -= opts.margin * width;
  hi += opts.margin * width;
  const double bound = h.norm_bound();
  if (bound > 0.0) {
    lo = std::max(lo, -bound * (1.0 + 1e-12) - 1e-300);
    hi = std::min(hi, bound * (1.0 + 1e-12) + 1e-300);
  }
  if (!(hi > lo)) {
    const double pad = 1e-8 * std::max(1.0, std::abs(lo));
    lo -= pad;
    hi += pad;
  }
  return {lo, hi};
}

}  // namespace swsyk
