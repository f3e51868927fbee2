#include "swsyk/chebyshev.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "swsyk/error.hpp"
#include "swsyk/io.hpp"
#include "swsyk/rng.hpp"

namespace swsyk {

std::string to_string(Damping d) {
  switch (d) {
    case Damping::none: return "none";
    case Damping::jackson: return "jackson";
    case Damping::lanczos_sigma: return "lanczos";
  }
  return "?";
}

Damping parse_damping(const std::string& name) {
  if (name == "none" || name == "flat") return Damping::none;
  if (name == "jackson") return Damping::jackson;
  if (name == "lanczos" || name == "sigma") return Damping::lanczos_sigma;
  throw ValidationError("unknown damping kernel '" + name + "' (expected none|jackson|lanczos)");
}

std::pair<double, double> SpectralWindow::resolve(const SpectralBounds& bounds) const {
  if (explicit_bounds) {
    const auto [lo, hi] = *explicit_bounds;
    if (!(lo < hi)) throw ValidationError("window: lower bound must be below upper bound");
    if (hi < bounds.lower || lo > bounds.upper)
      throw ValidationError("window [" + format_double(lo) + ", " + format_double(hi) + "] lies outside the spectral bounds [" +
                            format_double(bounds.lower) + ", " + format_double(bounds.upper) + "]");
    return {std::max(lo, bounds.lower), std::min(hi, bounds.upper)};
  }
  if (!(center_fraction > 0.0 && center_fraction <= 1.0)) throw ValidationError("window: center_fraction must lie in (0, 1]");
  const double mid = 0.5 * (bounds.lower + bounds.upper);
  const double half = 0.5 * center_fraction * bounds.span();
  return {mid - half, mid + half};
}

void FilterConfig::validate() const {
  if (block_size < 1) throw ValidationError("filter: block_size must be >= 1");
  if (max_iterations < 1) throw ValidationError("filter: max_iterations must be >= 1");
  if (!(residual_tol > 0.0)) throw ValidationError("filter: residual_tol must be positive");
  if (bound_margin < 0.0) throw ValidationError("filter: bound_margin must be non-negative");
  if (max_degree < polynomial_degree) throw ValidationError("filter: max_degree below polynomial_degree");
}

std::vector<double> window_coefficients(double a, double b, std::size_t degree, Damping damping) {
  if (!(a < b) || a < -1.0 || b > 1.0) throw ValidationError("filter: scaled window must satisfy -1 <= a < b <= 1");
  const double pi = std::numbers::pi;
  const double ta = std::acos(a);
  const double tb = std::acos(b);
  const double m1 = static_cast<double>(degree) + 1.0;
  std::vector<double> c(degree + 1);
  for (std::size_t n = 0; n <= degree; ++n) {
    const double dn = static_cast<double>(n);
    double coeff = n == 0 ? (ta - tb) / pi : 2.0 * (std::sin(dn * ta) - std::sin(dn * tb)) / (dn * pi);
    double g = 1.0;
    switch (damping) {
      case Damping::none:
        break;
      case Damping::jackson:
        g = ((m1 - dn) * std::cos(pi * dn / m1) + std::sin(pi * dn / m1) / std::tan(pi / m1)) / m1;
        break;
      case Damping::lanczos_sigma:
        g = n == 0 ? 1.0 : std::sin(dn * pi / m1) / (dn * pi / m1);
        break;
    }
    c[n] = coeff * g;
  }
  return c;
}

double evaluate_chebyshev(const std::vector<double>& coeffs, double x) {
  double b1 = 0.0, b2 = 0.0;
  for (std::size_t n = coeffs.size(); n-- > 1;) {
    const double b0 = coeffs[n] + 2.0 * x * b1 - b2;
    b2 = b1;
    b1 = b0;
  }
  return coeffs.empty() ? 0.0 : coeffs[0] + x * b1 - b2;
}

namespace {

// Y = (H - c) / e applied to a block.
void scaled_apply(const LinearOperator& h, const ChebyshevScaling& s, const Eigen::MatrixXcd& x, Eigen::MatrixXcd& y) {
  h.apply_block(x, y);
  y = (y - s.center * x) / s.half_width;
}

Eigen::MatrixXcd apply_expansion(const LinearOperator& h, const ChebyshevScaling& s, const std::vector<double>& coeffs,
                                 const Eigen::MatrixXcd& x) {
  Eigen::MatrixXcd acc = coeffs[0] * x;
  if (coeffs.size() == 1) return acc;
  Eigen::MatrixXcd prev = x;
  Eigen::MatrixXcd cur;
  scaled_apply(h, s, x, cur);
  acc += coeffs[1] * cur;
  Eigen::MatrixXcd next;
  for (std::size_t n = 2; n < coeffs.size(); ++n) {
    scaled_apply(h, s, cur, next);
    next = 2.0 * next - prev;
    acc += coeffs[n] * next;
    prev.swap(cur);
    cur.swap(next);
  }
  return acc;
}

Eigen::MatrixXcd random_block(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  Eigen::MatrixXcd x(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) x(i, j) = cplx(rng.normal(), rng.normal());
  return x;
}

Eigen::MatrixXcd orthonormal_columns(const Eigen::MatrixXcd& y) {
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(y);
  return qr.householderQ() * Eigen::MatrixXcd::Identity(y.rows(), y.cols());
}

}  // namespace

Eigen::MatrixXcd chebyshev_filter_apply(const LinearOperator& h, const SpectralBounds& bounds,
                                        std::pair<double, double> window, std::size_t degree, Damping damping,
                                        const Eigen::MatrixXcd& x) {
  if (!(bounds.upper > bounds.lower)) throw ValidationError("filter: degenerate spectral bounds");
  if (window.first < bounds.lower || window.second > bounds.upper || !(window.first < window.second))
    throw ValidationError("filter: window must lie inside the spectral bounds");
  if (static_cast<std::size_t>(x.rows()) != h.dimension()) throw ValidationError("filter: block row count mismatch");
  const ChebyshevScaling s(bounds);
  const auto coeffs = window_coefficients(std::max(-1.0, s.to_unit(window.first)), std::min(1.0, s.to_unit(window.second)),
                                          degree, damping);
  return apply_expansion(h, s, coeffs, x);
}

CountEstimate estimate_window_count(const LinearOperator& h, const SpectralBounds& bounds,
                                    std::pair<double, double> window, std::size_t degree, Damping damping,
                                    std::size_t probes, std::uint64_t seed) {
  const auto dim = static_cast<Eigen::Index>(h.dimension());
  probes = std::max<std::size_t>(probes, 1);
  Rng rng(seed);
  Eigen::MatrixXcd v(dim, static_cast<Eigen::Index>(probes));
  for (Eigen::Index j = 0; j < v.cols(); ++j)
    for (Eigen::Index i = 0; i < dim; ++i) {
      const double phase = 2.0 * std::numbers::pi * rng.uniform();
      v(i, j) = cplx(std::cos(phase), std::sin(phase));
    }
  const Eigen::MatrixXcd pv = chebyshev_filter_apply(h, bounds, window, degree, damping, v);
  std::vector<double> samples(probes);
  for (std::size_t j = 0; j < probes; ++j)
    samples[j] = v.col(static_cast<Eigen::Index>(j)).dot(pv.col(static_cast<Eigen::Index>(j))).real();
  const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / static_cast<double>(probes);
  double var = 0.0;
  for (double s : samples) var += (s - mean) * (s - mean);
  CountEstimate est;
  est.mean = mean;
  est.standard_error = probes > 1 ? std::sqrt(var / static_cast<double>(probes - 1) / static_cast<double>(probes)) : 0.0;
  return est;
}

FilterResult filter_diagonalize_detailed(const LinearOperator& h, const SpectralWindow& window, const FilterConfig& cfg,
                                         std::uint64_t seed) {
  cfg.validate();
  const auto dim = static_cast<Eigen::Index>(h.dimension());
  if (dim == 0) throw ValidationError("filter: empty operator");

  FilterResult result;
  BoundsOptions bopts;
  bopts.krylov_steps = cfg.bound_steps;
  bopts.margin = cfg.bound_margin;
  result.bounds = spectral_bounds(h, substream(seed, 0), bopts);
  const auto win = window.resolve(result.bounds);
  const double scale = std::max(std::abs(result.bounds.lower), std::abs(result.bounds.upper));
  const double tol_abs = cfg.residual_tol * std::max(scale, 1e-300);

  std::size_t degree = cfg.polynomial_degree;
  result.estimate = estimate_window_count(h, result.bounds, win, degree, cfg.damping, cfg.count_probes, substream(seed, 1));

  const auto want = static_cast<Eigen::Index>(std::ceil(2.0 * std::max(result.estimate.mean, 0.0))) + 16;
  Eigen::Index block = std::min<Eigen::Index>(dim, std::max<Eigen::Index>(static_cast<Eigen::Index>(cfg.block_size), want));

  Rng rng(substream(seed, 2));
  Eigen::MatrixXcd x = random_block(dim, block, rng);
  Eigen::MatrixXcd locked(dim, 0);
  std::vector<double> locked_values, locked_residuals;

  const double centre = 0.5 * (win.first + win.second);
  long previous_locked = -1;
  bool converged = false;
  std::size_t it = 0;
  for (; it < cfg.max_iterations; ++it) {
    const Eigen::Index room = dim - locked.cols();
    if (room <= 0) {
      converged = true;
      break;
    }
    Eigen::MatrixXcd y = chebyshev_filter_apply(h, result.bounds, win, degree, cfg.damping, x);
    if (locked.cols() > 0)
      for (int pass = 0; pass < 2; ++pass) y -= locked * (locked.adjoint() * y);
    if (y.cols() > room) y.conservativeResize(Eigen::NoChange, room);
    Eigen::MatrixXcd q = orthonormal_columns(y);
    if (locked.cols() > 0) {
      q -= locked * (locked.adjoint() * q);
      q = orthonormal_columns(q);
    }

    Eigen::MatrixXcd hq;
    h.apply_block(q, hq);
    Eigen::MatrixXcd g = q.adjoint() * hq;
    g = 0.5 * (g + g.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> rr(g);
    const Eigen::VectorXd& theta = rr.eigenvalues();
    const Eigen::MatrixXcd ritz = q * rr.eigenvectors();
    const Eigen::MatrixXcd resid = hq * rr.eigenvectors() - ritz * theta.asDiagonal();

    std::vector<Eigen::Index> newly, pending, rest;
    for (Eigen::Index j = 0; j < theta.size(); ++j) {
      const bool inside = theta(j) >= win.first && theta(j) <= win.second;
      const double r = resid.col(j).norm();
      if (inside && r <= tol_abs) {
        newly.push_back(j);
      } else {
        (inside ? pending : rest).push_back(j);
      }
    }
    if (!newly.empty()) {
      const Eigen::Index old = locked.cols();
      locked.conservativeResize(Eigen::NoChange, old + static_cast<Eigen::Index>(newly.size()));
      for (std::size_t t = 0; t < newly.size(); ++t) {
        locked.col(old + static_cast<Eigen::Index>(t)) = ritz.col(newly[t]);
        locked_values.push_back(theta(newly[t]));
        locked_residuals.push_back(resid.col(newly[t]).norm());
      }
    }

    const long n_locked = static_cast<long>(locked.cols());
    if (pending.empty() && n_locked == previous_locked) {
      converged = true;
      ++it;
      break;
    }
    previous_locked = n_locked;

    const auto in_window = static_cast<Eigen::Index>(newly.size() + pending.size());
    const Eigen::Index guard = std::max<Eigen::Index>(4, block / 4);
    if (in_window >= block - guard && block < dim - locked.cols()) {
      block = std::min<Eigen::Index>(2 * block, dim - locked.cols());
    } else if (newly.empty() && !pending.empty()) {
      degree = std::min(cfg.max_degree, 2 * degree);
    }

    // Next block: unlocked Ritz vectors nearest the window centre, then random fill.
    std::vector<Eigen::Index> carry = pending;
    carry.insert(carry.end(), rest.begin(), rest.end());
    std::stable_sort(carry.begin(), carry.end(), [&](Eigen::Index a, Eigen::Index b) {
      return std::abs(theta(a) - centre) < std::abs(theta(b) - centre);
    });
    const Eigen::Index next_cols = std::min<Eigen::Index>(block, dim - locked.cols());
    x.resize(dim, next_cols);
    Eigen::Index filled = 0;
    for (; filled < next_cols && filled < static_cast<Eigen::Index>(carry.size()); ++filled)
      x.col(filled) = ritz.col(carry[static_cast<std::size_t>(filled)]);
    if (filled < next_cols) x.rightCols(next_cols - filled) = random_block(dim, next_cols - filled, rng);
  }

  std::vector<std::size_t> order(locked_values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return locked_values[a] < locked_values[b]; });
  Spectrum& s = result.spectrum;
  result.vectors.resize(dim, static_cast<Eigen::Index>(order.size()));
  for (std::size_t t = 0; t < order.size(); ++t) {
    s.eigenvalues.push_back(locked_values[order[t]]);
    s.residuals.push_back(locked_residuals[order[t]]);
    result.vectors.col(static_cast<Eigen::Index>(t)) = locked.col(static_cast<Eigen::Index>(order[t]));
  }
  s.window = win;
  s.converged = converged;
  result.iterations = it;
  result.final_degree = degree;
  result.final_block = static_cast<std::size_t>(block);
  s.metadata = {
      {"method", "filter"},
      {"dimension", std::to_string(dim)},
      {"damping", to_string(cfg.damping)},
      {"degree", std::to_string(degree)},
      {"block_size", std::to_string(block)},
      {"iterations", std::to_string(it)},
      {"residual_tol", format_double(cfg.residual_tol)},
      {"bounds_lower", format_double(result.bounds.lower)},
      {"bounds_upper", format_double(result.bounds.upper)},
      {"estimated_count", format_double(result.estimate.mean)},
      {"estimated_count_stderr", format_double(result.estimate.standard_error)},
      {"solver_seed", std::to_string(seed)},
  };
  return result;
}

}  // namespace swsyk
