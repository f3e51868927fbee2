#include "swsyk/dyson.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "swsyk/error.hpp"
#include "swsyk/parallel.hpp"

namespace swsyk {

namespace {

struct Plane {
  Eigen::VectorXd first;
  Eigen::VectorXd second;
  double eps = 0.0;
};

// Rotate the plane so u = (first + i second) has its largest-magnitude entry
// (lowest index within 1e-9 relative) real and positive.
void fix_gauge(Plane& pl) {
  const Eigen::Index n = pl.first.size();
  double best = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) best = std::max(best, std::hypot(pl.first(i), pl.second(i)));
  if (best == 0.0) return;
  Eigen::Index m = 0;
  for (; m < n; ++m)
    if (std::hypot(pl.first(m), pl.second(m)) >= best * (1.0 - 1e-9)) break;
  const double phi = std::atan2(pl.second(m), pl.first(m));
  const double c = std::cos(phi), s = std::sin(phi);
  // u -> e^{-i phi} u
  const Eigen::VectorXd f = c * pl.first + s * pl.second;
  const Eigen::VectorXd g = -s * pl.first + c * pl.second;
  pl.first = f;
  pl.second = g;
  pl.second(m) = 0.0;
}

// Real orthonormal basis of the invariant subspace spanned by Re/Im of the
// given complex eigenvectors, canonicalized by a real Schur form of A on it.
std::vector<Plane> planes_from_cluster(const Eigen::MatrixXd& a, const Eigen::MatrixXcd& u, Eigen::Index real_dim) {
  const Eigen::Index n = a.rows();
  Eigen::MatrixXd parts(n, 2 * u.cols());
  parts << u.real(), u.imag();
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(parts);
  const Eigen::MatrixXd z = (qr.householderQ() * Eigen::MatrixXd::Identity(n, real_dim)).eval();
  const Eigen::MatrixXd b = z.transpose() * a * z;
  Eigen::RealSchur<Eigen::MatrixXd> schur(b);
  const Eigen::MatrixXd basis = z * schur.matrixU();
  const Eigen::MatrixXd& t = schur.matrixT();

  std::vector<Plane> planes;
  std::vector<Eigen::Index> singles;
  for (Eigen::Index i = 0; i < real_dim;) {
    if (i + 1 < real_dim && t(i + 1, i) != 0.0) {
      planes.push_back({basis.col(i), basis.col(i + 1), 0.0});
      i += 2;
    } else {
      singles.push_back(i);
      ++i;
    }
  }
  for (std::size_t s = 0; s + 1 < singles.size(); s += 2)
    planes.push_back({basis.col(singles[s]), basis.col(singles[s + 1]), 0.0});
  for (auto& pl : planes) {
    double e = pl.first.dot(a * pl.second);
    if (e < 0.0) {
      std::swap(pl.first, pl.second);
      e = -e;
    }
    pl.eps = e;
  }
  return planes;
}

}  // namespace

BogoliubovFactorization bogoliubov(const Eigen::MatrixXd& a, const BogoliubovOptions& opts) {
  if (a.rows() != a.cols()) throw ValidationError("bogoliubov: matrix must be square");
  const Eigen::Index n = a.rows();
  if (n == 0 || n % 2 != 0) throw ValidationError("bogoliubov: dimension must be even and positive");
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  if ((a + a.transpose()).cwiseAbs().maxCoeff() > opts.antisymmetry_tol * scale)
    throw ValidationError("bogoliubov: matrix is not antisymmetric within tolerance");

  const Eigen::MatrixXcd h = std::complex<double>(0.0, 1.0) * a.cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
  if (solver.info() != Eigen::Success) throw ConvergenceError("bogoliubov: eigensolver failed");
  const Eigen::VectorXd& lambda = solver.eigenvalues();
  const Eigen::MatrixXcd& vecs = solver.eigenvectors();
  const Eigen::Index half = n / 2;

  // Near-zero modes: conjugate pairing is unreliable, treat as one cluster.
  const double zero_tol = std::max(1e-6, opts.degeneracy_tol) * scale;
  Eigen::Index zeros = 0;
  for (Eigen::Index j = 0; j < n; ++j)
    if (std::abs(lambda(j)) <= zero_tol) ++zeros;
  const Eigen::Index zm = (zeros + 1) / 2;

  BogoliubovFactorization out;
  std::vector<Plane> planes;
  if (zm > 0) {
    auto zp = planes_from_cluster(a, vecs.middleCols(half - zm, 2 * zm), 2 * zm);
    planes.insert(planes.end(), zp.begin(), zp.end());
    ++out.degenerate_clusters;
  }

  // Remaining negative eigenvalues -eps, grouped into degeneracy clusters.
  const double degen = opts.degeneracy_tol * scale;
  for (Eigen::Index j = half - zm - 1; j >= 0;) {
    Eigen::Index first = j;
    while (first > 0 && lambda(first) - lambda(first - 1) <= degen) --first;
    const Eigen::Index count = j - first + 1;
    if (count == 1) {
      const Eigen::VectorXcd u = vecs.col(j);
      Plane pl{std::sqrt(2.0) * u.real(), std::sqrt(2.0) * u.imag(), -lambda(j)};
      planes.push_back(std::move(pl));
    } else {
      // Explicit re-orthonormalization of the degenerate block, then Schur pairing.
      Eigen::MatrixXcd block = vecs.middleCols(first, count);
      Eigen::HouseholderQR<Eigen::MatrixXcd> qr(block);
      block = qr.householderQ() * Eigen::MatrixXcd::Identity(n, count);
      auto cp = planes_from_cluster(a, block, 2 * count);
      planes.insert(planes.end(), cp.begin(), cp.end());
      ++out.degenerate_clusters;
    }
    j = first - 1;
  }

  for (auto& pl : planes) fix_gauge(pl);
  std::stable_sort(planes.begin(), planes.end(), [](const Plane& x, const Plane& y) { return x.eps < y.eps; });

  Eigen::MatrixXd rows(n, n);
  for (std::size_t k = 0; k < planes.size(); ++k) {
    rows.row(static_cast<Eigen::Index>(2 * k)) = planes[k].first.transpose();
    rows.row(static_cast<Eigen::Index>(2 * k + 1)) = planes[k].second.transpose();
    out.eps.push_back(planes[k].eps);
  }
  // Final Gram-Schmidt sweep (QR of O^T with positive R diagonal).
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(rows.transpose());
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < n; ++k)
    if (r(k, k) < 0.0) q.col(k) *= -1.0;
  out.rotation = q.transpose();
  return out;
}

// ---------------------------------------------------------------------------

QuarticTensor rotate_quartic(const Eigen::MatrixXd& rotation, std::array<int, 4> sites, const QuarticOptions& opts) {
  const Eigen::Index n = rotation.rows();
  if (rotation.cols() != n) throw ValidationError("rotate_quartic: rotation must be square");
  if (n < 4) throw ValidationError("rotate_quartic: need at least 4 modes");
  if (n > 65535) throw CapabilityError("rotate_quartic: mode index exceeds 16 bits");
  for (std::size_t i = 0; i < 4; ++i) {
    if (sites[i] < 1 || sites[i] > n) throw ValidationError("rotate_quartic: site out of range");
    for (std::size_t j = 0; j < i; ++j)
      if (sites[i] == sites[j]) throw ValidationError("rotate_quartic: sites must be distinct");
  }
  const double dev = (rotation.transpose() * rotation - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
  if (dev > opts.orthogonality_tol) throw ValidationError("rotate_quartic: rotation is not orthogonal (deviation " + std::to_string(dev) + ")");

  Eigen::MatrixXd m(n, 4);
  for (int c = 0; c < 4; ++c) m.col(c) = rotation.col(sites[static_cast<std::size_t>(c)] - 1);

  // 2x2 minors of rows (a, b) for column pairs 01 02 03 12 13 23.
  constexpr int pairs[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
  const auto un = static_cast<std::size_t>(n);
  std::vector<double> minors(un * un * 6, 0.0);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = a + 1; b < n; ++b)
      for (int p = 0; p < 6; ++p) {
        const int c1 = pairs[p][0], c2 = pairs[p][1];
        minors[(static_cast<std::size_t>(a) * un + static_cast<std::size_t>(b)) * 6 + static_cast<std::size_t>(p)] =
            m(a, c1) * m(b, c2) - m(a, c2) * m(b, c1);
      }

  struct Partial {
    std::vector<QuarticEntry> entries;
    std::uint64_t count = 0;
    double sum_sq = 0.0, sum_quartic = 0.0, max_abs = 0.0;
  };
  std::vector<Partial> per_row(un);
  parallel_for(un, opts.workers, [&](std::size_t a0, std::size_t a1) {
    for (std::size_t a = a0; a < a1; ++a) {
      Partial& part = per_row[a];
      for (std::size_t b = a + 1; b < un; ++b) {
        const double* ab = &minors[(a * un + b) * 6];
        for (std::size_t c = b + 1; c < un; ++c) {
          for (std::size_t d = c + 1; d < un; ++d) {
            const double* cd = &minors[(c * un + d) * 6];
            const double t = ab[0] * cd[5] - ab[1] * cd[4] + ab[2] * cd[3] + ab[3] * cd[2] - ab[4] * cd[1] + ab[5] * cd[0];
            const double t2 = t * t;
            ++part.count;
            part.sum_sq += t2;
            part.sum_quartic += t2 * t2;
            part.max_abs = std::max(part.max_abs, std::abs(t));
            if (std::abs(t) > opts.keep_threshold) {
              part.entries.push_back({{static_cast<std::uint16_t>(a), static_cast<std::uint16_t>(b),
                                       static_cast<std::uint16_t>(c), static_cast<std::uint16_t>(d)},
                                      t});
            }
          }
        }
      }
    }
  });

  QuarticTensor out;
  out.n_modes = static_cast<std::uint32_t>(n);
  out.sites = sites;
  out.keep_threshold = opts.keep_threshold;
  for (auto& part : per_row) {
    out.quadruples += part.count;
    out.sum_sq += part.sum_sq;
    out.sum_quartic += part.sum_quartic;
    out.max_abs = std::max(out.max_abs, part.max_abs);
    out.entries.insert(out.entries.end(), part.entries.begin(), part.entries.end());
  }
  return out;
}

ExtensivityMeasures extensivity_measures(const QuarticTensor& t, double tau) {
  if (t.quadruples == 0 || t.sum_quartic == 0.0) throw ValidationError("extensivity_measures: empty tensor");
  if (!(tau >= 0.0)) throw ValidationError("extensivity_measures: tau must be non-negative");
  const double cut = tau * t.max_abs;
  if (t.keep_threshold > cut)
    throw CapabilityError("extensivity_measures: tensor was pruned above tau * max|T|; recompute with a lower keep_threshold");
  ExtensivityMeasures out;
  out.tau = tau;
  out.participation_ratio = t.sum_sq * t.sum_sq / t.sum_quartic;
  out.support_count = static_cast<std::size_t>(
      std::count_if(t.entries.begin(), t.entries.end(), [&](const QuarticEntry& e) { return std::abs(e.value) > cut; }));
  return out;
}

// ---------------------------------------------------------------------------

std::vector<double> single_particle_spectrum(const Graph& g, const CouplingSet& c) {
  const Eigen::MatrixXcd h = single_particle_matrix(g, c);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw ConvergenceError("single-particle eigensolver failed");
  return {solver.eigenvalues().data(), solver.eigenvalues().data() + solver.eigenvalues().size()};
}

RStatistics single_particle_rstats(const Graph& g, const CouplingSet& c, const SingleParticleOptions& opts) {
  const auto levels = single_particle_spectrum(g, c);
  return single_particle_r(levels, opts.fraction, opts.exclude_fraction);
}

double single_particle_mean_ipr(const Graph& g, const CouplingSet& c, const SingleParticleOptions& opts) {
  const Eigen::MatrixXcd h = single_particle_matrix(g, c);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
  if (solver.info() != Eigen::Success) throw ConvergenceError("single-particle eigensolver failed");
  const auto n = static_cast<std::size_t>(h.rows());
  // Same index selection as single_particle_r.
  const std::size_t half = n / 2;
  const std::size_t positive = n - half;
  const auto drop = static_cast<std::size_t>(std::floor(opts.exclude_fraction * static_cast<double>(positive)));
  const std::size_t avail = positive - drop;
  const auto keep = static_cast<std::size_t>(std::llround(opts.fraction * static_cast<double>(avail)));
  const std::size_t start = half + drop + (avail - std::min(keep, avail)) / 2;
  if (keep == 0) throw ValidationError("single_particle_mean_ipr: empty selection");
  double acc = 0.0;
  for (std::size_t i = start; i < start + keep; ++i) acc += ipr(solver.eigenvectors().col(static_cast<Eigen::Index>(i)));
  return acc / static_cast<double>(keep);
}

}  // namespace swsyk
