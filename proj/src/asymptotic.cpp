#include "hetanova/asymptotic.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>

#include "hetanova/bootstrap.hpp"
#include "hetanova/errors.hpp"
#include "hetanova/parallel.hpp"
#include "hetanova/rng.hpp"

namespace hetanova {

namespace {

// Regularized lower incomplete gamma P(a, x), series for x < a+1 and the
// Lentz continued fraction for the complement otherwise.
double regularized_gamma_p(double a, double x) {
  if (x <= 0.0) return 0.0;
  const double log_prefix = a * std::log(x) - x - std::lgamma(a);
  if (x < a + 1.0) {
    double term = 1.0 / a;
    double sum = term;
    for (int n = 1; n < 500; ++n) {
      term *= x / (a + n);
      sum += term;
      if (term < sum * 1e-16) break;
    }
    return std::exp(log_prefix) * sum;
  }
  double b = x + 1.0 - a;
  double c = 1e300;
  double d = 1.0 / b;
  double h = d;
  for (int n = 1; n < 500; ++n) {
    const double an = -n * (n - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < 1e-300) d = 1e-300;
    c = b + an / c;
    if (std::abs(c) < 1e-300) c = 1e-300;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return 1.0 - std::exp(log_prefix) * h;
}

double chi_square_cdf(int df, double x) { return regularized_gamma_p(0.5 * df, 0.5 * x); }

}  // namespace

double chi_square_critical(int df, double alpha) {
  if (df < 1) throw InvalidDFError("chi-square degrees of freedom must be >= 1");
  if (!(alpha > 0.0 && alpha < 1.0)) {
    if (alpha >= 1.0) return 0.0;  // upper-alpha quantile collapses at alpha -> 1
    throw InvalidSettingsError("alpha must lie in (0, 1)");
  }
  const double target = 1.0 - alpha;

  double lo = 0.0, hi = df + 10.0;
  while (chi_square_cdf(df, hi) < target) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (chi_square_cdf(df, mid) < target)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-12 * std::max(1.0, hi)) break;
  }
  return 0.5 * (lo + hi);
}

AsymptoticCovariance build_sigma_T(const CellSummaryTable& summary) {
  summary.require_positive_variances();
  const int a = summary.layout.a, b = summary.layout.b;
  const double total = static_cast<double>(summary.layout.total());

  AsymptoticCovariance cov;
  cov.q = a * (a - 1) / 2;
  cov.eta2.assign(a, 0.0);
  // eta_i^2 = (1/b^2) sum_j sigma_ij^2 / r_ij with r_ij = n_ij / N and the
  // unbiased S^2 as the plug-in variance.
  for (int i = 0; i < a; ++i) {
    double s = 0.0;
    for (int j = 0; j < b; ++j) s += summary.var(i, j) * total / summary.layout.n(i, j);
    cov.eta2[i] = s / (static_cast<double>(b) * b);
  }

  cov.pairs.reserve(cov.q);
  for (int i1 = 0; i1 < a; ++i1)
    for (int i2 = i1 + 1; i2 < a; ++i2) cov.pairs.emplace_back(i1, i2);

  cov.tau.resize(cov.q);
  for (int k = 0; k < cov.q; ++k)
    cov.tau[k] = std::sqrt(cov.eta2[cov.pairs[k].first] + cov.eta2[cov.pairs[k].second]);

  // sigma_z[k][l] = (e_{i1} - e_{i2}) diag(eta2) (e_{k1} - e_{k2})^T :
  // shared indices contribute +/- eta2 depending on sign alignment.
  cov.sigma_z.assign(static_cast<std::size_t>(cov.q) * cov.q, 0.0);
  cov.sigma_T.assign(static_cast<std::size_t>(cov.q) * cov.q, 0.0);
  for (int k = 0; k < cov.q; ++k)
    for (int l = 0; l < cov.q; ++l) {
      const auto [i1, i2] = cov.pairs[k];
      const auto [m1, m2] = cov.pairs[l];
      double v = 0.0;
      if (i1 == m1) v += cov.eta2[i1];
      if (i1 == m2) v -= cov.eta2[i1];
      if (i2 == m1) v -= cov.eta2[i2];
      if (i2 == m2) v += cov.eta2[i2];
      cov.sigma_z[static_cast<std::size_t>(k) * cov.q + l] = v;
      cov.sigma_T[static_cast<std::size_t>(k) * cov.q + l] = v / (cov.tau[k] * cov.tau[l]);
    }
  return cov;
}

void McSettings::validate() const {
  if (draws < 100) throw InvalidSettingsError("equicoordinate quantile needs >= 100 draws");
}

double equicoordinate_quantile(const AsymptoticCovariance& cov, double alpha,
                               const McSettings& mc, int threads) {
  mc.validate();
  if (!(alpha > 0.0 && alpha < 1.0))
    throw InvalidSettingsError("alpha must lie in (0, 1)");
  const int q = cov.q;
  if (q < 1) throw InputError("covariance has no contrasts");

  Eigen::MatrixXd sigma(q, q);
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j) sigma(i, j) = cov.sigma_T[static_cast<std::size_t>(i) * q + j];

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sigma);
  double min_eval = eig.eigenvalues().minCoeff();
  const double scale = std::max(1.0, eig.eigenvalues().maxCoeff());
  if (min_eval < -1e-9 * scale) {
    // One shot of diagonal jitter, then give up.
    const double jitter = 1e-12 * sigma.trace() / q;
    sigma.diagonal().array() += jitter;
    eig.compute(sigma);
    min_eval = eig.eigenvalues().minCoeff();
    if (min_eval < -1e-9 * scale)
      throw NotPSDError("covariance matrix is not positive semidefinite (min eigenvalue " +
                        std::to_string(min_eval) + ")");
  }
  Eigen::VectorXd sqrt_evals = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const Eigen::MatrixXd root = eig.eigenvectors() * sqrt_evals.asDiagonal();

  // Fixed-size chunks with per-chunk substreams keep the draw sequence
  // independent of the parallel schedule.
  constexpr long kChunk = 8192;
  const long n_chunks = (mc.draws + kChunk - 1) / kChunk;
  std::vector<double> maxabs(mc.draws, 0.0);
  parallel_for(n_chunks, threads, [&](long chunk) {
    rng::Stream stream =
        rng::derive_stream(mc.seed, rng::kTagEquicoordinate, static_cast<std::uint64_t>(chunk));
    Eigen::VectorXd z(q);
    const long begin = chunk * kChunk;
    const long end = std::min(begin + kChunk, mc.draws);
    for (long d = begin; d < end; ++d) {
      for (int k = 0; k < q; ++k) z(k) = stream.next_normal();
      double m = 0.0;
      for (int k = 0; k < q; ++k) {
        const double g = root.row(k).dot(z);
        m = std::max(m, std::abs(g));
      }
      maxabs[d] = m;
    }
  });
  return empirical_quantile(std::move(maxabs), 1.0 - alpha);
}

AsymptoticTestResult asymptotic_test(const CellSummaryTable& summary, AsymptoticKind kind,
                                     double alpha, const SolverSettings& solver,
                                     const McSettings& mc, int threads) {
  const int a = summary.layout.a, b = summary.layout.b;
  AsymptoticTestResult result;
  result.kind = kind;
  switch (kind) {
    case AsymptoticKind::AlrtInteraction:
      result.statistic = lrt_interaction(summary, solver);
      result.df = (a - 1) * (b - 1);
      break;
    case AsymptoticKind::AlrtSimpleA:
      result.statistic = lrt_simple_A(summary, solver);
      result.df = (a - 1) * b;
      break;
    case AsymptoticKind::AlrtTreatmentA:
      result.statistic = lrt_treatment_A(summary, solver);
      result.df = a - 1;
      break;
    case AsymptoticKind::AmctTreatmentA: {
      result.statistic = mct_treatment_A(summary);
      result.threshold = equicoordinate_quantile(build_sigma_T(summary), alpha, mc, threads);
      result.reject = result.statistic.value > result.threshold;
      return result;
    }
  }
  result.threshold = chi_square_critical(result.df, alpha);
  result.reject = *result.statistic.neg_two_log > result.threshold;
  return result;
}

}  // namespace hetanova
