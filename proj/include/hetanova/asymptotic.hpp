#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "hetanova/data.hpp"
#include "hetanova/solvers.hpp"
#include "hetanova/statistics.hpp"

namespace hetanova {

// Upper-alpha quantile of the chi-square distribution with df degrees of
// freedom (the Wilks critical value for the asymptotic LRTs).
double chi_square_critical(int df, double alpha);

// Large-sample covariance of the standardized treatment-difference vector.
// sigma_z is assembled from the pairwise-difference matrix identity
// A diag(eta^2) A^T; sigma_T = D^-1 sigma_z D^-1 has unit diagonal.
struct AsymptoticCovariance {
  int q = 0;                                  // a(a-1)/2 pairwise contrasts
  std::vector<std::pair<int, int>> pairs;     // 0-based (i1, i2), i1 < i2
  std::vector<double> sigma_z;                // row-major q x q
  std::vector<double> sigma_T;                // row-major q x q, unit diagonal
  std::vector<double> tau;                    // sqrt(eta2[i1] + eta2[i2]) per pair
  std::vector<double> eta2;                   // length a
};

AsymptoticCovariance build_sigma_T(const CellSummaryTable& summary);

struct McSettings {
  long draws = 200000;
  std::uint64_t seed = 0x0C0FFEE0ULL;  // internal default, overridable

  void validate() const;
};

// Equicoordinate two-sided quantile: d with P(max_k |G_k| <= d) = 1 - alpha
// for G ~ N_q(0, sigma_T), estimated by seeded Monte Carlo over a symmetric
// square root of sigma_T. Deterministic given the seed, any thread count.
double equicoordinate_quantile(const AsymptoticCovariance& cov, double alpha,
                               const McSettings& mc = {}, int threads = 0);

enum class AsymptoticKind {
  AlrtInteraction,
  AlrtSimpleA,
  AlrtTreatmentA,
  AmctTreatmentA,
};

struct AsymptoticTestResult {
  AsymptoticKind kind = AsymptoticKind::AlrtInteraction;
  StatisticValue statistic;
  double threshold = 0.0;  // chi-square critical on the -2 log scale, or the MCT quantile
  bool reject = false;
  int df = 0;              // ALRT kinds only
};

// ALRT kinds reject when -2 log(lambda) exceeds the chi-square critical value
// with df (a-1)(b-1), (a-1)b or (a-1); the asymptotic MCT rejects when T
// exceeds the equicoordinate quantile of the plug-in covariance.
AsymptoticTestResult asymptotic_test(const CellSummaryTable& summary, AsymptoticKind kind,
                                     double alpha, const SolverSettings& solver,
                                     const McSettings& mc = {}, int threads = 0);

}  // namespace hetanova
