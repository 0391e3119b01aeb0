#pragma once

#include <cstdint>
#include <vector>

#include "hetanova/data.hpp"
#include "hetanova/rng.hpp"
#include "hetanova/statistics.hpp"

namespace hetanova {

struct BootstrapSettings {
  int replicates = 5000;       // H
  double alpha = 0.05;         // significance level
  std::uint64_t seed = 0;
  int max_redraws = 10;        // per-replicate refit retries

  void validate() const;
};

enum class Tail {
  Lower,  // LRT kinds: reject when the observed statistic is small
  Upper,  // MCT kinds: reject when it is large
};

Tail tail_for_kind(StatisticKind kind);

struct BootstrapResult {
  StatisticKind kind = StatisticKind::LrtInteraction;
  double observed = 0.0;
  double critical_value = 0.0;
  double p_value = 0.0;
  Tail tail = Tail::Lower;
  std::vector<double> null_sample;   // H replicate statistic values
  long nonconverged_redraws = 0;

  bool reject() const {
    return tail == Tail::Lower ? observed < critical_value : observed > critical_value;
  }
};

// Empirical quantile as the order statistic at rank ceil(p * H), 1-based.
// A tiny backoff keeps p * H that is an integer in exact arithmetic from
// being bumped up a rank by floating-point spill.
double empirical_quantile(std::vector<double> values, double p);

// Rank helper shared with reporting code.
long quantile_rank(long count, double p);

// Draws one bootstrap summary: every cell gets n_ij independent N(0, S_ij^2)
// values (unbiased variance of the observed data), reduced to mean/variance.
// The generator never sees the observed means, so the null draw is location
// invariant by construction.
CellSummaryTable draw_bootstrap_summary(const CellSummaryTable& observed, rng::Stream& stream,
                                        std::vector<double>& scratch);

// Null distribution of `kind` under the fitted null: exactly
// settings.replicates values, deterministic given (seed, summary, kind,
// settings) for any thread count. Replicates whose constrained fit fails to
// converge are redrawn on a fresh substream up to max_redraws times; the
// total number of redraws is added to *redraws when given.
std::vector<double> bootstrap_null_sample(const CellSummaryTable& summary, StatisticKind kind,
                                          const BootstrapSettings& settings,
                                          const SolverSettings& solver, int threads = 0,
                                          long* redraws = nullptr);

// Same pass evaluating several statistic kinds on shared draws; used by the
// simulation harness where one inner bootstrap feeds every requested test.
struct MultiNullSample {
  std::vector<StatisticKind> kinds;
  std::vector<std::vector<double>> samples;  // one vector of H values per kind
  long nonconverged_redraws = 0;

  const std::vector<double>& sample_for(StatisticKind kind) const;
};

MultiNullSample bootstrap_null_samples(const CellSummaryTable& summary,
                                       const std::vector<StatisticKind>& kinds,
                                       const BootstrapSettings& settings,
                                       const SolverSettings& solver, int threads = 0);

// Observed statistic plus its bootstrap critical value, p-value and tail.
BootstrapResult bootstrap_test(const CellSummaryTable& summary, StatisticKind kind,
                               const BootstrapSettings& settings, const SolverSettings& solver,
                               int threads = 0);

}  // namespace hetanova
