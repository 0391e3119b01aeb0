#include "hetanova/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hetanova/errors.hpp"
#include "hetanova/parallel.hpp"

namespace hetanova {

void BootstrapSettings::validate() const {
  if (replicates < 100)
    throw InvalidSettingsError("bootstrap needs at least 100 replicates for a reported "
                               "critical value, got " + std::to_string(replicates));
  if (!(alpha > 0.0 && alpha < 1.0))
    throw InvalidSettingsError("alpha must lie strictly between 0 and 1");
  if (max_redraws < 0) throw InvalidSettingsError("max_redraws must be nonnegative");
}

Tail tail_for_kind(StatisticKind kind) {
  if (is_lrt_kind(kind)) return Tail::Lower;
  return Tail::Upper;
}

long quantile_rank(long count, double p) {
  long rank = static_cast<long>(std::ceil(p * static_cast<double>(count) - 1e-9));
  return std::clamp(rank, 1L, count);
}

double empirical_quantile(std::vector<double> values, double p) {
  if (values.empty()) throw InputError("quantile of an empty sample");
  const long rank = quantile_rank(static_cast<long>(values.size()), p);
  std::nth_element(values.begin(), values.begin() + (rank - 1), values.end());
  return values[rank - 1];
}

CellSummaryTable draw_bootstrap_summary(const CellSummaryTable& observed, rng::Stream& stream,
                                        std::vector<double>& scratch) {
  const int a = observed.layout.a, b = observed.layout.b;
  DGrid mean(a, b, 0.0), var(a, b, 0.0);
  for (int i = 0; i < a; ++i)
    for (int j = 0; j < b; ++j) {
      const int n = observed.layout.n(i, j);
      const double sd = std::sqrt(observed.var(i, j));
      scratch.resize(n);
      stream.fill_normals(scratch.data(), n, 0.0, sd);
      double sum = 0.0;
      for (int k = 0; k < n; ++k) sum += scratch[k];
      const double m = sum / n;
      double ss = 0.0;
      for (int k = 0; k < n; ++k) {
        const double d = scratch[k] - m;
        ss += d * d;
      }
      mean(i, j) = m;
      var(i, j) = ss / (n - 1);
    }
  return CellSummaryTable(observed.layout, std::move(mean), std::move(var));
}

namespace {

// One replicate of the shared-draw engine: draws, evaluates every kind,
// redraws when a required fit fails to converge.
void run_replicate(const CellSummaryTable& summary, const std::vector<StatisticKind>& kinds,
                   const BootstrapSettings& settings, const SolverSettings& solver,
                   bool any_solver_kind, long replicate, std::vector<double>& scratch,
                   std::vector<std::vector<double>>& samples, long& redraws) {
  for (int attempt = 0;; ++attempt) {
    rng::Stream stream = rng::derive_stream(settings.seed, rng::kTagBootstrap,
                                            static_cast<std::uint64_t>(replicate),
                                            static_cast<std::uint64_t>(attempt));
    const CellSummaryTable draw = draw_bootstrap_summary(summary, stream, scratch);

    bool all_converged = true;
    std::vector<double> values(kinds.size());
    for (std::size_t k = 0; k < kinds.size(); ++k) {
      const StatisticValue v = compute_statistic(kinds[k], draw, solver);
      values[k] = v.value;
      all_converged = all_converged && v.solver_converged;
    }
    if (all_converged || !any_solver_kind) {
      for (std::size_t k = 0; k < kinds.size(); ++k) samples[k][replicate] = values[k];
      return;
    }
    ++redraws;
    if (attempt >= settings.max_redraws)
      throw ExcessiveNonConvergenceError(
          "bootstrap replicate " + std::to_string(replicate) + " exceeded " +
          std::to_string(settings.max_redraws) + " refit retries without convergence");
  }
}

}  // namespace

MultiNullSample bootstrap_null_samples(const CellSummaryTable& summary,
                                       const std::vector<StatisticKind>& kinds,
                                       const BootstrapSettings& settings,
                                       const SolverSettings& solver, int threads) {
  settings.validate();
  solver.validate();
  summary.require_positive_variances();
  for (StatisticKind kind : kinds)
    if (kind == StatisticKind::ClassicalFA)
      throw UnsupportedCombinationError("the classical F baseline has no bootstrap null");

  bool any_solver_kind = false;
  for (StatisticKind kind : kinds) any_solver_kind = any_solver_kind || kind_uses_solver(kind);

  MultiNullSample out;
  out.kinds = kinds;
  out.samples.assign(kinds.size(), std::vector<double>(settings.replicates, 0.0));

  std::vector<long> redraw_counts(settings.replicates, 0);
  parallel_for(settings.replicates, threads, [&](long r) {
    thread_local std::vector<double> scratch;
    run_replicate(summary, kinds, settings, solver, any_solver_kind, r, scratch, out.samples,
                  redraw_counts[r]);
  });
  for (long c : redraw_counts) out.nonconverged_redraws += c;
  return out;
}

const std::vector<double>& MultiNullSample::sample_for(StatisticKind kind) const {
  for (std::size_t k = 0; k < kinds.size(); ++k)
    if (kinds[k] == kind) return samples[k];
  throw InputError("statistic kind missing from the null-sample batch");
}

std::vector<double> bootstrap_null_sample(const CellSummaryTable& summary, StatisticKind kind,
                                          const BootstrapSettings& settings,
                                          const SolverSettings& solver, int threads,
                                          long* redraws) {
  MultiNullSample multi = bootstrap_null_samples(summary, {kind}, settings, solver, threads);
  if (redraws) *redraws += multi.nonconverged_redraws;
  return std::move(multi.samples.front());
}

BootstrapResult bootstrap_test(const CellSummaryTable& summary, StatisticKind kind,
                               const BootstrapSettings& settings, const SolverSettings& solver,
                               int threads) {
  BootstrapResult result;
  result.kind = kind;
  result.tail = tail_for_kind(kind);
  result.observed = compute_statistic(kind, summary, solver).value;
  result.null_sample =
      bootstrap_null_sample(summary, kind, settings, solver, threads, &result.nonconverged_redraws);

  const double p = result.tail == Tail::Lower ? settings.alpha : 1.0 - settings.alpha;
  result.critical_value = empirical_quantile(result.null_sample, p);

  long count = 0;
  if (result.tail == Tail::Lower) {
    for (double v : result.null_sample) count += v <= result.observed;
  } else {
    for (double v : result.null_sample) count += v >= result.observed;
  }
  result.p_value = static_cast<double>(count) / static_cast<double>(result.null_sample.size());
  return result;
}

}  // namespace hetanova
