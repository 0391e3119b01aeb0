#include "hetanova/statistics.hpp"

#include <algorithm>
#include <cmath>

#include "hetanova/errors.hpp"

namespace hetanova {

namespace {

StatisticValue lrt_from_fits(StatisticKind kind, const CellSummaryTable& summary,
                             const FittedModel& numerator, const FittedModel& denominator) {
  double log_lambda = 0.0;
  for (int i = 0; i < summary.layout.a; ++i)
    for (int j = 0; j < summary.layout.b; ++j)
      log_lambda += 0.5 * summary.layout.n(i, j) *
                    (std::log(numerator.sigma2(i, j)) - std::log(denominator.sigma2(i, j)));
  // Nested maximized likelihoods give lambda <= 1; clamp the roundoff spill.
  log_lambda = std::min(log_lambda, 0.0);

  StatisticValue out;
  out.kind = kind;
  out.value = std::exp(log_lambda);
  out.neg_two_log = -2.0 * log_lambda;
  out.solver_iterations = std::max(numerator.iterations, denominator.iterations);
  out.solver_converged = numerator.converged && denominator.converged;
  return out;
}

StatisticValue mct_from_components(StatisticKind kind, std::vector<ContrastComponent> detail) {
  StatisticValue out;
  out.kind = kind;
  out.detail = std::move(detail);
  for (const ContrastComponent& c : out.detail) out.value = std::max(out.value, std::abs(c.value));
  return out;
}

}  // namespace

bool is_lrt_kind(StatisticKind kind) {
  return kind == StatisticKind::LrtInteraction || kind == StatisticKind::LrtSimpleA ||
         kind == StatisticKind::LrtTreatmentA;
}

bool is_mct_kind(StatisticKind kind) {
  return kind == StatisticKind::MctInteraction || kind == StatisticKind::MctSimpleA ||
         kind == StatisticKind::MctTreatmentA;
}

bool kind_uses_solver(StatisticKind kind) { return is_lrt_kind(kind); }

std::string statistic_kind_name(StatisticKind kind) {
  switch (kind) {
    case StatisticKind::LrtInteraction: return "lrt_interaction";
    case StatisticKind::LrtSimpleA: return "lrt_simple_A";
    case StatisticKind::LrtTreatmentA: return "lrt_treatment_A";
    case StatisticKind::MctInteraction: return "mct_interaction";
    case StatisticKind::MctSimpleA: return "mct_simple_A";
    case StatisticKind::MctTreatmentA: return "mct_treatment_A";
    case StatisticKind::ClassicalFA: return "classical_F_A";
  }
  return "unknown";
}

StatisticValue lrt_interaction(const CellSummaryTable& summary, const SolverSettings& settings) {
  const FittedModel full = fit_full(summary);
  const FittedModel null_fit = fit_null_no_interaction(summary, settings);
  return lrt_from_fits(StatisticKind::LrtInteraction, summary, full, null_fit);
}

StatisticValue lrt_simple_A(const CellSummaryTable& summary, const SolverSettings& settings) {
  const FittedModel full = fit_full(summary);
  const FittedModel null_fit = fit_null_no_simple_A(summary, settings);
  return lrt_from_fits(StatisticKind::LrtSimpleA, summary, full, null_fit);
}

StatisticValue lrt_treatment_A(const CellSummaryTable& summary, const SolverSettings& settings) {
  const FittedModel additive = fit_null_no_interaction(summary, settings);
  const FittedModel null_fit = fit_null_no_simple_A(summary, settings);
  return lrt_from_fits(StatisticKind::LrtTreatmentA, summary, additive, null_fit);
}

StatisticValue mct_interaction(const CellSummaryTable& summary) {
  summary.require_positive_variances();
  const int a = summary.layout.a, b = summary.layout.b;
  const Marginals marg = marginals(summary);

  // Column sums of S^2/n, shared by every denominator in column pair (j1, j2).
  std::vector<double> col_ratio_sum(b, 0.0);
  for (int i = 0; i < a; ++i)
    for (int j = 0; j < b; ++j) col_ratio_sum[j] += summary.var(i, j) / summary.layout.n(i, j);

  const double edge = 1.0 - 2.0 / a;
  std::vector<ContrastComponent> detail;
  detail.reserve(static_cast<std::size_t>(a) * b * (b - 1) / 2);
  for (int i = 0; i < a; ++i)
    for (int j1 = 0; j1 < b; ++j1)
      for (int j2 = j1 + 1; j2 < b; ++j2) {
        const double s2 = edge * (summary.var(i, j1) / summary.layout.n(i, j1)) +
                          edge * (summary.var(i, j2) / summary.layout.n(i, j2)) +
                          (col_ratio_sum[j1] + col_ratio_sum[j2]) / (static_cast<double>(a) * a);
        const double numerator =
            summary.mean(i, j1) - summary.mean(i, j2) - marg.col[j1] + marg.col[j2];
        detail.push_back({{i, j1, j2}, numerator / std::sqrt(s2)});
      }
  return mct_from_components(StatisticKind::MctInteraction, std::move(detail));
}

StatisticValue mct_simple_A(const CellSummaryTable& summary) {
  summary.require_positive_variances();
  const int a = summary.layout.a, b = summary.layout.b;

  // nu_i1j - nu_i2j = ybar_i1j - ybar_i2j; the column marginals cancel.
  std::vector<ContrastComponent> detail;
  detail.reserve(static_cast<std::size_t>(b) * a * (a - 1) / 2);
  for (int i1 = 0; i1 < a; ++i1)
    for (int i2 = i1 + 1; i2 < a; ++i2)
      for (int j = 0; j < b; ++j) {
        const double s2 = summary.var(i1, j) / summary.layout.n(i1, j) +
                          summary.var(i2, j) / summary.layout.n(i2, j);
        detail.push_back({{i1, i2, j}, (summary.mean(i1, j) - summary.mean(i2, j)) / std::sqrt(s2)});
      }
  return mct_from_components(StatisticKind::MctSimpleA, std::move(detail));
}

StatisticValue mct_treatment_A(const CellSummaryTable& summary) {
  summary.require_positive_variances();
  const int a = summary.layout.a, b = summary.layout.b;
  const Marginals marg = marginals(summary);

  std::vector<double> row_ratio_sum(a, 0.0);
  for (int i = 0; i < a; ++i)
    for (int j = 0; j < b; ++j) row_ratio_sum[i] += summary.var(i, j) / summary.layout.n(i, j);

  std::vector<ContrastComponent> detail;
  detail.reserve(static_cast<std::size_t>(a) * (a - 1) / 2);
  for (int i1 = 0; i1 < a; ++i1)
    for (int i2 = i1 + 1; i2 < a; ++i2) {
      const double t = b * (marg.row[i1] - marg.row[i2]) /
                       std::sqrt(row_ratio_sum[i1] + row_ratio_sum[i2]);
      detail.push_back({{i1, i2, -1}, t});
    }
  return mct_from_components(StatisticKind::MctTreatmentA, std::move(detail));
}

StatisticValue classical_F_A(const CellSummaryTable& summary) {
  summary.require_positive_variances();
  const int a = summary.layout.a, b = summary.layout.b;
  const long total = summary.layout.total();

  // Weighted row means and grand mean, pooled within-cell error.
  std::vector<double> row_sum(a, 0.0);
  std::vector<long> row_n(a, 0);
  double grand_sum = 0.0, sse = 0.0;
  for (int i = 0; i < a; ++i)
    for (int j = 0; j < b; ++j) {
      const int n = summary.layout.n(i, j);
      row_sum[i] += n * summary.mean(i, j);
      row_n[i] += n;
      grand_sum += n * summary.mean(i, j);
      sse += (n - 1) * summary.var(i, j);
    }
  const double grand = grand_sum / total;

  double ssa = 0.0;
  for (int i = 0; i < a; ++i) {
    const double diff = row_sum[i] / row_n[i] - grand;
    ssa += row_n[i] * diff * diff;
  }
  const long df_error = total - static_cast<long>(a) * b;
  if (df_error <= 0) throw InputError("classical F needs N > a*b observations");

  StatisticValue out;
  out.kind = StatisticKind::ClassicalFA;
  out.value = (ssa / (a - 1)) / (sse / df_error);
  return out;
}

StatisticValue compute_statistic(StatisticKind kind, const CellSummaryTable& summary,
                                 const SolverSettings& settings) {
  switch (kind) {
    case StatisticKind::LrtInteraction: return lrt_interaction(summary, settings);
    case StatisticKind::LrtSimpleA: return lrt_simple_A(summary, settings);
    case StatisticKind::LrtTreatmentA: return lrt_treatment_A(summary, settings);
    case StatisticKind::MctInteraction: return mct_interaction(summary);
    case StatisticKind::MctSimpleA: return mct_simple_A(summary);
    case StatisticKind::MctTreatmentA: return mct_treatment_A(summary);
    case StatisticKind::ClassicalFA: return classical_F_A(summary);
  }
  throw InputError("unknown statistic kind");
}

}  // namespace hetanova
