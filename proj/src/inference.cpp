#include "hetanova/inference.hpp"

#include <cmath>
#include <string>

#include "hetanova/errors.hpp"
#include "hetanova/version.hpp"

namespace hetanova {

namespace {

bool is_treatment(TestTarget t) {
  return t == TestTarget::TreatmentA || t == TestTarget::TreatmentB;
}

bool needs_transpose(TestTarget t) {
  return t == TestTarget::SimpleB || t == TestTarget::TreatmentB;
}

StatisticKind statistic_for(TestTarget target, TestMethod method) {
  const bool lrt = method == TestMethod::LrtBoot || method == TestMethod::LrtAsymptotic;
  switch (target) {
    case TestTarget::Interaction:
      return lrt ? StatisticKind::LrtInteraction : StatisticKind::MctInteraction;
    case TestTarget::SimpleA:
    case TestTarget::SimpleB:
      return lrt ? StatisticKind::LrtSimpleA : StatisticKind::MctSimpleA;
    case TestTarget::TreatmentA:
    case TestTarget::TreatmentB:
      return lrt ? StatisticKind::LrtTreatmentA : StatisticKind::MctTreatmentA;
  }
  throw InputError("unknown test target");
}

AsymptoticKind asymptotic_kind_for(TestTarget target, TestMethod method) {
  if (method == TestMethod::MctAsymptotic) return AsymptoticKind::AmctTreatmentA;
  switch (target) {
    case TestTarget::Interaction: return AsymptoticKind::AlrtInteraction;
    case TestTarget::SimpleA:
    case TestTarget::SimpleB: return AsymptoticKind::AlrtSimpleA;
    case TestTarget::TreatmentA:
    case TestTarget::TreatmentB: return AsymptoticKind::AlrtTreatmentA;
  }
  throw InputError("unknown test target");
}

std::string pair_label(const std::string& prefix, int i1, int i2) {
  return prefix + std::to_string(i1 + 1) + "-" + prefix + std::to_string(i2 + 1);
}

}  // namespace

std::string target_name(TestTarget target) {
  switch (target) {
    case TestTarget::Interaction: return "interaction";
    case TestTarget::SimpleA: return "simpleA";
    case TestTarget::SimpleB: return "simpleB";
    case TestTarget::TreatmentA: return "treatmentA";
    case TestTarget::TreatmentB: return "treatmentB";
  }
  return "unknown";
}

std::string method_name(TestMethod method) {
  switch (method) {
    case TestMethod::LrtBoot: return "lrt";
    case TestMethod::MctBoot: return "mct";
    case TestMethod::LrtAsymptotic: return "alrt";
    case TestMethod::MctAsymptotic: return "amct";
  }
  return "unknown";
}

std::string family_name(CiFamily family) {
  switch (family) {
    case CiFamily::InteractionPairs: return "interaction";
    case CiFamily::SimpleAPairs: return "simpleA";
    case CiFamily::TreatmentAPairs: return "treatmentA";
  }
  return "unknown";
}

void TestRequest::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw InvalidSettingsError("alpha must lie strictly between 0 and 1");
  if (method == TestMethod::MctAsymptotic && !is_treatment(target))
    throw UnsupportedCombinationError(
        "the asymptotic MCT is defined for treatment effects only (target " +
        target_name(target) + " is not supported)");
  solver.validate();
  if (method == TestMethod::LrtBoot || method == TestMethod::MctBoot) bootstrap.validate();
}

TestReport run_test(const CellSummaryTable& summary, const TestRequest& request, int threads) {
  request.validate();
  const CellSummaryTable* data = &summary;
  CellSummaryTable transposed;
  if (needs_transpose(request.target)) {
    transposed = summary.transposed();
    data = &transposed;
  }
  data->require_positive_variances();

  TestReport report;
  report.request = request;
  report.version = std::string(kVersion);

  if (request.method == TestMethod::LrtBoot || request.method == TestMethod::MctBoot) {
    BootstrapSettings bs = request.bootstrap;
    bs.alpha = request.alpha;
    const StatisticKind kind = statistic_for(request.target, request.method);
    const StatisticValue observed = compute_statistic(kind, *data, request.solver);
    BootstrapResult boot = bootstrap_test(*data, kind, bs, request.solver, threads);
    report.statistic = observed;
    report.critical_value = boot.critical_value;
    report.p_value = boot.p_value;
    report.tail = boot.tail;
    report.decision = boot.reject() ? Decision::Reject : Decision::FailToReject;
    report.diagnostics.seed = bs.seed;
    report.diagnostics.replicates = bs.replicates;
    report.diagnostics.nonconverged_redraws = boot.nonconverged_redraws;
    report.diagnostics.observed_fit_iterations = observed.solver_iterations;
    return report;
  }

  const AsymptoticTestResult res = asymptotic_test(*data, asymptotic_kind_for(request.target, request.method),
                                                   request.alpha, request.solver, request.mc, threads);
  report.statistic = res.statistic;
  report.critical_value = res.threshold;
  report.decision = res.reject ? Decision::Reject : Decision::FailToReject;
  report.diagnostics.observed_fit_iterations = res.statistic.solver_iterations;
  report.diagnostics.df = res.df;
  if (request.method == TestMethod::MctAsymptotic) {
    report.diagnostics.seed = request.mc.seed;
    report.diagnostics.replicates = request.mc.draws;
  }
  return report;
}

SimultaneousCI simultaneous_ci(const CellSummaryTable& summary, CiFamily family, double alpha,
                               const BootstrapSettings& bootstrap, const SolverSettings& solver,
                               int threads) {
  summary.require_positive_variances();
  if (!(alpha > 0.0 && alpha < 1.0))
    throw InvalidSettingsError("alpha must lie strictly between 0 and 1");
  BootstrapSettings bs = bootstrap;
  bs.alpha = alpha;

  StatisticKind kind;
  switch (family) {
    case CiFamily::InteractionPairs: kind = StatisticKind::MctInteraction; break;
    case CiFamily::SimpleAPairs: kind = StatisticKind::MctSimpleA; break;
    case CiFamily::TreatmentAPairs: kind = StatisticKind::MctTreatmentA; break;
    default: throw InputError("unknown CI family");
  }
  // One null sample shared by the whole family; the multiplier is its upper
  // (1 - alpha) quantile, so interval significance and the global MCT
  // decision agree exactly.
  const std::vector<double> null_sample = bootstrap_null_sample(summary, kind, bs, solver, threads);
  const double multiplier = empirical_quantile(null_sample, 1.0 - alpha);

  const int a = summary.layout.a, b = summary.layout.b;
  const Marginals marg = marginals(summary);

  SimultaneousCI out;
  out.family = family;
  out.level = 1.0 - alpha;
  out.multiplier = multiplier;
  out.seed = bs.seed;
  out.replicates = bs.replicates;

  auto push = [&](std::string label, double estimate, double half_width) {
    IntervalRow row;
    row.label = std::move(label);
    row.estimate = estimate;
    row.lower = estimate - half_width;
    row.upper = estimate + half_width;
    row.significant = row.lower > 0.0 || row.upper < 0.0;
    out.intervals.push_back(std::move(row));
  };

  switch (family) {
    case CiFamily::InteractionPairs: {
      std::vector<double> col_ratio_sum(b, 0.0);
      for (int i = 0; i < a; ++i)
        for (int j = 0; j < b; ++j) col_ratio_sum[j] += summary.var(i, j) / summary.layout.n(i, j);
      const double edge = 1.0 - 2.0 / a;
      for (int i = 0; i < a; ++i)
        for (int j1 = 0; j1 < b; ++j1)
          for (int j2 = j1 + 1; j2 < b; ++j2) {
            const double s2 = edge * (summary.var(i, j1) / summary.layout.n(i, j1)) +
                              edge * (summary.var(i, j2) / summary.layout.n(i, j2)) +
                              (col_ratio_sum[j1] + col_ratio_sum[j2]) / (static_cast<double>(a) * a);
            const double est =
                summary.mean(i, j1) - summary.mean(i, j2) - marg.col[j1] + marg.col[j2];
            push("A" + std::to_string(i + 1) + ":" + pair_label("B", j1, j2), est,
                 multiplier * std::sqrt(s2));
          }
      break;
    }
    case CiFamily::SimpleAPairs: {
      for (int i1 = 0; i1 < a; ++i1)
        for (int i2 = i1 + 1; i2 < a; ++i2)
          for (int j = 0; j < b; ++j) {
            const double s2 = summary.var(i1, j) / summary.layout.n(i1, j) +
                              summary.var(i2, j) / summary.layout.n(i2, j);
            push(pair_label("A", i1, i2) + ":B" + std::to_string(j + 1),
                 summary.mean(i1, j) - summary.mean(i2, j), multiplier * std::sqrt(s2));
          }
      break;
    }
    case CiFamily::TreatmentAPairs: {
      std::vector<double> row_ratio_sum(a, 0.0);
      for (int i = 0; i < a; ++i)
        for (int j = 0; j < b; ++j) row_ratio_sum[i] += summary.var(i, j) / summary.layout.n(i, j);
      for (int i1 = 0; i1 < a; ++i1)
        for (int i2 = i1 + 1; i2 < a; ++i2)
          push(pair_label("A", i1, i2), marg.row[i1] - marg.row[i2],
               multiplier / b * std::sqrt(row_ratio_sum[i1] + row_ratio_sum[i2]));
      break;
    }
  }
  return out;
}

PairwiseDecisions pairwise_decisions(const CellSummaryTable& summary, double alpha,
                                     CriticalSource source, const BootstrapSettings& bootstrap,
                                     const SolverSettings& solver, const McSettings& mc,
                                     int threads) {
  summary.require_positive_variances();
  PairwiseDecisions out;
  out.source = source;
  if (source == CriticalSource::Bootstrap) {
    BootstrapSettings bs = bootstrap;
    bs.alpha = alpha;
    const std::vector<double> null_sample =
        bootstrap_null_sample(summary, StatisticKind::MctTreatmentA, bs, solver, threads);
    out.critical_value = empirical_quantile(null_sample, 1.0 - alpha);
  } else {
    out.critical_value = equicoordinate_quantile(build_sigma_T(summary), alpha, mc, threads);
  }

  const StatisticValue t = mct_treatment_A(summary);
  for (const ContrastComponent& c : t.detail) {
    PairDecision d;
    d.i1 = c.idx[0];
    d.i2 = c.idx[1];
    d.statistic = c.value;
    d.reject = std::abs(c.value) > out.critical_value;
    out.pairs.push_back(d);
  }
  return out;
}

}  // namespace hetanova
