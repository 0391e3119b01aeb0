#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "hetanova/data.hpp"
#include "hetanova/solvers.hpp"

namespace hetanova {

enum class StatisticKind {
  LrtInteraction,   // lambda_AB
  LrtSimpleA,       // lambda_A*
  LrtTreatmentA,    // lambda_A
  MctInteraction,   // Q
  MctSimpleA,       // R
  MctTreatmentA,    // T
  ClassicalFA,      // homoscedastic baseline F for factor A
};

bool is_lrt_kind(StatisticKind kind);
bool is_mct_kind(StatisticKind kind);
// LRT kinds need at least one iterative fit per evaluation.
bool kind_uses_solver(StatisticKind kind);
std::string statistic_kind_name(StatisticKind kind);

// One standardized pairwise contrast. idx holds 0-based indices whose
// meaning depends on the statistic: {i, j1, j2} for the interaction family,
// {i1, i2, j} for simple effects, {i1, i2, -1} for treatment effects.
struct ContrastComponent {
  std::array<int, 3> idx{-1, -1, -1};
  double value = 0.0;
};

struct StatisticValue {
  StatisticKind kind = StatisticKind::LrtInteraction;
  double value = 0.0;
  std::optional<double> neg_two_log;        // LRT kinds: -2 log(value)
  std::vector<ContrastComponent> detail;    // MCT kinds: all components

  // Diagnostics from the fits behind an LRT evaluation.
  int solver_iterations = 0;   // max over the fits involved
  bool solver_converged = true;
};

// lambda_AB: product over cells of (sigma2_full / sigma2_noInteraction)^(n/2),
// accumulated in log space.
StatisticValue lrt_interaction(const CellSummaryTable& summary, const SolverSettings& settings);

// lambda_A*: full space against the no-simple-A space.
StatisticValue lrt_simple_A(const CellSummaryTable& summary, const SolverSettings& settings);

// lambda_A: no-interaction space against the no-simple-A space (both
// constrained fits; the additive-model treatment test).
StatisticValue lrt_treatment_A(const CellSummaryTable& summary, const SolverSettings& settings);

// Q = max |interaction contrast| over (i, j1 < j2).
StatisticValue mct_interaction(const CellSummaryTable& summary);

// R = max |simple-effect contrast| over (i1 < i2, j).
StatisticValue mct_simple_A(const CellSummaryTable& summary);

// T = max |standardized treatment-mean difference| over i1 < i2.
StatisticValue mct_treatment_A(const CellSummaryTable& summary);

// Classical two-way ANOVA F for factor A assuming homogeneous variances
// (weighted row means against the pooled within-cell error). Simulation
// baseline only.
StatisticValue classical_F_A(const CellSummaryTable& summary);

// Dispatcher used by the bootstrap engine and the simulation harness.
StatisticValue compute_statistic(StatisticKind kind, const CellSummaryTable& summary,
                                 const SolverSettings& settings);

}  // namespace hetanova
