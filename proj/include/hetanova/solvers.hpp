#pragma once

#include <optional>
#include <vector>

#include "hetanova/data.hpp"

namespace hetanova {

// Parameter space the model was maximized over. FullOmega leaves every cell
// mean free; NullNoInteraction keeps additive means alpha_i + zeta_j with
// sum(alpha) = 0; NullNoSimpleA reduces cell means to column values zeta_j.
enum class ParameterSpace {
  FullOmega,
  NullNoInteraction,
  NullNoSimpleA,
};

struct SolverSettings {
  double epsilon = 1e-8;      // tolerance on successive parameter changes
  int max_iterations = 10000;

  void validate() const;
};

// Estimates under one parameter space, with solver diagnostics. Cell means
// decompose as alpha[i] + zeta[j] + gamma(i,j) in every space (alpha and
// gamma are zero where the space pins them), so fitted_mean() is uniform.
struct FittedModel {
  ParameterSpace space = ParameterSpace::FullOmega;
  std::optional<double> mu;      // grand mean; populated for the full space only
  std::vector<double> alpha;     // length a, sums to zero when free
  std::vector<double> zeta;      // length b (zeta_j = mu + beta_j)
  std::optional<DGrid> gamma;    // interaction estimates; full space only
  DGrid sigma2;                  // cell-wise variance MLEs, all positive
  double loglik = 0.0;
  int iterations = 0;
  bool converged = false;

  double fitted_mean(int i, int j) const {
    double m = alpha.empty() ? 0.0 : alpha[i];
    m += zeta.empty() ? 0.0 : zeta[j];
    if (gamma) m += (*gamma)(i, j);
    return m;
  }
};

// Closed-form maximum likelihood under the unrestricted space: cell means
// are the sample means, cell variances the n-divisor sample variances.
FittedModel fit_full(const CellSummaryTable& summary);

// Fixed-point coordinate ascent for the no-interaction space. Each sweep
// solves the (a-1)-dimensional weighted system for alpha, updates zeta by
// precision-weighted means, then refreshes sigma2; stops when both alpha and
// zeta move at most epsilon. On iteration exhaustion the last iterate is
// returned with converged = false. Every sweep is an exact conditional
// maximization, so the log-likelihood never decreases; `loglik_trace`
// (when given) records it after each sweep.
FittedModel fit_null_no_interaction(const CellSummaryTable& summary, const SolverSettings& settings,
                                    std::vector<double>* loglik_trace = nullptr);

// Fixed-point iteration for the no-simple-A space (cell means zeta_j only).
FittedModel fit_null_no_simple_A(const CellSummaryTable& summary, const SolverSettings& settings,
                                 std::vector<double>* loglik_trace = nullptr);

// Gaussian log-likelihood of the model at the summary, in sufficient-statistic
// form, including the -(N/2) log(2 pi) constant.
double log_likelihood(const CellSummaryTable& summary, const FittedModel& model);

}  // namespace hetanova
