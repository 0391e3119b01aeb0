#include "hetanova/solvers.hpp"

#include <cmath>
#include <string>

#include "hetanova/errors.hpp"

namespace hetanova {

namespace {

constexpr double kLog2Pi = 1.8378770664093454835606594728112;

// Biased (n-divisor) variance from the stored unbiased one.
inline double biased_var(const CellSummaryTable& s, int i, int j) {
  const double n = s.layout.n(i, j);
  return (n - 1.0) / n * s.var(i, j);
}

}  // namespace

void SolverSettings::validate() const {
  if (!(epsilon > 0.0)) throw InvalidSettingsError("solver epsilon must be positive");
  if (max_iterations < 1) throw InvalidSettingsError("solver max_iterations must be >= 1");
}

FittedModel fit_full(const CellSummaryTable& summary) {
  summary.require_positive_variances();
  const int a = summary.layout.a, b = summary.layout.b;
  const Marginals m = marginals(summary);

  FittedModel model;
  model.space = ParameterSpace::FullOmega;
  model.mu = m.grand;
  model.alpha.assign(a, 0.0);
  model.zeta.assign(b, 0.0);
  model.gamma = DGrid(a, b, 0.0);
  model.sigma2 = DGrid(a, b, 0.0);
  for (int i = 0; i < a; ++i) model.alpha[i] = m.row[i] - m.grand;
  // zeta_j = mu + beta_j, so the fitted cell mean is alpha_i + zeta_j + gamma_ij.
  for (int j = 0; j < b; ++j) model.zeta[j] = m.col[j];
  for (int i = 0; i < a; ++i)
    for (int j = 0; j < b; ++j) {
      (*model.gamma)(i, j) = summary.mean(i, j) - m.row[i] - m.col[j] + m.grand;
      model.sigma2(i, j) = biased_var(summary, i, j);
    }
  model.iterations = 0;
  model.converged = true;
  model.loglik = log_likelihood(summary, model);
  return model;
}

namespace {

// Sweep-by-sweep likelihood for the optional trace.
double trace_loglik(const CellSummaryTable& summary, ParameterSpace space,
                    const std::vector<double>& alpha, const std::vector<double>& zeta,
                    const DGrid& sigma2) {
  FittedModel snapshot;
  snapshot.space = space;
  snapshot.alpha = alpha;
  snapshot.zeta = zeta;
  snapshot.sigma2 = sigma2;
  return log_likelihood(summary, snapshot);
}

}  // namespace

FittedModel fit_null_no_interaction(const CellSummaryTable& summary,
                                    const SolverSettings& settings,
                                    std::vector<double>* loglik_trace) {
  settings.validate();
  summary.require_positive_variances();
  const int a = summary.layout.a, b = summary.layout.b;
  const Marginals marg = marginals(summary);

  // Start from row means / centered column means / biased variances. The
  // first sweep absorbs the grand-mean offset of this start into zeta.
  std::vector<double> alpha(marg.row);
  std::vector<double> zeta(b);
  for (int j = 0; j < b; ++j) zeta[j] = marg.col[j] - marg.grand;
  DGrid sigma2(a, b, 0.0);
  for (int i = 0; i < a; ++i)
    for (int j = 0; j < b; ++j) sigma2(i, j) = biased_var(summary, i, j);

  std::vector<double> u(static_cast<std::size_t>(a) * b);  // n_ij / sigma2_ij
  std::vector<double> w(a);                                // row sums of u
  std::vector<double> rhs(a - 1);
  std::vector<double> alpha_new(a), zeta_new(b);

  bool converged = false;
  int iter = 0;
  for (; iter < settings.max_iterations; ++iter) {
    for (int i = 0; i < a; ++i) {
      double wi = 0.0;
      for (int j = 0; j < b; ++j) {
        const double uij = summary.layout.n(i, j) / sigma2(i, j);
        u[static_cast<std::size_t>(i) * b + j] = uij;
        wi += uij;
      }
      w[i] = wi;
    }
    for (int i = 0; i < a; ++i)
      if (!(w[i] > 0.0) || !std::isfinite(w[i]))
        throw SingularSystemError("nonpositive precision weight in row " + std::to_string(i + 1));

    // Right-hand side u_i = sum_j u_ij (ybar_ij - zeta_j) - sum_j u_aj (ybar_aj - zeta_j).
    double last_row = 0.0;
    for (int j = 0; j < b; ++j)
      last_row += u[static_cast<std::size_t>(a - 1) * b + j] * (summary.mean(a - 1, j) - zeta[j]);
    for (int i = 0; i < a - 1; ++i) {
      double s = 0.0;
      for (int j = 0; j < b; ++j)
        s += u[static_cast<std::size_t>(i) * b + j] * (summary.mean(i, j) - zeta[j]);
      rhs[i] = s - last_row;
    }

    // Solve (diag(w_1..w_{a-1}) + w_a 11^T) x = rhs by Sherman-Morrison.
    double sum_x = 0.0, sum_inv = 0.0;
    for (int i = 0; i < a - 1; ++i) {
      sum_x += rhs[i] / w[i];
      sum_inv += 1.0 / w[i];
    }
    const double correction = w[a - 1] * sum_x / (1.0 + w[a - 1] * sum_inv);
    double tail = 0.0;
    for (int i = 0; i < a - 1; ++i) {
      alpha_new[i] = (rhs[i] - correction) / w[i];
      tail += alpha_new[i];
    }
    alpha_new[a - 1] = -tail;

    for (int j = 0; j < b; ++j) {
      double num = 0.0, den = 0.0;
      for (int i = 0; i < a; ++i) {
        const double uij = u[static_cast<std::size_t>(i) * b + j];
        num += uij * (summary.mean(i, j) - alpha_new[i]);
        den += uij;
      }
      zeta_new[j] = num / den;
    }

    for (int i = 0; i < a; ++i)
      for (int j = 0; j < b; ++j) {
        const double resid = summary.mean(i, j) - alpha_new[i] - zeta_new[j];
        sigma2(i, j) = biased_var(summary, i, j) + resid * resid;
      }

    double da = 0.0, dz = 0.0;
    for (int i = 0; i < a; ++i) da = std::max(da, std::abs(alpha_new[i] - alpha[i]));
    for (int j = 0; j < b; ++j) dz = std::max(dz, std::abs(zeta_new[j] - zeta[j]));
    alpha = alpha_new;
    zeta = zeta_new;
    if (loglik_trace)
      loglik_trace->push_back(
          trace_loglik(summary, ParameterSpace::NullNoInteraction, alpha, zeta, sigma2));
    if (da <= settings.epsilon && dz <= settings.epsilon) {
      converged = true;
      ++iter;
      break;
    }
  }

  FittedModel model;
  model.space = ParameterSpace::NullNoInteraction;
  model.alpha = std::move(alpha);
  model.zeta = std::move(zeta);
  model.sigma2 = std::move(sigma2);
  model.iterations = iter;
  model.converged = converged;
  model.loglik = log_likelihood(summary, model);
  return model;
}

FittedModel fit_null_no_simple_A(const CellSummaryTable& summary, const SolverSettings& settings,
                                 std::vector<double>* loglik_trace) {
  settings.validate();
  summary.require_positive_variances();
  const int a = summary.layout.a, b = summary.layout.b;
  const Marginals marg = marginals(summary);

  std::vector<double> zeta(marg.col);
  DGrid sigma2(a, b, 0.0);
  for (int i = 0; i < a; ++i)
    for (int j = 0; j < b; ++j) sigma2(i, j) = biased_var(summary, i, j);

  bool converged = false;
  int iter = 0;
  for (; iter < settings.max_iterations; ++iter) {
    double dz = 0.0;
    for (int j = 0; j < b; ++j) {
      double num = 0.0, den = 0.0;
      for (int i = 0; i < a; ++i) {
        const double uij = summary.layout.n(i, j) / sigma2(i, j);
        num += uij * summary.mean(i, j);
        den += uij;
      }
      const double zj = num / den;
      dz = std::max(dz, std::abs(zj - zeta[j]));
      zeta[j] = zj;
    }
    for (int i = 0; i < a; ++i)
      for (int j = 0; j < b; ++j) {
        const double resid = summary.mean(i, j) - zeta[j];
        sigma2(i, j) = biased_var(summary, i, j) + resid * resid;
      }
    if (loglik_trace)
      loglik_trace->push_back(trace_loglik(summary, ParameterSpace::NullNoSimpleA,
                                           std::vector<double>(a, 0.0), zeta, sigma2));
    if (dz <= settings.epsilon) {
      converged = true;
      ++iter;
      break;
    }
  }

  FittedModel model;
  model.space = ParameterSpace::NullNoSimpleA;
  model.alpha.assign(a, 0.0);
  model.zeta = std::move(zeta);
  model.sigma2 = std::move(sigma2);
  model.iterations = iter;
  model.converged = converged;
  model.loglik = log_likelihood(summary, model);
  return model;
}

double log_likelihood(const CellSummaryTable& summary, const FittedModel& model) {
  const int a = summary.layout.a, b = summary.layout.b;
  if (model.sigma2.rows() != a || model.sigma2.cols() != b ||
      static_cast<int>(model.alpha.size()) != a || static_cast<int>(model.zeta.size()) != b)
    throw DimensionMismatchError("model dimensions do not match summary layout");

  double ll = 0.0;
  long total = 0;
  for (int i = 0; i < a; ++i)
    for (int j = 0; j < b; ++j) {
      const double n = summary.layout.n(i, j);
      const double s2 = model.sigma2(i, j);
      const double dev = summary.mean(i, j) - model.fitted_mean(i, j);
      // Exact sufficient-statistic decomposition of the residual sum:
      // sum_k (y - m)^2 = (n-1) S^2 + n (ybar - m)^2.
      ll += -0.5 * n * std::log(s2) -
            ((n - 1.0) * summary.var(i, j) + n * dev * dev) / (2.0 * s2);
      total += summary.layout.n(i, j);
    }
  return ll - 0.5 * static_cast<double>(total) * kLog2Pi;
}

}  // namespace hetanova
