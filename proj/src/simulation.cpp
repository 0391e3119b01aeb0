#include "hetanova/simulation.hpp"

#include <algorithm>
#include <cmath>

#include "hetanova/errors.hpp"
#include "hetanova/parallel.hpp"

namespace hetanova {

// ---------------------------------------------------------------------------
// Error families
// ---------------------------------------------------------------------------

ErrorFamilySpec ErrorFamilySpec::normal() { return {}; }

ErrorFamilySpec ErrorFamilySpec::normal_mixture(double p, double m1, double v1, double m2,
                                                double v2) {
  ErrorFamilySpec s;
  s.family = ErrorFamily::NormalMixture;
  s.mix_p = p;
  s.mean1 = m1;
  s.var1 = v1;
  s.mean2 = m2;
  s.var2 = v2;
  return s;
}

ErrorFamilySpec ErrorFamilySpec::student_t(double df) {
  ErrorFamilySpec s;
  s.family = ErrorFamily::StudentT;
  s.df = df;
  return s;
}

ErrorFamilySpec ErrorFamilySpec::weibull(double shape, double scale) {
  ErrorFamilySpec s;
  s.family = ErrorFamily::Weibull;
  s.shape = shape;
  s.scale = scale;
  return s;
}

ErrorFamilySpec ErrorFamilySpec::laplace(double location, double scale) {
  ErrorFamilySpec s;
  s.family = ErrorFamily::Laplace;
  s.location = location;
  s.scale = scale;
  return s;
}

void ErrorFamilySpec::validate() const {
  switch (family) {
    case ErrorFamily::Normal:
      return;
    case ErrorFamily::NormalMixture:
      if (!(mix_p >= 0.0 && mix_p <= 1.0))
        throw InvalidFamilyParamsError("mixture weight must lie in [0, 1]");
      if (!(var1 > 0.0) || !(var2 > 0.0))
        throw InvalidFamilyParamsError("mixture component variances must be positive");
      if (!(analytic_var() > 0.0))
        throw InvalidFamilyParamsError("mixture variance must be positive");
      return;
    case ErrorFamily::StudentT:
      // df > 2 so the variance used for standardization is finite.
      if (!(df > 2.0)) throw InvalidFamilyParamsError("Student t needs df > 2");
      return;
    case ErrorFamily::Weibull:
      if (!(shape > 0.0) || !(scale > 0.0))
        throw InvalidFamilyParamsError("Weibull shape and scale must be positive");
      return;
    case ErrorFamily::Laplace:
      if (!(scale > 0.0)) throw InvalidFamilyParamsError("Laplace scale must be positive");
      return;
  }
  throw InvalidFamilyParamsError("unknown error family");
}

double ErrorFamilySpec::analytic_mean() const {
  switch (family) {
    case ErrorFamily::Normal: return 0.0;
    case ErrorFamily::NormalMixture: return mix_p * mean1 + (1.0 - mix_p) * mean2;
    case ErrorFamily::StudentT: return 0.0;
    case ErrorFamily::Weibull: return scale * std::tgamma(1.0 + 1.0 / shape);
    case ErrorFamily::Laplace: return location;
  }
  return 0.0;
}

double ErrorFamilySpec::analytic_var() const {
  switch (family) {
    case ErrorFamily::Normal:
      return 1.0;
    case ErrorFamily::NormalMixture: {
      const double m = analytic_mean();
      return mix_p * (var1 + mean1 * mean1) + (1.0 - mix_p) * (var2 + mean2 * mean2) - m * m;
    }
    case ErrorFamily::StudentT:
      return df / (df - 2.0);
    case ErrorFamily::Weibull: {
      const double g1 = std::tgamma(1.0 + 1.0 / shape);
      return scale * scale * (std::tgamma(1.0 + 2.0 / shape) - g1 * g1);
    }
    case ErrorFamily::Laplace:
      return 2.0 * scale * scale;
  }
  return 1.0;
}

double ErrorFamilySpec::draw(rng::Stream& stream) const {
  switch (family) {
    case ErrorFamily::Normal:
      return stream.next_normal();
    case ErrorFamily::NormalMixture: {
      const bool first = stream.next_uniform() < mix_p;
      const double z = stream.next_normal();
      return first ? mean1 + std::sqrt(var1) * z : mean2 + std::sqrt(var2) * z;
    }
    case ErrorFamily::StudentT: {
      const double z = stream.next_normal();
      const double chi2 = 2.0 * stream.next_gamma(0.5 * df);
      return z / std::sqrt(chi2 / df);
    }
    case ErrorFamily::Weibull:
      return scale * std::pow(-std::log(stream.next_uniform()), 1.0 / shape);
    case ErrorFamily::Laplace: {
      const double u = stream.next_uniform() - 0.5;
      return location - scale * (u < 0.0 ? -1.0 : 1.0) * std::log(1.0 - 2.0 * std::abs(u));
    }
  }
  return 0.0;
}

std::string ErrorFamilySpec::name() const {
  switch (family) {
    case ErrorFamily::Normal: return "normal";
    case ErrorFamily::NormalMixture: return "normal_mixture";
    case ErrorFamily::StudentT: return "student_t";
    case ErrorFamily::Weibull: return "weibull";
    case ErrorFamily::Laplace: return "laplace";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Config
// ---------------------------------------------------------------------------

void SimulationConfig::validate() const {
  layout.validate();
  errors.validate();
  if (static_cast<int>(alpha_vec.size()) != layout.a)
    throw DimensionMismatchError("alpha_vec length must equal a");
  if (static_cast<int>(beta_vec.size()) != layout.b)
    throw DimensionMismatchError("beta_vec length must equal b");
  if (!gamma.empty()) {
    if (gamma.rows() != layout.a || gamma.cols() != layout.b)
      throw DimensionMismatchError("gamma grid must be a x b");
    for (int i = 0; i < layout.a; ++i) {
      double s = 0.0;
      for (int j = 0; j < layout.b; ++j) s += gamma(i, j);
      if (std::abs(s) > 1e-9)
        throw InputError("gamma row " + std::to_string(i + 1) + " violates the zero-sum constraint");
    }
    for (int j = 0; j < layout.b; ++j) {
      double s = 0.0;
      for (int i = 0; i < layout.a; ++i) s += gamma(i, j);
      if (std::abs(s) > 1e-9)
        throw InputError("gamma column " + std::to_string(j + 1) +
                         " violates the zero-sum constraint");
    }
  }
  if (sigma2.rows() != layout.a || sigma2.cols() != layout.b)
    throw DimensionMismatchError("sigma2 grid must be a x b");
  for (double v : sigma2.data())
    if (!(v > 0.0)) throw InputError("every sigma2 entry must be positive");
  if (outer_reps < 1) throw InvalidSettingsError("outer_reps must be >= 1");
  if (tests.empty()) throw InvalidSettingsError("config requests no tests");
  for (const TestRequest& t : tests) {
    TestRequest checked = t;
    checked.bootstrap = bootstrap;  // inner settings come from the config
    checked.validate();
  }
}

double SimulationConfig::cell_mean(int i, int j) const {
  double m = mu + effect_scale * alpha_vec[i] + beta_vec[j];
  if (!gamma.empty()) m += gamma(i, j);
  return m;
}

double TestOutcome::std_error(long outer) const {
  const long v = valid(outer);
  if (v <= 0) return 0.0;
  const double p = proportion(outer);
  return std::sqrt(p * (1.0 - p) / v);
}

// ---------------------------------------------------------------------------
// Generation and study loop
// ---------------------------------------------------------------------------

RawDataset generate_dataset(const SimulationConfig& config, long replicate_index) {
  config.errors.validate();
  rng::Stream stream = rng::derive_stream(config.seed, rng::kTagDataGen,
                                          static_cast<std::uint64_t>(replicate_index));
  const double mu_x = config.errors.analytic_mean();
  const double sd_x = std::sqrt(config.errors.analytic_var());

  RawDataset data;
  data.records.reserve(config.layout.total());
  for (int i = 0; i < config.layout.a; ++i)
    for (int j = 0; j < config.layout.b; ++j) {
      const double m = config.cell_mean(i, j);
      const double sd = std::sqrt(config.sigma2(i, j));
      for (int k = 0; k < config.layout.n(i, j); ++k) {
        const double x = config.errors.draw(stream);
        data.records.push_back({i + 1, j + 1, m + sd * (x - mu_x) / sd_x});
      }
    }
  return data;
}

namespace {

struct ReplicateCounts {
  std::vector<long> rejections;
  std::vector<long> failures;
};

bool is_bootstrap_method(TestMethod m) {
  return m == TestMethod::LrtBoot || m == TestMethod::MctBoot;
}

bool target_transposes(TestTarget t) {
  return t == TestTarget::SimpleB || t == TestTarget::TreatmentB;
}

StatisticKind kind_for_request(const TestRequest& t) {
  const bool lrt = t.method == TestMethod::LrtBoot;
  switch (t.target) {
    case TestTarget::Interaction:
      return lrt ? StatisticKind::LrtInteraction : StatisticKind::MctInteraction;
    case TestTarget::SimpleA:
    case TestTarget::SimpleB:
      return lrt ? StatisticKind::LrtSimpleA : StatisticKind::MctSimpleA;
    default:
      return lrt ? StatisticKind::LrtTreatmentA : StatisticKind::MctTreatmentA;
  }
}

// One outer replicate. All bootstrap requests on the same orientation share
// a single set of inner draws; asymptotic requests need none.
void run_replicate(const SimulationConfig& config, long rep, ReplicateCounts& counts) {
  const RawDataset data = generate_dataset(config, rep);
  const CellSummaryTable summary = summarize(data, config.layout);

  CellSummaryTable transposed;
  bool have_transposed = false;

  for (int orientation = 0; orientation < 2; ++orientation) {
    // Gather the bootstrap kinds this orientation needs.
    std::vector<StatisticKind> kinds;
    SolverSettings batch_solver;
    for (const TestRequest& t : config.tests) {
      if (!is_bootstrap_method(t.method)) continue;
      if (static_cast<int>(target_transposes(t.target)) != orientation) continue;
      if (kinds.empty()) batch_solver = t.solver;
      const StatisticKind k = kind_for_request(t);
      if (std::find(kinds.begin(), kinds.end(), k) == kinds.end()) kinds.push_back(k);
    }
    if (kinds.empty()) continue;

    if (orientation == 1 && !have_transposed) {
      transposed = summary.transposed();
      have_transposed = true;
    }
    const CellSummaryTable& oriented = orientation == 1 ? transposed : summary;

    BootstrapSettings inner = config.bootstrap;
    inner.seed = rng::derive_stream(config.seed, rng::kTagInnerBootstrap,
                                    static_cast<std::uint64_t>(rep),
                                    static_cast<std::uint64_t>(orientation))
                     .next_u64();
    MultiNullSample null_samples;
    bool batch_failed = false;
    try {
      null_samples = bootstrap_null_samples(oriented, kinds, inner, batch_solver, 1);
    } catch (const NumericalError&) {
      batch_failed = true;
    }

    for (std::size_t t = 0; t < config.tests.size(); ++t) {
      const TestRequest& req = config.tests[t];
      if (!is_bootstrap_method(req.method)) continue;
      if (static_cast<int>(target_transposes(req.target)) != orientation) continue;
      if (batch_failed) {
        ++counts.failures[t];
        continue;
      }
      try {
        const StatisticKind kind = kind_for_request(req);
        const double observed = compute_statistic(kind, oriented, req.solver).value;
        const std::vector<double>& null_sample = null_samples.sample_for(kind);
        if (tail_for_kind(kind) == Tail::Lower) {
          const double crit = empirical_quantile(null_sample, req.alpha);
          counts.rejections[t] += observed < crit;
        } else {
          const double crit = empirical_quantile(null_sample, 1.0 - req.alpha);
          counts.rejections[t] += observed > crit;
        }
      } catch (const NumericalError&) {
        ++counts.failures[t];
      }
    }
  }

  for (std::size_t t = 0; t < config.tests.size(); ++t) {
    const TestRequest& req = config.tests[t];
    if (is_bootstrap_method(req.method)) continue;
    try {
      TestRequest local = req;
      local.mc.seed = rng::derive_stream(config.seed, rng::kTagEquicoordinate,
                                         static_cast<std::uint64_t>(rep))
                          .next_u64();
      const TestReport report = run_test(summary, local, 1);
      counts.rejections[t] += report.decision == Decision::Reject;
    } catch (const NumericalError&) {
      ++counts.failures[t];
    }
  }
}

}  // namespace

SimulationResult run_study(const SimulationConfig& config, int threads) {
  config.validate();
  const std::size_t n_tests = config.tests.size();

  std::vector<ReplicateCounts> per_rep(config.outer_reps);
  parallel_for(config.outer_reps, threads, [&](long rep) {
    ReplicateCounts& counts = per_rep[rep];
    counts.rejections.assign(n_tests, 0);
    counts.failures.assign(n_tests, 0);
    run_replicate(config, rep, counts);
  });

  SimulationResult result;
  result.config_id = config.id;
  result.effect_scale = config.effect_scale;
  result.outer_reps = config.outer_reps;
  result.outcomes.resize(n_tests);
  for (std::size_t t = 0; t < n_tests; ++t) {
    result.outcomes[t].target = config.tests[t].target;
    result.outcomes[t].method = config.tests[t].method;
    for (long r = 0; r < config.outer_reps; ++r) {
      result.outcomes[t].rejections += per_rep[r].rejections[t];
      result.outcomes[t].failures += per_rep[r].failures[t];
    }
  }
  return result;
}

std::vector<SimulationResult> size_power_grid(
    const std::vector<SimulationConfig>& configs, int threads,
    const std::function<void(const SimulationResult&)>& on_result) {
  std::vector<SimulationResult> results;
  results.reserve(configs.size());
  for (const SimulationConfig& config : configs) {
    results.push_back(run_study(config, threads));
    if (on_result) on_result(results.back());
  }
  return results;
}

}  // namespace hetanova
