// Acceptance suite: one pass/fail line per criterion. Every tolerance is
// pinned in code. Returns nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "hetanova/asymptotic.hpp"
#include "hetanova/bootstrap.hpp"
#include "hetanova/inference.hpp"
#include "hetanova/presets.hpp"
#include "hetanova/simulation.hpp"
#include "oracles.hpp"
#include "reference_data.hpp"

using namespace hetanova;

namespace {

int g_failed = 0;

struct Criterion {
  const char* name;
  bool ok = true;
  std::vector<std::string> notes;

  void expect(bool condition, const std::string& note) {
    notes.push_back(std::string(condition ? "    ok:   " : "    BAD:  ") + note);
    ok = ok && condition;
  }
  void info(const std::string& note) { notes.push_back("    note: " + note); }
};

void report(const Criterion& c, double seconds) {
  std::printf("[%s] %s  (%.1fs)\n", c.ok ? "PASS" : "FAIL", c.name, seconds);
  for (const std::string& n : c.notes) std::printf("%s\n", n.c_str());
  if (!c.ok) ++g_failed;
}

template <typename F>
void run_criterion(const char* name, F body) {
  Criterion c{name, true, {}};
  const auto start = std::chrono::steady_clock::now();
  body(c);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report(c, seconds);
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// 1. Reference-data deterministic statistics
// ---------------------------------------------------------------------------

void criterion1(Criterion& c) {
  const auto start = std::chrono::steady_clock::now();
  const CellSummaryTable s = student_grades_summary();
  const SolverSettings solver;

  const double lambda_ab = lrt_interaction(s, solver).value;
  const double q = mct_interaction(s).value;
  const double lambda_a = lrt_treatment_A(s, solver).value;
  const double t = mct_treatment_A(s).value;
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  c.expect(std::abs(lambda_ab - 0.127625) / 0.127625 <= 0.05,
           "lambda_AB = " + fmt(lambda_ab) + " within 5% of 0.127625");
  c.expect(std::abs(q - 1.1839) <= 0.001, "Q = " + fmt(q) + " within 0.001 of 1.1839");
  // The printed 0.0003 has four decimals; accept the implied rounding window
  // (on the -2 log scale this is [15.91, 16.59]).
  c.expect(lambda_a >= 0.00025 && lambda_a <= 0.00035,
           "lambda_A = " + fmt(lambda_a) + " rounds to 0.0003 at four decimals (-2 log = " +
               fmt(-2.0 * std::log(lambda_a)) + ")");
  c.expect(std::abs(t - 3.6708) <= 0.001, "T = " + fmt(t) + " within 0.001 of 3.6708");
  c.expect(seconds < 1.0, "runtime " + fmt(seconds) + "s < 1s");
}

// ---------------------------------------------------------------------------
// 2. Reference-data decisions across 20 seeds
// ---------------------------------------------------------------------------

void criterion2(Criterion& c) {
  const CellSummaryTable s = student_grades_summary();
  int good_seeds = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto request = [&](TestTarget target, TestMethod method) {
      TestRequest r;
      r.target = target;
      r.method = method;
      r.alpha = 0.05;
      r.bootstrap.replicates = 5000;
      r.bootstrap.seed = seed;
      return r;
    };
    const bool interaction_lrt_holds =
        run_test(s, request(TestTarget::Interaction, TestMethod::LrtBoot)).decision ==
        Decision::FailToReject;
    const bool interaction_mct_holds =
        run_test(s, request(TestTarget::Interaction, TestMethod::MctBoot)).decision ==
        Decision::FailToReject;
    const bool treatment_lrt_holds =
        run_test(s, request(TestTarget::TreatmentA, TestMethod::LrtBoot)).decision ==
        Decision::Reject;
    const bool treatment_mct_holds =
        run_test(s, request(TestTarget::TreatmentA, TestMethod::MctBoot)).decision ==
        Decision::Reject;

    BootstrapSettings bs;
    bs.replicates = 5000;
    bs.seed = seed;
    const SimultaneousCI ci = simultaneous_ci(s, CiFamily::TreatmentAPairs, 0.05, bs, {});
    const bool ci_holds = ci.intervals[1].upper < 0.0 && ci.intervals[3].upper < 0.0;

    const bool all = interaction_lrt_holds && interaction_mct_holds && treatment_lrt_holds &&
                     treatment_mct_holds && ci_holds;
    good_seeds += all;
    if (!all)
      c.info("seed " + std::to_string(seed) + " deviated (" +
             std::to_string(interaction_lrt_holds) + std::to_string(interaction_mct_holds) +
             std::to_string(treatment_lrt_holds) + std::to_string(treatment_mct_holds) +
             std::to_string(ci_holds) + ")");
  }
  c.expect(good_seeds >= 19,
           std::to_string(good_seeds) + "/20 seeds reproduce all decisions (need >= 19)");
}

// ---------------------------------------------------------------------------
// 3. Size reproduction for the small-sample balanced column
// ---------------------------------------------------------------------------

void criterion3(Criterion& c) {
  // First sample-size column (all cells 5) against each variance pattern,
  // published sizes for the treatment LRT and MCT at alpha = 0.05.
  const double published_lrt[5] = {0.053, 0.052, 0.052, 0.055, 0.061};
  const double published_mct[5] = {0.046, 0.047, 0.050, 0.053, 0.052};

  PresetOptions opt;
  opt.outer_reps = 2000;
  opt.inner_reps = 1000;
  opt.seed = 2026;
  const std::vector<SimulationConfig> grid = make_preset("table3", opt);

  for (int rho = 0; rho < 5; ++rho) {
    const SimulationConfig& cfg = grid[rho];  // N1 block occupies the first five entries
    const SimulationResult r = run_study(cfg, 0);
    const double lrt = r.outcomes[0].proportion(r.outer_reps);
    const double mct = r.outcomes[1].proportion(r.outer_reps);
    c.expect(std::abs(lrt - published_lrt[rho]) <= 0.015,
             cfg.id + " LRT size " + fmt(lrt) + " within 0.015 of " + fmt(published_lrt[rho]));
    c.expect(std::abs(mct - published_mct[rho]) <= 0.015,
             cfg.id + " MCT size " + fmt(mct) + " within 0.015 of " + fmt(published_mct[rho]));
  }
}

// ---------------------------------------------------------------------------
// 4. Asymptotic sizes at moderate balanced samples
// ---------------------------------------------------------------------------

void criterion4(Criterion& c) {
  SimulationConfig cfg;
  cfg.id = "asymptotic-size";
  cfg.layout = Layout::balanced(2, 3, 25);
  cfg.alpha_vec = {0, 0};
  cfg.beta_vec = {0, 0, 0};
  cfg.sigma2 = DGrid(2, 3, 1.0);
  cfg.outer_reps = 2000;
  cfg.seed = 20260;
  TestRequest alrt;
  alrt.target = TestTarget::TreatmentA;
  alrt.method = TestMethod::LrtAsymptotic;
  TestRequest amct = alrt;
  amct.method = TestMethod::MctAsymptotic;
  cfg.tests = {alrt, amct};
  cfg.bootstrap.replicates = 100;  // unused by asymptotic methods

  const SimulationResult r = run_study(cfg, 0);
  const double alrt_size = r.outcomes[0].proportion(r.outer_reps);
  const double amct_size = r.outcomes[1].proportion(r.outer_reps);
  c.expect(std::abs(alrt_size - 0.053) <= 0.015,
           "ALRT size " + fmt(alrt_size) + " within 0.015 of 0.053");
  c.expect(std::abs(amct_size - 0.054) <= 0.015,
           "AMCT size " + fmt(amct_size) + " within 0.015 of 0.054");
}

// ---------------------------------------------------------------------------
// 5. Power at two alternatives
// ---------------------------------------------------------------------------

void criterion5(Criterion& c) {
  // Balanced cells of 10, variances (0.1, 0.1, 0.1, 0.5, 0.5, 0.5),
  // alternatives (alpha_1, alpha_2) = (0, 0.4) and (0, 0.6).
  const struct {
    double alpha2;
    double floor;
    double published_lrt;
    double published_mct;
  } cases[2] = {{0.4, 0.70, 0.732, 0.778}, {0.6, 0.95, 0.968, 0.985}};

  for (const auto& cs : cases) {
    SimulationConfig cfg;
    cfg.id = "power-a2-" + fmt(cs.alpha2);
    cfg.layout = Layout::balanced(2, 3, 10);
    cfg.alpha_vec = {0.0, cs.alpha2};
    cfg.beta_vec = {0, 0, 0};
    cfg.sigma2 = DGrid(2, 3, {0.1, 0.1, 0.1, 0.5, 0.5, 0.5});
    cfg.outer_reps = 2000;
    cfg.bootstrap.replicates = 1000;
    cfg.seed = 20265 + static_cast<std::uint64_t>(10 * cs.alpha2);
    TestRequest lrt;
    lrt.target = TestTarget::TreatmentA;
    lrt.method = TestMethod::LrtBoot;
    TestRequest mct = lrt;
    mct.method = TestMethod::MctBoot;
    cfg.tests = {lrt, mct};

    const SimulationResult r = run_study(cfg, 0);
    const double lrt_power = r.outcomes[0].proportion(r.outer_reps);
    const double mct_power = r.outcomes[1].proportion(r.outer_reps);
    c.expect(lrt_power > cs.floor && std::abs(lrt_power - cs.published_lrt) <= 0.03,
             "LRT power " + fmt(lrt_power) + " at (0," + fmt(cs.alpha2) + ") within 0.03 of " +
                 fmt(cs.published_lrt) + " and above " + fmt(cs.floor));
    c.expect(mct_power > cs.floor && std::abs(mct_power - cs.published_mct) <= 0.03,
             "MCT power " + fmt(mct_power) + " at (0," + fmt(cs.alpha2) + ") within 0.03 of " +
                 fmt(cs.published_mct) + " and above " + fmt(cs.floor));
  }
}

// ---------------------------------------------------------------------------
// 6. Property suites
// ---------------------------------------------------------------------------

void criterion6a(Criterion& c) {
  // Coordinate-ascent monotonicity over 200 randomized summaries.
  rng::Stream stream = rng::derive_stream(600, 1);
  long violations = 0;
  for (int rep = 0; rep < 200; ++rep) {
    const CellSummaryTable s =
        oracles::random_summary(2 + rep % 4, 2 + (rep / 4) % 3, stream, 2.0);
    std::vector<double> trace;
    fit_null_no_interaction(s, {}, &trace);
    for (std::size_t k = 1; k < trace.size(); ++k)
      violations += trace[k] < trace[k - 1] - 1e-10;
    trace.clear();
    fit_null_no_simple_A(s, {}, &trace);
    for (std::size_t k = 1; k < trace.size(); ++k)
      violations += trace[k] < trace[k - 1] - 1e-10;
  }
  c.expect(violations == 0, "monotonicity violations beyond 1e-10: " + std::to_string(violations) +
                                " across 200 randomized summaries");
}

void criterion6b(Criterion& c) {
  // Stationarity residuals at convergence, parameter scale, <= 10 epsilon.
  rng::Stream stream = rng::derive_stream(601, 1);
  const SolverSettings settings;
  double worst = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    const int a = 2 + rep % 4, b = 2 + (rep / 4) % 3;
    const CellSummaryTable s = oracles::random_summary(a, b, stream);
    const FittedModel m = fit_null_no_interaction(s, settings);
    if (!m.converged) continue;

    // One refreshed sweep from the returned estimates.
    std::vector<double> u(static_cast<std::size_t>(a) * b), w(a, 0.0);
    for (int i = 0; i < a; ++i)
      for (int j = 0; j < b; ++j) {
        u[i * b + j] = s.layout.n(i, j) / m.sigma2(i, j);
        w[i] += u[i * b + j];
      }
    double last = 0.0;
    for (int j = 0; j < b; ++j) last += u[(a - 1) * b + j] * (s.mean(a - 1, j) - m.zeta[j]);
    double sum_x = 0.0, sum_inv = 0.0;
    std::vector<double> rhs(a - 1);
    for (int i = 0; i < a - 1; ++i) {
      double acc = 0.0;
      for (int j = 0; j < b; ++j) acc += u[i * b + j] * (s.mean(i, j) - m.zeta[j]);
      rhs[i] = acc - last;
      sum_x += rhs[i] / w[i];
      sum_inv += 1.0 / w[i];
    }
    const double corr = w[a - 1] * sum_x / (1.0 + w[a - 1] * sum_inv);
    for (int i = 0; i < a - 1; ++i)
      worst = std::max(worst, std::abs((rhs[i] - corr) / w[i] - m.alpha[i]));
    for (int j = 0; j < b; ++j) {
      double num = 0.0, den = 0.0;
      for (int i = 0; i < a; ++i) {
        num += u[i * b + j] * (s.mean(i, j) - m.alpha[i]);
        den += u[i * b + j];
      }
      worst = std::max(worst, std::abs(num / den - m.zeta[j]));
    }
    for (int i = 0; i < a; ++i)
      for (int j = 0; j < b; ++j) {
        const double n = s.layout.n(i, j);
        const double resid = s.mean(i, j) - m.alpha[i] - m.zeta[j];
        worst = std::max(worst,
                         std::abs((n - 1.0) / n * s.var(i, j) + resid * resid - m.sigma2(i, j)));
      }
  }
  c.expect(worst <= 10 * settings.epsilon,
           "worst stationarity residual " + fmt(worst) + " <= 10 epsilon");
}

void criterion6c(Criterion& c) {
  // Fixed-point fits against the dense optimizer on 50 random 3x3 instances.
  rng::Stream stream = rng::derive_stream(602, 1);
  double worst = 0.0;
  for (int rep = 0; rep < 50; ++rep) {
    const CellSummaryTable s = oracles::random_summary(3, 3, stream);
    const FittedModel no_int = fit_null_no_interaction(s, {});
    const oracles::ConstrainedFitOracle oracle = oracles::fit_no_interaction_oracle(s);
    for (int i = 0; i < 3; ++i) worst = std::max(worst, std::abs(no_int.alpha[i] - oracle.alpha[i]));
    for (int j = 0; j < 3; ++j) worst = std::max(worst, std::abs(no_int.zeta[j] - oracle.zeta[j]));
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        worst = std::max(worst, std::abs(no_int.sigma2(i, j) - oracle.sigma2(i, j)));

    const FittedModel no_simple = fit_null_no_simple_A(s, {});
    const oracles::ConstrainedFitOracle oracle4 = oracles::fit_no_simple_A_oracle(s);
    for (int j = 0; j < 3; ++j)
      worst = std::max(worst, std::abs(no_simple.zeta[j] - oracle4.zeta[j]));
  }
  c.expect(worst <= 1e-6, "worst |fit - oracle| = " + fmt(worst) + " <= 1e-6 on 50 3x3 instances");
}

void criterion6d(Criterion& c) {
  // Block-structure equivalence of sigma_z for a in {3, 4, 5}: the
  // difference-matrix identity against the transcribed partitioned layout.
  rng::Stream stream = rng::derive_stream(603, 1);
  double worst = 0.0;
  for (int a : {3, 4, 5}) {
    std::vector<double> eta2(a);
    for (double& v : eta2) v = 0.5 + 2.0 * stream.next_uniform();
    const int b = 2, n = 10;
    const double total = static_cast<double>(a) * b * n;
    DGrid var(a, b, 0.0);
    for (int i = 0; i < a; ++i)
      for (int j = 0; j < b; ++j) var(i, j) = eta2[i] * b * b / total * n / 2.0;
    const AsymptoticCovariance cov =
        build_sigma_T(CellSummaryTable(Layout::balanced(a, b, n), DGrid(a, b, 0.0), var));

    const std::vector<double> expected = oracles::partitioned_sigma_z(a, eta2);
    for (std::size_t k = 0; k < expected.size(); ++k)
      worst = std::max(worst, std::abs(cov.sigma_z[k] - expected[k]));
  }
  c.expect(worst <= 1e-11, "worst block-transcription discrepancy " + fmt(worst));
}

void criterion6e(Criterion& c) {
  // Scale/shift invariance of all six statistics to 1e-10 (tight solver).
  rng::Stream stream = rng::derive_stream(604, 1);
  SolverSettings tight;
  tight.epsilon = 1e-12;
  double worst = 0.0;
  for (int rep = 0; rep < 5; ++rep) {
    const CellSummaryTable s = oracles::random_summary(3, 3, stream);
    auto all_six = [&](const CellSummaryTable& t) {
      return std::vector<double>{lrt_interaction(t, tight).value, lrt_simple_A(t, tight).value,
                                 lrt_treatment_A(t, tight).value, mct_interaction(t).value,
                                 mct_simple_A(t).value,           mct_treatment_A(t).value};
    };
    const std::vector<double> base = all_six(s);

    DGrid mean = s.mean, var = s.var;
    for (auto& v : mean.data()) v *= 2.0;
    for (auto& v : var.data()) v *= 4.0;
    const std::vector<double> scaled = all_six(CellSummaryTable(s.layout, mean, var));

    DGrid shifted_mean = s.mean;
    for (auto& v : shifted_mean.data()) v += 7.0;
    const std::vector<double> shifted = all_six(CellSummaryTable(s.layout, shifted_mean, s.var));

    for (std::size_t k = 0; k < base.size(); ++k) {
      worst = std::max(worst, std::abs(scaled[k] - base[k]));
      worst = std::max(worst, std::abs(shifted[k] - base[k]));
    }
  }
  c.expect(worst <= 1e-10, "worst invariance drift " + fmt(worst) + " <= 1e-10");
}

void criterion6f(Criterion& c) {
  // Bootstrap determinism: identical seed, 1 thread vs many.
  rng::Stream stream = rng::derive_stream(605, 1);
  const CellSummaryTable s = oracles::random_summary(3, 2, stream);
  BootstrapSettings bs;
  bs.replicates = 1000;
  bs.seed = 77;
  bool identical = true;
  for (StatisticKind kind : {StatisticKind::LrtInteraction, StatisticKind::MctTreatmentA}) {
    const BootstrapResult serial = bootstrap_test(s, kind, bs, {}, 1);
    const BootstrapResult parallel = bootstrap_test(s, kind, bs, {}, 16);
    identical = identical && serial.null_sample == parallel.null_sample &&
                serial.critical_value == parallel.critical_value &&
                serial.p_value == parallel.p_value && serial.observed == parallel.observed;
  }
  c.expect(identical, "1-thread and 16-thread bootstrap reports are identical");
}

void criterion6g(Criterion& c) {
  // Distribution closeness at n_ij = 100, H = 2000: bootstrap null sample vs
  // a direct simulation from the true null, and two independent bootstrap
  // null samples against each other.
  const int n = 100, H = 2000;
  const DGrid sigma2(2, 3, {1.0, 2.0, 0.5, 1.5, 1.0, 2.5});
  SimulationConfig gen;
  gen.id = "ks";
  gen.layout = Layout::balanced(2, 3, n);
  gen.alpha_vec = {0, 0};
  gen.beta_vec = {0, 0, 0};
  gen.sigma2 = sigma2;
  gen.outer_reps = 1;
  gen.seed = 606;
  TestRequest dummy;
  dummy.target = TestTarget::Interaction;
  dummy.method = TestMethod::LrtBoot;
  gen.tests = {dummy};

  // One observed dataset; its bootstrap null conditions on the sample
  // variances.
  const CellSummaryTable observed = summarize(generate_dataset(gen, 0), gen.layout);
  BootstrapSettings bs;
  bs.replicates = H;
  bs.seed = 4242;
  const SolverSettings solver;

  for (StatisticKind kind : {StatisticKind::LrtInteraction, StatisticKind::MctInteraction}) {
    const std::vector<double> boot = bootstrap_null_sample(observed, kind, bs, solver);
    BootstrapSettings bs2 = bs;
    bs2.seed = 4243;
    const std::vector<double> boot2 = bootstrap_null_sample(observed, kind, bs2, solver);

    // Direct simulation from the true null model.
    std::vector<double> direct(H);
    for (int h = 0; h < H; ++h) {
      SimulationConfig draw = gen;
      draw.seed = 9000;
      const CellSummaryTable sim = summarize(generate_dataset(draw, h + 1), gen.layout);
      direct[h] = compute_statistic(kind, sim, solver).value;
    }
    const double ks_direct = oracles::ks_distance(boot, direct);
    const double ks_pair = oracles::ks_distance(boot, boot2);
    c.expect(ks_direct < 0.05, statistic_kind_name(kind) + ": KS(bootstrap, direct) = " +
                                   fmt(ks_direct) + " < 0.05");
    c.expect(ks_pair < 0.05, statistic_kind_name(kind) + ": KS(bootstrap, bootstrap') = " +
                                 fmt(ks_pair) + " < 0.05");
  }
}

// ---------------------------------------------------------------------------
// 7. Robustness under heavy-tailed errors
// ---------------------------------------------------------------------------

void criterion7(Criterion& c) {
  SimulationConfig cfg;
  cfg.id = "robustness-t3";
  cfg.layout = Layout::balanced(3, 2, 25);
  cfg.alpha_vec = {0, 0, 0};
  cfg.beta_vec = {0, 0};
  cfg.sigma2 = DGrid(3, 2, {1, 2, 3, 1, 2, 3});
  cfg.errors = ErrorFamilySpec::student_t(3);
  cfg.outer_reps = 2000;
  cfg.bootstrap.replicates = 1000;
  cfg.seed = 20267;
  TestRequest lrt;
  lrt.target = TestTarget::TreatmentA;
  lrt.method = TestMethod::LrtBoot;
  TestRequest mct = lrt;
  mct.method = TestMethod::MctBoot;
  cfg.tests = {lrt, mct};

  const SimulationResult r = run_study(cfg, 0);
  const double lrt_size = r.outcomes[0].proportion(r.outer_reps);
  const double mct_size = r.outcomes[1].proportion(r.outer_reps);
  c.expect(lrt_size >= 0.03 && lrt_size <= 0.07,
           "LRT size under t3 errors = " + fmt(lrt_size) + " in [0.03, 0.07]");
  c.expect(mct_size >= 0.03 && mct_size <= 0.07,
           "MCT size under t3 errors = " + fmt(mct_size) + " in [0.03, 0.07]");
}

}  // namespace

int main() {
  std::printf("acceptance suite (alpha = 0.05 throughout)\n");
  run_criterion("1. reference-data deterministic statistics", criterion1);
  run_criterion("2. reference-data decisions over 20 seeds", criterion2);
  run_criterion("3. bootstrap test sizes, small balanced cells", criterion3);
  run_criterion("4. asymptotic test sizes, moderate cells", criterion4);
  run_criterion("5. power at two alternatives", criterion5);
  run_criterion("6a. coordinate-ascent monotonicity", criterion6a);
  run_criterion("6b. stationarity at convergence", criterion6b);
  run_criterion("6c. dense-optimizer agreement", criterion6c);
  run_criterion("6d. covariance block structure", criterion6d);
  run_criterion("6e. scale/shift invariance", criterion6e);
  run_criterion("6f. bootstrap determinism across threads", criterion6f);
  run_criterion("6g. bootstrap vs direct-simulation null distribution", criterion6g);
  run_criterion("7. robustness under t3 errors", criterion7);

  if (g_failed) {
    std::printf("%d criterion(s) failed\n", g_failed);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
