// Command-line front end: summarize raw data, run tests, build simultaneous
// confidence intervals, drive simulation studies, and query critical values.
//
// Exit codes: 0 = ran (statistical decisions live in the output), 2 = input
// error, 3 = numerical failure.

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "hetanova/asymptotic.hpp"
#include "hetanova/errors.hpp"
#include "hetanova/inference.hpp"
#include "hetanova/io.hpp"
#include "hetanova/parallel.hpp"
#include "hetanova/presets.hpp"
#include "hetanova/simulation.hpp"
#include "hetanova/version.hpp"

namespace {

using namespace hetanova;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;

struct InputOptions {
  std::string raw, mean, n, var, json;

  void attach(CLI::App* cmd) {
    cmd->add_option("--raw", raw, "long-format CSV with header A,B,y");
    cmd->add_option("--mean", mean, "cell-mean matrix CSV (a rows x b columns)");
    cmd->add_option("--n", n, "cell-size matrix CSV");
    cmd->add_option("--var", var, "cell-variance matrix CSV");
    cmd->add_option("--json", json, "summary JSON {a, b, mean, n, var}");
  }

  CellSummaryTable load() const {
    const bool have_matrices = !mean.empty() || !n.empty() || !var.empty();
    if (!raw.empty()) {
      if (have_matrices || !json.empty())
        throw InputError("give exactly one input: --raw, --json, or --mean/--n/--var");
      const RawDataset data = io::read_raw_csv(raw);
      return summarize(data, infer_layout(data));
    }
    if (!json.empty()) {
      if (have_matrices)
        throw InputError("give exactly one input: --raw, --json, or --mean/--n/--var");
      return io::read_summary_json(json);
    }
    if (mean.empty() || n.empty() || var.empty())
      throw InputError("summary matrices need all of --mean, --n and --var");
    return io::summary_from_matrices(io::read_matrix_csv(mean, "mean"),
                                     io::read_matrix_csv(n, "n"),
                                     io::read_matrix_csv(var, "var"));
  }
};

TestTarget parse_target(const std::string& name) {
  if (name == "interaction") return TestTarget::Interaction;
  if (name == "simpleA") return TestTarget::SimpleA;
  if (name == "simpleB") return TestTarget::SimpleB;
  if (name == "treatmentA") return TestTarget::TreatmentA;
  if (name == "treatmentB") return TestTarget::TreatmentB;
  throw InputError("unknown --target '" + name +
                   "' (expected interaction, simpleA, simpleB, treatmentA, treatmentB)");
}

TestMethod parse_method(const std::string& name) {
  if (name == "lrt") return TestMethod::LrtBoot;
  if (name == "mct") return TestMethod::MctBoot;
  if (name == "alrt") return TestMethod::LrtAsymptotic;
  if (name == "amct") return TestMethod::MctAsymptotic;
  throw InputError("unknown --method '" + name + "' (expected lrt, mct, alrt, amct)");
}

int run_cli(int argc, char** argv) {
  CLI::App app{"heteroscedastic two-way ANOVA tests"};
  app.set_version_flag("--version", std::string(kProgramName) + " " + std::string(kVersion));
  app.require_subcommand(1);

  // --- summarize ------------------------------------------------------------
  auto* cmd_summarize = app.add_subcommand("summarize", "reduce raw data to cell summaries");
  std::string sum_raw, sum_out;
  cmd_summarize->add_option("--raw", sum_raw, "long-format CSV with header A,B,y")->required();
  cmd_summarize->add_option("--out", sum_out, "output path (default: stdout)");

  // --- test -------------------------------------------------------------------
  auto* cmd_test = app.add_subcommand("test", "run one hypothesis test");
  InputOptions test_input;
  test_input.attach(cmd_test);
  std::string test_target, test_method, test_format = "text", dump_null_path;
  double test_alpha = 0.05;
  int boot_reps = 5000, max_iter = 10000, threads = 0;
  double epsilon = 1e-8;
  std::uint64_t seed = 0;
  long mc_draws = 200000;
  std::uint64_t mc_seed = McSettings{}.seed;
  cmd_test->add_option("--target", test_target, "interaction|simpleA|simpleB|treatmentA|treatmentB")
      ->required();
  cmd_test->add_option("--method", test_method, "lrt|mct|alrt|amct")->required();
  cmd_test->add_option("--alpha", test_alpha, "significance level (default 0.05)");
  cmd_test->add_option("--boot-reps", boot_reps, "bootstrap replicates H (default 5000)");
  auto* seed_opt = cmd_test->add_option("--seed", seed, "bootstrap seed (required for lrt/mct)");
  cmd_test->add_option("--epsilon", epsilon, "solver tolerance (default 1e-8)");
  cmd_test->add_option("--max-iter", max_iter, "solver iteration cap (default 10000)");
  cmd_test->add_option("--dump-null", dump_null_path, "write the bootstrap null sample here");
  cmd_test->add_option("--format", test_format, "text|json (default text)");
  cmd_test->add_option("--threads", threads, "worker threads (default: all cores)");
  cmd_test->add_option("--mc-draws", mc_draws, "Monte Carlo draws for the asymptotic MCT");
  cmd_test->add_option("--mc-seed", mc_seed, "Monte Carlo seed for the asymptotic MCT");

  // --- ci ---------------------------------------------------------------------
  auto* cmd_ci = app.add_subcommand("ci", "simultaneous confidence intervals");
  InputOptions ci_input;
  ci_input.attach(cmd_ci);
  std::string ci_family_name, ci_format = "text", ci_out;
  double ci_alpha = 0.05;
  int ci_boot_reps = 5000, ci_max_iter = 10000, ci_threads = 0;
  double ci_epsilon = 1e-8;
  std::uint64_t ci_seed = 0;
  cmd_ci->add_option("--family", ci_family_name, "interaction|simpleA|treatmentA")->required();
  cmd_ci->add_option("--alpha", ci_alpha, "family-wise level is 1 - alpha (default 0.05)");
  cmd_ci->add_option("--boot-reps", ci_boot_reps, "bootstrap replicates H (default 5000)");
  cmd_ci->add_option("--seed", ci_seed, "bootstrap seed")->required();
  cmd_ci->add_option("--epsilon", ci_epsilon, "solver tolerance");
  cmd_ci->add_option("--max-iter", ci_max_iter, "solver iteration cap");
  cmd_ci->add_option("--format", ci_format, "text|csv (default text)");
  cmd_ci->add_option("--out", ci_out, "output path (default: stdout)");
  cmd_ci->add_option("--threads", ci_threads, "worker threads");

  // --- simulate -----------------------------------------------------------------
  auto* cmd_sim = app.add_subcommand("simulate", "Monte Carlo size/power studies");
  std::string sim_config, sim_preset, sim_out;
  long sim_outer = 2000;
  int sim_inner = 1000, sim_threads = 0;
  double sim_alpha = 0.05;
  std::uint64_t sim_seed = 0;
  cmd_sim->add_option("--config", sim_config, "study config JSON");
  cmd_sim->add_option("--preset", sim_preset, "built-in study grid (see --preset help)");
  cmd_sim->add_option("--outer", sim_outer, "outer Monte Carlo replicates (default 2000)");
  cmd_sim->add_option("--inner", sim_inner, "inner bootstrap replicates (default 1000)");
  cmd_sim->add_option("--alpha", sim_alpha, "nominal level (default 0.05)");
  cmd_sim->add_option("--seed", sim_seed, "study seed");
  cmd_sim->add_option("--out", sim_out, "results CSV path (default: stdout)");
  cmd_sim->add_option("--threads", sim_threads, "worker threads");

  // --- quantile -------------------------------------------------------------------
  auto* cmd_quant = app.add_subcommand("quantile", "critical values");
  InputOptions quant_input;
  quant_input.attach(cmd_quant);
  std::string dist = "chisq";
  int quant_df = 1;
  double quant_alpha = 0.05;
  long quant_mc_draws = 200000;
  std::uint64_t quant_mc_seed = McSettings{}.seed;
  int quant_threads = 0;
  cmd_quant->add_option("--dist", dist, "chisq|equicoordinate (default chisq)");
  cmd_quant->add_option("--df", quant_df, "degrees of freedom (chisq)");
  cmd_quant->add_option("--alpha", quant_alpha, "upper tail probability (default 0.05)");
  cmd_quant->add_option("--mc-draws", quant_mc_draws, "Monte Carlo draws (equicoordinate)");
  cmd_quant->add_option("--mc-seed", quant_mc_seed, "Monte Carlo seed (equicoordinate)");
  cmd_quant->add_option("--threads", quant_threads, "worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  if (cmd_summarize->parsed()) {
    const RawDataset data = io::read_raw_csv(sum_raw);
    const std::string out = io::summary_to_json(summarize(data, infer_layout(data)));
    if (sum_out.empty())
      std::cout << out;
    else
      io::write_text_file(sum_out, out);
    return kExitOk;
  }

  if (cmd_test->parsed()) {
    TestRequest request;
    request.target = parse_target(test_target);
    request.method = parse_method(test_method);
    request.alpha = test_alpha;
    request.solver.epsilon = epsilon;
    request.solver.max_iterations = max_iter;
    request.bootstrap.replicates = boot_reps;
    request.bootstrap.alpha = test_alpha;
    request.bootstrap.seed = seed;
    request.mc.draws = mc_draws;
    request.mc.seed = mc_seed;
    const bool bootstrap_method =
        request.method == TestMethod::LrtBoot || request.method == TestMethod::MctBoot;
    if (bootstrap_method && seed_opt->count() == 0)
      throw InputError("--seed is required for bootstrap methods (lrt, mct)");
    if (test_format != "text" && test_format != "json")
      throw InputError("--format must be text or json");

    const CellSummaryTable summary = test_input.load();
    const TestReport report = run_test(summary, request, threads);
    std::cout << (test_format == "json" ? io::report_to_json(report)
                                        : io::report_to_text(report));
    if (!dump_null_path.empty()) {
      if (!bootstrap_method) throw InputError("--dump-null applies to bootstrap methods only");
      CellSummaryTable oriented = summary;
      if (request.target == TestTarget::SimpleB || request.target == TestTarget::TreatmentB)
        oriented = summary.transposed();
      BootstrapSettings bs = request.bootstrap;
      const StatisticKind kind = report.statistic.kind;
      io::write_null_sample(dump_null_path,
                            bootstrap_null_sample(oriented, kind, bs, request.solver, threads));
    }
    return kExitOk;
  }

  if (cmd_ci->parsed()) {
    CiFamily family;
    if (ci_family_name == "interaction") family = CiFamily::InteractionPairs;
    else if (ci_family_name == "simpleA") family = CiFamily::SimpleAPairs;
    else if (ci_family_name == "treatmentA") family = CiFamily::TreatmentAPairs;
    else throw InputError("unknown --family '" + ci_family_name +
                          "' (expected interaction, simpleA, treatmentA)");
    if (ci_format != "text" && ci_format != "csv")
      throw InputError("--format must be text or csv");

    BootstrapSettings bs;
    bs.replicates = ci_boot_reps;
    bs.alpha = ci_alpha;
    bs.seed = ci_seed;
    SolverSettings solver;
    solver.epsilon = ci_epsilon;
    solver.max_iterations = ci_max_iter;

    const SimultaneousCI ci =
        simultaneous_ci(ci_input.load(), family, ci_alpha, bs, solver, ci_threads);
    const std::string out = ci_format == "csv" ? io::ci_to_csv(ci) : io::ci_to_text(ci);
    if (ci_out.empty())
      std::cout << out;
    else
      io::write_text_file(ci_out, out);
    return kExitOk;
  }

  if (cmd_sim->parsed()) {
    if (sim_config.empty() == sim_preset.empty())
      throw InputError("give exactly one of --config or --preset");
    std::vector<SimulationConfig> configs;
    if (!sim_config.empty()) {
      SimulationConfig cfg = io::read_simulation_config(sim_config);
      if (cmd_sim->count("--outer") > 0) cfg.outer_reps = sim_outer;
      if (cmd_sim->count("--inner") > 0) cfg.bootstrap.replicates = sim_inner;
      if (cmd_sim->count("--seed") > 0) cfg.seed = sim_seed;
      configs.push_back(std::move(cfg));
    } else {
      PresetOptions opt;
      opt.outer_reps = sim_outer;
      opt.inner_reps = sim_inner;
      opt.seed = sim_seed;
      opt.alpha = sim_alpha;
      configs = make_preset(sim_preset, opt);
    }
    if (sim_outer < 100)
      std::cerr << "note: outer < 100 gives very wide standard errors\n";

    std::ostringstream csv;
    csv << io::simulation_csv_header();
    size_power_grid(configs, sim_threads, [&](const SimulationResult& result) {
      const std::string rows = io::simulation_result_csv(result);
      csv << rows;
      std::cerr << rows;  // progress mirror
    });
    if (sim_out.empty())
      std::cout << csv.str();
    else
      io::write_text_file(sim_out, csv.str());
    return kExitOk;
  }

  if (cmd_quant->parsed()) {
    if (dist == "chisq") {
      std::cout << io::format_double(chi_square_critical(quant_df, quant_alpha)) << "\n";
      return kExitOk;
    }
    if (dist == "equicoordinate") {
      const CellSummaryTable summary = quant_input.load();
      McSettings mc;
      mc.draws = quant_mc_draws;
      mc.seed = quant_mc_seed;
      std::cout << io::format_double(
                       equicoordinate_quantile(build_sigma_T(summary), quant_alpha, mc, quant_threads))
                << "\n";
      return kExitOk;
    }
    throw InputError("unknown --dist '" + dist + "' (expected chisq or equicoordinate)");
  }

  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_cli(argc, argv);
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
}
