#include "hetanova/presets.hpp"

#include <array>
#include <cmath>

#include "hetanova/errors.hpp"

namespace hetanova {

namespace {

IGrid grid_of(int a, int b, const std::vector<int>& row_major) {
  if (static_cast<int>(row_major.size()) != a * b)
    throw InputError("preset cell-size vector has the wrong length");
  return IGrid(a, b, row_major);
}

DGrid dgrid_of(int a, int b, const std::vector<double>& row_major) {
  if (static_cast<int>(row_major.size()) != a * b)
    throw InputError("preset variance vector has the wrong length");
  return DGrid(a, b, row_major);
}

TestRequest make_request(TestTarget target, TestMethod method, const PresetOptions& opt) {
  TestRequest req;
  req.target = target;
  req.method = method;
  req.alpha = opt.alpha;
  return req;
}

SimulationConfig base_config(const std::string& id, int a, int b, const std::vector<int>& n,
                             const std::vector<double>& sigma2, const PresetOptions& opt) {
  SimulationConfig cfg;
  cfg.id = id;
  cfg.layout = Layout(a, b, grid_of(a, b, n));
  cfg.alpha_vec.assign(a, 0.0);
  cfg.beta_vec.assign(b, 0.0);
  cfg.sigma2 = dgrid_of(a, b, sigma2);
  cfg.outer_reps = opt.outer_reps;
  cfg.bootstrap.replicates = opt.inner_reps;
  cfg.bootstrap.alpha = opt.alpha;
  cfg.nominal_alpha = opt.alpha;
  cfg.seed = opt.seed;
  cfg.tests = {make_request(TestTarget::TreatmentA, TestMethod::LrtBoot, opt),
               make_request(TestTarget::TreatmentA, TestMethod::MctBoot, opt)};
  return cfg;
}

std::vector<double> repeated(double v, int count) { return std::vector<double>(count, v); }
std::vector<int> repeated_int(int v, int count) { return std::vector<int>(count, v); }

// --- Configuration 1 and 2 share a 2x3 layout ------------------------------

const std::vector<std::vector<int>> kCells2x3Small = {
    {5, 5, 5, 5, 5, 5},
    {10, 10, 10, 10, 10, 10},
    {3, 3, 4, 5, 6, 6},
    {4, 6, 8, 12, 16, 20},
};
const std::vector<std::vector<int>> kCells2x3Moderate = {
    {25, 25, 25, 25, 25, 25},
    {30, 20, 25, 35, 40, 30},
    {20, 25, 30, 35, 40, 45},
    {45, 40, 35, 30, 25, 20},
};
const std::vector<std::vector<double>> kVariances2x3 = {
    {1, 1, 1, 1, 1, 1},
    {0.1, 0.1, 0.1, 0.5, 0.5, 0.5},
    {1, 1, 1, 0.5, 0.5, 0.5},
    {0.1, 0.2, 0.3, 0.4, 0.5, 1},
    {0.3, 0.9, 0.4, 0.7, 0.5, 1},
};

// --- Configuration 3: 6x3 layout -------------------------------------------

const std::vector<std::vector<int>> kCells6x3 = {
    std::vector<int>(18, 5),
    std::vector<int>(18, 10),
    {3, 3, 3, 3, 3, 4, 4, 4, 4, 5, 5, 5, 5, 6, 6, 6, 6, 6},
    {4, 4, 4, 6, 6, 6, 8, 8, 8, 12, 12, 12, 16, 16, 16, 20, 20, 20},
};
const std::vector<std::vector<double>> kVariances6x3 = {
    repeated(1.0, 18),
    {0.1, 0.1, 0.2, 0.2, 0.3, 0.3, 0.4, 0.4, 0.5, 0.5, 0.6, 0.6, 0.7, 0.7, 0.8, 0.8, 0.9, 0.9},
    {0.1, 0.2, 0.3, 0.4, 0.5, 0.1, 0.2, 0.3, 0.4, 0.5, 0.1, 0.2, 0.3, 0.4, 0.5, 0.2, 0.3, 2},
    // Evenly spaced fill between the stated endpoints 0.1 and 1.
    {0.1, 0.1, 0.1, 0.16, 0.22, 0.28, 0.34, 0.4, 0.46, 0.52, 0.58, 0.64, 0.7, 0.76, 0.82, 0.88,
     0.94, 1.0},
    {0.9, 0.8, 0.7, 0.6, 0.5, 0.4, 0.3, 0.2, 0.1, 0.9, 0.8, 0.7, 0.6, 0.5, 0.4, 0.3, 0.2, 1},
    {0.01, 0.01, 0.01, 0.05, 0.05, 0.05, 0.1, 0.1, 0.1, 0.5, 0.5, 0.5, 0.6, 0.6, 0.6, 0.8, 0.8, 1},
};

// --- Power setups -----------------------------------------------------------

const std::vector<double> kRho16 = {0.1, 0.1, 0.1, 0.5, 0.5, 0.5};
const std::vector<double> kRho17 = {0.3, 0.9, 0.4, 0.7, 0.5, 1};
const std::vector<int> kN21 = {10, 10, 10, 10, 10, 10};
const std::vector<int> kN22 = {10, 10, 5, 5, 15, 15};

const std::vector<double> kRho18 = {0.1, 0.1, 0.2, 0.2, 0.3, 0.3, 0.4, 0.4, 0.5,
                                    0.5, 0.6, 0.6, 0.7, 0.7, 0.8, 0.8, 0.9, 1};
const std::vector<double> kRho19 = {0.01, 0.01, 0.01, 0.05, 0.05, 0.05, 0.1, 0.1, 0.1,
                                    0.5,  0.5,  0.5,  0.6,  0.6,  0.6,  0.8, 0.8, 1};
const std::vector<int> kN23 = {15, 15, 15, 15, 15, 15, 20, 20, 20, 20, 20, 20, 25, 25, 25, 25, 25, 25};
const std::vector<int> kN24 = {15, 16, 17, 18, 19, 20, 21, 22, 23, 24, 25, 26, 27, 28, 29, 30, 31, 32};

const std::vector<std::pair<double, double>> kPowerPairs = {
    {0, 0}, {-0.1, 0.1}, {0, 0.4}, {0, 0.6}, {0, 0.8}, {0, 1}};

// Configuration 4: a=3, b=2, alpha = c * (0, -0.2, 0.2).
const std::vector<int> kN15 = {10, 12, 14, 10, 12, 14};
const std::vector<int> kN16 = {6, 7, 8, 9, 10, 11};
const std::vector<double> kRho12 = {1, 2, 3, 1, 2, 3};
const std::vector<double> kRho13 = {2, 2, 2, 2, 2, 2};

// Configuration 5: a=4, b=4, alpha = c * (1, 1.1, 1.2, 1.3).
const std::vector<int> kN17 = {10, 12, 14, 16, 10, 12, 14, 16, 10, 12, 14, 16, 10, 12, 14, 16};
const std::vector<int> kN18 = {8, 6, 7, 9, 10, 12, 14, 16, 10, 11, 12, 13, 8, 6, 7, 9};
const std::vector<double> kRho14 = {1, 2, 3, 4, 1, 2, 3, 4, 1, 2, 3, 4, 1, 2, 3, 4};
const std::vector<double> kRho15 = repeated(1.0, 16);

const std::vector<double> kCurveScales = {0, 0.5, 1, 1.5, 2, 2.5, 3};

std::vector<SimulationConfig> table3_like(const std::string& prefix,
                                          const std::vector<std::vector<int>>& cells,
                                          const std::vector<std::vector<double>>& variances,
                                          int a, int b, int first_n_index, int first_rho_index,
                                          const PresetOptions& opt, bool with_asymptotic) {
  std::vector<SimulationConfig> configs;
  for (std::size_t ni = 0; ni < cells.size(); ++ni)
    for (std::size_t ri = 0; ri < variances.size(); ++ri) {
      SimulationConfig cfg =
          base_config(prefix + "/N" + std::to_string(first_n_index + ni) + "-rho" +
                          std::to_string(first_rho_index + ri),
                      a, b, cells[ni], variances[ri], opt);
      if (with_asymptotic) {
        cfg.tests.push_back(make_request(TestTarget::TreatmentA, TestMethod::LrtAsymptotic, opt));
        cfg.tests.push_back(make_request(TestTarget::TreatmentA, TestMethod::MctAsymptotic, opt));
      }
      // Distinct seed per cell so parallel grid entries do not share streams.
      cfg.seed = opt.seed + 1009 * (ni * variances.size() + ri);
      configs.push_back(std::move(cfg));
    }
  return configs;
}

std::vector<SimulationConfig> power_table(const std::string& prefix, int a, int b,
                                          const std::vector<std::pair<std::string, std::vector<int>>>& cells,
                                          const std::vector<std::pair<std::string, std::vector<double>>>& vars,
                                          const PresetOptions& opt) {
  std::vector<SimulationConfig> configs;
  int cell_index = 0;
  for (const auto& [vname, rho] : vars)
    for (const auto& [nname, n] : cells) {
      for (const auto& [a_lo, a_hi] : kPowerPairs) {
        SimulationConfig cfg = base_config(
            prefix + "/" + vname + "-" + nname + "/alpha(" + std::to_string(a_lo) + "," +
                std::to_string(a_hi) + ")",
            a, b, n, rho, opt);
        // Alternatives act on the last two treatment levels; the rest are 0.
        cfg.alpha_vec[a - 2] = a_lo;
        cfg.alpha_vec[a - 1] = a_hi;
        cfg.seed = opt.seed + 2003 * cell_index;
        ++cell_index;
        configs.push_back(std::move(cfg));
      }
    }
  return configs;
}

std::vector<SimulationConfig> power_curve(const std::string& prefix, int a, int b,
                                          const std::vector<double>& alpha_pattern,
                                          const std::vector<double>& beta,
                                          const std::vector<std::pair<std::string, std::vector<int>>>& cells,
                                          const std::vector<std::pair<std::string, std::vector<double>>>& vars,
                                          const PresetOptions& opt) {
  std::vector<SimulationConfig> configs;
  int cell_index = 0;
  for (const auto& [nname, n] : cells)
    for (const auto& [vname, rho] : vars)
      for (double c : kCurveScales) {
        SimulationConfig cfg =
            base_config(prefix + "/" + nname + "-" + vname, a, b, n, rho, opt);
        cfg.alpha_vec = alpha_pattern;
        cfg.beta_vec = beta;
        cfg.effect_scale = c;
        cfg.seed = opt.seed + 3001 * cell_index;
        ++cell_index;
        configs.push_back(std::move(cfg));
      }
  return configs;
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"table1/config1", "table1/config2", "table1/config3", "table2/config4",
          "table2/config5", "table3",         "table4",         "table5",
          "table6",         "figure2",        "figure3",        "robustness"};
}

std::vector<SimulationConfig> make_preset(const std::string& name, const PresetOptions& opt) {
  if (name == "table3" || name == "table1/config1")
    return table3_like("table3", kCells2x3Small, kVariances2x3, 2, 3, 1, 1, opt, false);
  if (name == "table4" || name == "table1/config2")
    return table3_like("table4", kCells2x3Moderate, kVariances2x3, 2, 3, 5, 1, opt, true);
  if (name == "table1/config3")
    return table3_like("config3", kCells6x3, kVariances6x3, 6, 3, 9, 6, opt, false);

  if (name == "table5")
    return power_table("table5", 2, 3, {{"N21", kN21}, {"N22", kN22}},
                       {{"rho16", kRho16}, {"rho17", kRho17}}, opt);
  if (name == "table6")
    return power_table("table6", 6, 3, {{"N23", kN23}, {"N24", kN24}},
                       {{"rho18", kRho18}, {"rho19", kRho19}}, opt);

  if (name == "figure2" || name == "table2/config4")
    return power_curve("figure2", 3, 2, {0, -0.2, 0.2}, {0, 0},
                       {{"N15", kN15}, {"N16", kN16}}, {{"rho12", kRho12}, {"rho13", kRho13}},
                       opt);
  if (name == "figure3" || name == "table2/config5")
    return power_curve("figure3", 4, 4, {1, 1.1, 1.2, 1.3}, {-0.1, 0.1, 0.2, 0.2},
                       {{"N17", kN17}, {"N18", kN18}}, {{"rho14", kRho14}, {"rho15", kRho15}},
                       opt);

  if (name == "robustness") {
    std::vector<SimulationConfig> configs;
    const std::vector<std::pair<std::string, ErrorFamilySpec>> families = {
        {"mixture", ErrorFamilySpec::normal_mixture(0.5, 1, 2, 2, 4)},
        {"t3", ErrorFamilySpec::student_t(3)},
        {"weibull", ErrorFamilySpec::weibull(5, 1)},
        {"laplace", ErrorFamilySpec::laplace(0, 5)},
    };
    int cell_index = 0;
    for (const auto& [fname, family] : families) {
      SimulationConfig cfg = base_config("robustness/" + fname, 3, 2, repeated_int(25, 6),
                                         {1, 2, 3, 1, 2, 3}, opt);
      cfg.errors = family;
      cfg.seed = opt.seed + 4001 * cell_index;
      ++cell_index;
      configs.push_back(std::move(cfg));
    }
    return configs;
  }

  std::string available;
  for (const std::string& n : preset_names()) available += " " + n;
  throw InputError("unknown preset '" + name + "'; available presets:" + available);
}

}  // namespace hetanova
