#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hetanova/data.hpp"
#include "hetanova/inference.hpp"

namespace hetanova {

enum class ErrorFamily {
  Normal,
  NormalMixture,
  StudentT,
  Weibull,
  Laplace,
};

// Error distribution for data generation. Non-normal draws are standardized
// by the family's analytic mean and standard deviation before being scaled
// to the requested cell variance, so only the shape matters.
struct ErrorFamilySpec {
  ErrorFamily family = ErrorFamily::Normal;
  double mix_p = 0.5, mean1 = 0.0, var1 = 1.0, mean2 = 0.0, var2 = 1.0;  // mixture
  double df = 5.0;                                                      // Student t
  double shape = 1.0, scale = 1.0;                                      // Weibull / Laplace scale
  double location = 0.0;                                                // Laplace

  static ErrorFamilySpec normal();
  static ErrorFamilySpec normal_mixture(double p, double m1, double v1, double m2, double v2);
  static ErrorFamilySpec student_t(double df);
  static ErrorFamilySpec weibull(double shape, double scale);
  static ErrorFamilySpec laplace(double location, double scale);

  void validate() const;          // throws InvalidFamilyParamsError
  double analytic_mean() const;   // mu_x
  double analytic_var() const;    // sigma_x^2
  double draw(rng::Stream& stream) const;  // one un-standardized X
  std::string name() const;
};

struct SimulationConfig {
  std::string id;
  Layout layout;
  double mu = 0.0;
  std::vector<double> alpha_vec;   // length a; scaled by effect_scale
  std::vector<double> beta_vec;    // length b
  DGrid gamma;                     // empty means all-zero (additive model)
  DGrid sigma2;                    // true cell variances, positive
  double effect_scale = 1.0;       // c
  ErrorFamilySpec errors;
  long outer_reps = 2000;
  BootstrapSettings bootstrap;     // inner bootstrap (seed is re-derived per replicate)
  std::vector<TestRequest> tests;
  double nominal_alpha = 0.05;
  std::uint64_t seed = 0;

  void validate() const;
  double cell_mean(int i, int j) const;
};

struct TestOutcome {
  TestTarget target = TestTarget::TreatmentA;
  TestMethod method = TestMethod::LrtBoot;
  long rejections = 0;
  long failures = 0;  // replicates where this test raised a numerical error

  long valid(long outer) const { return outer - failures; }
  double proportion(long outer) const {
    const long v = valid(outer);
    return v > 0 ? static_cast<double>(rejections) / v : 0.0;
  }
  double std_error(long outer) const;
};

struct SimulationResult {
  std::string config_id;
  double effect_scale = 1.0;
  long outer_reps = 0;
  std::vector<TestOutcome> outcomes;
};

// One dataset under the config's model: cell means mu + c*alpha_i + beta_j
// + gamma_ij, errors scaled to sigma_ij. Deterministic in (seed,
// replicate_index).
RawDataset generate_dataset(const SimulationConfig& config, long replicate_index);

// Full two-phase study: generate, summarize, run every requested test with
// its own critical-value source, count rejections. Outer replicates run in
// parallel; inner bootstraps stay serial. All bootstrap tests of a replicate
// share one set of inner draws.
SimulationResult run_study(const SimulationConfig& config, int threads = 0);

// Batch driver over a config list. `on_result` (when set) is invoked after
// each config finishes, in order.
std::vector<SimulationResult> size_power_grid(
    const std::vector<SimulationConfig>& configs, int threads = 0,
    const std::function<void(const SimulationResult&)>& on_result = nullptr);

}  // namespace hetanova
