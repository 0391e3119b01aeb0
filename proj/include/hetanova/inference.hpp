#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hetanova/asymptotic.hpp"
#include "hetanova/bootstrap.hpp"
#include "hetanova/data.hpp"

namespace hetanova {

enum class TestTarget {
  Interaction,
  SimpleA,
  SimpleB,
  TreatmentA,
  TreatmentB,
};

enum class TestMethod {
  LrtBoot,
  MctBoot,
  LrtAsymptotic,
  MctAsymptotic,
};

std::string target_name(TestTarget target);
std::string method_name(TestMethod method);

struct TestRequest {
  TestTarget target = TestTarget::Interaction;
  TestMethod method = TestMethod::LrtBoot;
  double alpha = 0.05;
  BootstrapSettings bootstrap;
  SolverSettings solver;
  McSettings mc;  // asymptotic MCT only

  void validate() const;
};

enum class Decision {
  Reject,
  FailToReject,
};

struct TestDiagnostics {
  std::uint64_t seed = 0;          // bootstrap seed, or MC seed for the asymptotic MCT
  long replicates = 0;             // bootstrap H or MC draw count; 0 for chi-square methods
  long nonconverged_redraws = 0;
  int observed_fit_iterations = 0;
  int df = 0;                      // asymptotic LRT only
};

struct TestReport {
  TestRequest request;
  StatisticValue statistic;
  double critical_value = 0.0;
  std::optional<double> p_value;   // bootstrap methods only
  std::optional<Tail> tail;        // bootstrap methods only
  Decision decision = Decision::FailToReject;
  TestDiagnostics diagnostics;
  std::string version;
};

// Dispatches a request to the right statistic, solver chain and
// critical-value source. Factor-B targets run on the transposed summary.
TestReport run_test(const CellSummaryTable& summary, const TestRequest& request, int threads = 0);

enum class CiFamily {
  InteractionPairs,
  SimpleAPairs,
  TreatmentAPairs,
};

std::string family_name(CiFamily family);

struct IntervalRow {
  std::string label;
  double estimate = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  bool significant = false;  // interval excludes zero
};

struct SimultaneousCI {
  CiFamily family = CiFamily::TreatmentAPairs;
  double level = 0.95;        // 1 - alpha, family-wise
  double multiplier = 0.0;    // bootstrap critical value of the matching MCT
  std::vector<IntervalRow> intervals;
  std::uint64_t seed = 0;
  long replicates = 0;
};

// Simultaneous confidence intervals for the pairwise contrasts of one
// family. The critical multiplier is the upper bootstrap quantile of the
// corresponding MCT statistic, shared across every interval.
SimultaneousCI simultaneous_ci(const CellSummaryTable& summary, CiFamily family, double alpha,
                               const BootstrapSettings& bootstrap, const SolverSettings& solver,
                               int threads = 0);

enum class CriticalSource {
  Bootstrap,
  Asymptotic,
};

struct PairDecision {
  int i1 = 0;  // 0-based treatment levels
  int i2 = 0;
  double statistic = 0.0;  // T_{i1 i2}
  bool reject = false;
};

struct PairwiseDecisions {
  double critical_value = 0.0;
  CriticalSource source = CriticalSource::Bootstrap;
  std::vector<PairDecision> pairs;
};

// Pairwise treatment comparisons |T_ii'| > d with the bootstrap or
// asymptotic equicoordinate critical value d.
PairwiseDecisions pairwise_decisions(const CellSummaryTable& summary, double alpha,
                                     CriticalSource source, const BootstrapSettings& bootstrap,
                                     const SolverSettings& solver, const McSettings& mc = {},
                                     int threads = 0);

}  // namespace hetanova
