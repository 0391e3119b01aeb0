#pragma once

#include <string>
#include <vector>

#include "hetanova/simulation.hpp"

namespace hetanova {

struct PresetOptions {
  long outer_reps = 2000;
  int inner_reps = 1000;
  std::uint64_t seed = 0;
  double alpha = 0.05;
};

// Names accepted by make_preset. Single configurations: "table1/config1"
// .. "table1/config3" (size setups) and "table2/config4", "table2/config5"
// (power setups). Study grids: "table3" and "table4" (treatment-test sizes),
// "table5" and "table6" (treatment-test powers), "figure2" and "figure3"
// (power curves over the effect scale), "robustness" (non-normal errors).
std::vector<std::string> preset_names();

// Builds the configuration list for one preset; throws InputError with the
// available names when the preset is unknown.
std::vector<SimulationConfig> make_preset(const std::string& name, const PresetOptions& options);

}  // namespace hetanova
