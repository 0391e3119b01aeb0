#pragma once

#include <string>
#include <vector>

#include "hetanova/data.hpp"
#include "hetanova/inference.hpp"
#include "hetanova/simulation.hpp"

namespace hetanova {
namespace io {

// --- ingestion --------------------------------------------------------------

// Long-format raw data: header "A,B,y", then integer levels and a decimal
// response per line. Parse failures name the offending line.
RawDataset read_raw_csv(const std::string& path);

// Headerless numeric matrix, one row per line. `role` names the file in
// error messages ("mean", "n", "var").
DGrid read_matrix_csv(const std::string& path, const std::string& role);

// Builds a summary from the three matrices, checking that shapes agree and
// that n holds integers.
CellSummaryTable summary_from_matrices(const DGrid& mean, const DGrid& n, const DGrid& var);

// Single JSON document {a, b, mean[][], n[][], var[][]}.
CellSummaryTable read_summary_json(const std::string& path);
CellSummaryTable summary_from_json_text(const std::string& text);
std::string summary_to_json(const CellSummaryTable& summary);

// --- reports ----------------------------------------------------------------

std::string report_to_json(const TestReport& report);
std::string report_to_text(const TestReport& report);

std::string ci_to_text(const SimultaneousCI& ci);
std::string ci_to_csv(const SimultaneousCI& ci);

// Results CSV rows: config,test,method,c,rejections,reps,proportion,stderr.
std::string simulation_csv_header();
std::string simulation_result_csv(const SimulationResult& result);

void write_text_file(const std::string& path, const std::string& content);
void write_null_sample(const std::string& path, const std::vector<double>& sample);

// --- simulation configs -----------------------------------------------------

SimulationConfig read_simulation_config(const std::string& path);

// Full-precision decimal rendering that round-trips through parsing.
std::string format_double(double v);

}  // namespace io
}  // namespace hetanova
