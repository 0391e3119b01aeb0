#include "hetanova/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hetanova/errors.hpp"
#include "hetanova/version.hpp"

namespace hetanova {
namespace io {

using nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string trim(const std::string& s) {
  std::size_t begin = 0, end = s.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
  return s.substr(begin, end - begin);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(trim(field));
  return fields;
}

double parse_double(const std::string& text, const std::string& where) {
  const std::string t = trim(text);
  try {
    std::size_t used = 0;
    const double v = std::stod(t, &used);
    if (used != t.size()) throw std::invalid_argument(t);
    return v;
  } catch (const std::exception&) {
    throw ParseError(where + ": '" + t + "' is not a number");
  }
}

long parse_int(const std::string& text, const std::string& where) {
  const std::string t = trim(text);
  long v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size())
    throw ParseError(where + ": '" + t + "' is not an integer");
  return v;
}

std::string shape_of(const DGrid& g) {
  return std::to_string(g.rows()) + "x" + std::to_string(g.cols());
}

DGrid json_to_grid(const json& arr, int a, int b, const std::string& role) {
  if (!arr.is_array() || static_cast<int>(arr.size()) != a)
    throw ParseError("'" + role + "' must be an array of " + std::to_string(a) + " rows");
  DGrid grid(a, b, 0.0);
  for (int i = 0; i < a; ++i) {
    const json& row = arr[i];
    if (!row.is_array() || static_cast<int>(row.size()) != b)
      throw ParseError("'" + role + "' row " + std::to_string(i + 1) + " must have " +
                       std::to_string(b) + " entries");
    for (int j = 0; j < b; ++j) {
      if (!row[j].is_number())
        throw ParseError("'" + role + "' entry (" + std::to_string(i + 1) + "," +
                         std::to_string(j + 1) + ") is not a number");
      grid(i, j) = row[j].get<double>();
    }
  }
  return grid;
}

json grid_to_json(const DGrid& g) {
  json rows = json::array();
  for (int i = 0; i < g.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < g.cols(); ++j) row.push_back(g(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json grid_to_json(const IGrid& g) {
  json rows = json::array();
  for (int i = 0; i < g.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < g.cols(); ++j) row.push_back(g(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string tail_name(Tail tail) { return tail == Tail::Lower ? "lower" : "upper"; }

json request_to_json(const TestRequest& request) {
  json j{{"target", target_name(request.target)},
         {"method", method_name(request.method)},
         {"alpha", request.alpha},
         {"solver", {{"epsilon", request.solver.epsilon},
                     {"max_iterations", request.solver.max_iterations}}}};
  if (request.method == TestMethod::LrtBoot || request.method == TestMethod::MctBoot)
    j["bootstrap"] = {{"replicates", request.bootstrap.replicates},
                      {"seed", request.bootstrap.seed},
                      {"max_redraws", request.bootstrap.max_redraws}};
  if (request.method == TestMethod::MctAsymptotic)
    j["mc"] = {{"draws", request.mc.draws}, {"seed", request.mc.seed}};
  return j;
}

}  // namespace

RawDataset read_raw_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw ParseError("'" + path + "' is empty");
  {
    auto header = split_fields(line);
    for (std::string& h : header)
      std::transform(h.begin(), h.end(), h.begin(),
                     [](unsigned char c) { return std::tolower(c); });
    if (header.size() != 3 || header[0] != "a" || header[1] != "b" || header[2] != "y")
      throw ParseError("'" + path + "' must start with the header 'A,B,y'");
  }
  RawDataset data;
  long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    const std::string where = path + ":" + std::to_string(line_no);
    if (fields.size() != 3) throw ParseError(where + ": expected 3 fields, got " +
                                             std::to_string(fields.size()));
    RawRecord rec;
    rec.level_a = static_cast<int>(parse_int(fields[0], where));
    rec.level_b = static_cast<int>(parse_int(fields[1], where));
    rec.y = parse_double(fields[2], where);
    data.records.push_back(rec);
  }
  if (data.records.empty()) throw ParseError("'" + path + "' contains no data rows");
  return data;
}

DGrid read_matrix_csv(const std::string& path, const std::string& role) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + role + " file '" + path + "'");
  std::vector<std::vector<double>> rows;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    std::vector<double> row;
    row.reserve(fields.size());
    for (const std::string& f : fields)
      row.push_back(parse_double(f, role + " " + path + ":" + std::to_string(line_no)));
    if (!rows.empty() && row.size() != rows.front().size())
      throw ParseError(role + " " + path + ":" + std::to_string(line_no) + ": row has " +
                       std::to_string(row.size()) + " columns, expected " +
                       std::to_string(rows.front().size()));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError(role + " file '" + path + "' is empty");
  DGrid grid(static_cast<int>(rows.size()), static_cast<int>(rows.front().size()), 0.0);
  for (int i = 0; i < grid.rows(); ++i)
    for (int j = 0; j < grid.cols(); ++j) grid(i, j) = rows[i][j];
  return grid;
}

CellSummaryTable summary_from_matrices(const DGrid& mean, const DGrid& n, const DGrid& var) {
  if (!mean.same_shape(n))
    throw DimensionMismatchError("dimension mismatch: mean is " + shape_of(mean) + ", n is " +
                                 shape_of(n));
  if (!mean.same_shape(var))
    throw DimensionMismatchError("dimension mismatch: mean is " + shape_of(mean) + ", var is " +
                                 shape_of(var));
  IGrid counts(n.rows(), n.cols(), 0);
  for (int i = 0; i < n.rows(); ++i)
    for (int j = 0; j < n.cols(); ++j) {
      const double v = n(i, j);
      if (v != std::floor(v) || v < 1)
        throw ParseError("cell size (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                         ") must be a positive integer, got " + format_double(v));
      counts(i, j) = static_cast<int>(v);
    }
  return CellSummaryTable(Layout(n.rows(), n.cols(), std::move(counts)), mean, var);
}

CellSummaryTable summary_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  for (const char* key : {"a", "b", "mean", "n", "var"})
    if (!j.contains(key)) throw ParseError(std::string("summary JSON is missing '") + key + "'");
  if (!j["a"].is_number_integer() || !j["b"].is_number_integer())
    throw ParseError("'a' and 'b' must be integers");
  const int a = j["a"].get<int>(), b = j["b"].get<int>();
  const DGrid mean = json_to_grid(j["mean"], a, b, "mean");
  const DGrid n = json_to_grid(j["n"], a, b, "n");
  const DGrid var = json_to_grid(j["var"], a, b, "var");
  return summary_from_matrices(mean, n, var);
}

CellSummaryTable read_summary_json(const std::string& path) {
  return summary_from_json_text(read_file(path));
}

std::string summary_to_json(const CellSummaryTable& summary) {
  json j{{"a", summary.layout.a},
         {"b", summary.layout.b},
         {"n", grid_to_json(summary.layout.n)},
         {"mean", grid_to_json(summary.mean)},
         {"var", grid_to_json(summary.var)}};
  return j.dump(2) + "\n";
}

std::string format_double(double v) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

namespace {

// Display precision for the human-readable renderers; machine formats keep
// the full 17 digits.
std::string display(double v) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.6g", v);
  return buffer;
}

}  // namespace

std::string report_to_json(const TestReport& report) {
  json stat{{"kind", statistic_kind_name(report.statistic.kind)},
            {"value", report.statistic.value}};
  if (report.statistic.neg_two_log) stat["neg_two_log"] = *report.statistic.neg_two_log;
  if (!report.statistic.detail.empty()) {
    json detail = json::array();
    for (const ContrastComponent& c : report.statistic.detail)
      detail.push_back({{"idx", {c.idx[0] + 1, c.idx[1] + 1, c.idx[2] + 1}}, {"value", c.value}});
    stat["detail"] = std::move(detail);
  }

  json diag{{"nonconverged_redraws", report.diagnostics.nonconverged_redraws},
            {"observed_fit_iterations", report.diagnostics.observed_fit_iterations}};
  if (report.diagnostics.replicates > 0) {
    diag["seed"] = report.diagnostics.seed;
    diag["replicates"] = report.diagnostics.replicates;
  }
  if (report.diagnostics.df > 0) diag["df"] = report.diagnostics.df;

  json j{{"version", report.version},
         {"request", request_to_json(report.request)},
         {"statistic", std::move(stat)},
         {"critical_value", report.critical_value},
         {"decision", report.decision == Decision::Reject ? "reject" : "fail_to_reject"},
         {"diagnostics", std::move(diag)}};
  if (report.p_value) j["p_value"] = *report.p_value;
  if (report.tail) j["tail"] = tail_name(*report.tail);
  return j.dump(2) + "\n";
}

std::string report_to_text(const TestReport& report) {
  std::ostringstream out;
  out << "target:         " << target_name(report.request.target) << "\n"
      << "method:         " << method_name(report.request.method) << "\n"
      << "alpha:          " << report.request.alpha << "\n"
      << "statistic:      " << statistic_kind_name(report.statistic.kind) << " = "
      << display(report.statistic.value) << "\n";
  if (report.statistic.neg_two_log)
    out << "-2 log(lambda): " << display(*report.statistic.neg_two_log) << "\n";
  out << "critical value: " << display(report.critical_value) << "\n";
  if (report.p_value) out << "p-value:        " << display(*report.p_value) << "\n";
  if (report.tail)
    out << "tail:           " << tail_name(*report.tail) << "\n";
  if (report.diagnostics.df > 0) out << "df:             " << report.diagnostics.df << "\n";
  if (report.diagnostics.replicates > 0)
    out << "replicates:     " << report.diagnostics.replicates << "\n"
        << "seed:           " << report.diagnostics.seed << "\n";
  if (report.diagnostics.nonconverged_redraws > 0)
    out << "redraws:        " << report.diagnostics.nonconverged_redraws << "\n";
  out << "decision:       "
      << (report.decision == Decision::Reject ? "REJECT" : "FAIL_TO_REJECT") << "\n";
  return out.str();
}

std::string ci_to_text(const SimultaneousCI& ci) {
  std::ostringstream out;
  out << "family:     " << family_name(ci.family) << "\n"
      << "level:      " << ci.level << "\n"
      << "multiplier: " << display(ci.multiplier) << " (bootstrap, H=" << ci.replicates
      << ", seed=" << ci.seed << ")\n\n";
  out << "label            estimate      lower         upper        significant\n";
  for (const IntervalRow& row : ci.intervals) {
    char line[160];
    std::snprintf(line, sizeof(line), "%-16s %-13.6g %-13.6g %-13.6g %s\n", row.label.c_str(),
                  row.estimate, row.lower, row.upper, row.significant ? "yes" : "no");
    out << line;
  }
  return out.str();
}

std::string ci_to_csv(const SimultaneousCI& ci) {
  std::ostringstream out;
  out << "label,estimate,lower,upper,significant\n";
  for (const IntervalRow& row : ci.intervals)
    out << row.label << ',' << format_double(row.estimate) << ',' << format_double(row.lower)
        << ',' << format_double(row.upper) << ',' << (row.significant ? 1 : 0) << "\n";
  return out.str();
}

std::string simulation_csv_header() {
  return "config,test,method,c,rejections,reps,proportion,stderr\n";
}

std::string simulation_result_csv(const SimulationResult& result) {
  std::ostringstream out;
  for (const TestOutcome& o : result.outcomes) {
    out << result.config_id << ',' << target_name(o.target) << ',' << method_name(o.method) << ','
        << format_double(result.effect_scale) << ',' << o.rejections << ','
        << o.valid(result.outer_reps) << ',' << format_double(o.proportion(result.outer_reps))
        << ',' << format_double(o.std_error(result.outer_reps)) << "\n";
  }
  return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write '" + path + "'");
  out << content;
}

void write_null_sample(const std::string& path, const std::vector<double>& sample) {
  std::ostringstream out;
  for (double v : sample) out << format_double(v) << "\n";
  write_text_file(path, out.str());
}

SimulationConfig read_simulation_config(const std::string& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid config JSON: ") + e.what());
  }
  for (const char* key : {"a", "b", "n", "sigma2", "tests"})
    if (!j.contains(key)) throw ParseError(std::string("config is missing '") + key + "'");

  const int a = j.at("a").get<int>(), b = j.at("b").get<int>();
  const DGrid n_real = json_to_grid(j.at("n"), a, b, "n");
  IGrid n(a, b, 0);
  for (int i = 0; i < a; ++i)
    for (int jj = 0; jj < b; ++jj) n(i, jj) = static_cast<int>(n_real(i, jj));

  SimulationConfig cfg;
  cfg.id = j.value("id", std::string("config"));
  cfg.layout = Layout(a, b, std::move(n));
  cfg.mu = j.value("mu", 0.0);
  cfg.alpha_vec = j.value("alpha", std::vector<double>(a, 0.0));
  cfg.beta_vec = j.value("beta", std::vector<double>(b, 0.0));
  if (j.contains("gamma")) cfg.gamma = json_to_grid(j.at("gamma"), a, b, "gamma");
  cfg.sigma2 = json_to_grid(j.at("sigma2"), a, b, "sigma2");
  cfg.effect_scale = j.value("effect_scale", 1.0);
  cfg.outer_reps = j.value("outer", 2000L);
  cfg.bootstrap.replicates = j.value("inner", 1000);
  cfg.nominal_alpha = j.value("alpha_level", 0.05);
  cfg.bootstrap.alpha = cfg.nominal_alpha;
  cfg.seed = j.value("seed", 0ULL);

  if (j.contains("error_family")) {
    const json& ef = j.at("error_family");
    const std::string type = ef.value("type", std::string("normal"));
    if (type == "normal") {
      cfg.errors = ErrorFamilySpec::normal();
    } else if (type == "normal_mixture") {
      cfg.errors = ErrorFamilySpec::normal_mixture(ef.value("p", 0.5), ef.value("mean1", 0.0),
                                                   ef.value("var1", 1.0), ef.value("mean2", 0.0),
                                                   ef.value("var2", 1.0));
    } else if (type == "student_t") {
      cfg.errors = ErrorFamilySpec::student_t(ef.value("df", 5.0));
    } else if (type == "weibull") {
      cfg.errors = ErrorFamilySpec::weibull(ef.value("shape", 1.0), ef.value("scale", 1.0));
    } else if (type == "laplace") {
      cfg.errors = ErrorFamilySpec::laplace(ef.value("location", 0.0), ef.value("scale", 1.0));
    } else {
      throw ParseError("unknown error family '" + type + "'");
    }
  }

  for (const json& t : j.at("tests")) {
    TestRequest req;
    const std::string target = t.value("target", std::string("treatmentA"));
    if (target == "interaction") req.target = TestTarget::Interaction;
    else if (target == "simpleA") req.target = TestTarget::SimpleA;
    else if (target == "simpleB") req.target = TestTarget::SimpleB;
    else if (target == "treatmentA") req.target = TestTarget::TreatmentA;
    else if (target == "treatmentB") req.target = TestTarget::TreatmentB;
    else throw ParseError("unknown test target '" + target + "'");
    const std::string method = t.value("method", std::string("lrt"));
    if (method == "lrt") req.method = TestMethod::LrtBoot;
    else if (method == "mct") req.method = TestMethod::MctBoot;
    else if (method == "alrt") req.method = TestMethod::LrtAsymptotic;
    else if (method == "amct") req.method = TestMethod::MctAsymptotic;
    else throw ParseError("unknown test method '" + method + "'");
    req.alpha = cfg.nominal_alpha;
    req.bootstrap = cfg.bootstrap;
    cfg.tests.push_back(req);
  }
  cfg.validate();
  return cfg;
}

}  // namespace io
}  // namespace hetanova
