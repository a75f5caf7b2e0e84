#pragma once

#include "ncmodel/json_io.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ncmodel {

inline constexpr const char* kScenarioSchema = "ncmodel.scenario/1";
inline constexpr const char* kReportSchema = "ncmodel.report/1";

struct TaskSpec {
  std::string type;  // shifts | factorize | curvature | arveson | pick | wold | dilate | model
  Json params;       // the task object as written
};

struct Scenario {
  std::string name;
  int n = 1;
  int N = 0;
  Json ideal;  // as written, "free" when absent
  std::vector<NcPolynomial> generators;
  std::optional<Tuple> T;
  std::uint64_t seed = 0;
  std::vector<TaskSpec> tasks;
  Json source;  // the parsed document, echoed into the report
};

// Throws ParseError with a JSON path on any schema violation.
Scenario parse_scenario(const Json& doc);
Scenario load_scenario(const std::string& path);

struct RunOptions {
  std::optional<double> tol;            // for tasks that do not set their own tol
  std::optional<std::uint64_t> seed;    // overrides the scenario seed
  bool parallel = false;
};

struct RunResult {
  Json report;
  int exit_code = 0;  // 0 all passed, 1 some task failed or errored
};

RunResult run_scenario(const Scenario& s, const RunOptions& opts = {});

// Sorted keys, two-space indent, trailing newline.
std::string dump_report(const Json& report);

}  // namespace ncmodel
