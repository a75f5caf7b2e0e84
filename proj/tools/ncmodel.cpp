#include "ncmodel/error.hpp"
#include "ncmodel/scenario.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using ncmodel::Json;

namespace {

struct Common {
  int n = 1;
  int N = 0;
  std::string ideal = "free";
  std::string T;
};

// Inline JSON when it looks like JSON, otherwise a file path.
Json json_arg(const std::string& text, const std::string& flag) {
  if (!text.empty() && (text.front() == '[' || text.front() == '{')) {
    try {
      return Json::parse(text);
    } catch (const Json::parse_error& e) {
      throw ncmodel::ParseError(flag, std::string("invalid JSON (") + e.what() + ")");
    }
  }
  std::ifstream in(text);
  if (!in) throw ncmodel::ParseError(flag, "cannot open '" + text + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ncmodel::ParseError(flag, std::string("invalid JSON (") + e.what() + ")");
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

// n = 1: "0,0.5" is two points. Otherwise "0.1,0.2;0.3,0" separates points by ';'.
Json points_arg(const std::string& text, int n, const std::string& flag) {
  if (!text.empty() && text.front() == '[') return json_arg(text, flag);
  Json pts = Json::array();
  if (n == 1) {
    for (const auto& p : split(text, ',')) pts.push_back(Json::array({p}));
  } else {
    for (const auto& p : split(text, ';')) {
      Json q = Json::array();
      for (const auto& c : split(p, ',')) q.push_back(c);
      pts.push_back(q);
    }
  }
  return pts;
}

Json targets_arg(const std::string& text, const std::string& flag) {
  if (!text.empty() && text.front() == '[') return json_arg(text, flag);
  Json out = Json::array();
  for (const auto& t : split(text, ',')) out.push_back(t);
  return out;
}

Json ideal_arg(const std::string& text) {
  if (!text.empty() && text.front() == '{') return json_arg(text, "--ideal");
  return text;
}

void add_common(CLI::App* sub, Common& c, bool with_T) {
  sub->add_option("--n", c.n, "number of operators")->check(CLI::PositiveNumber);
  sub->add_option("--N", c.N, "truncation degree")->check(CLI::NonNegativeNumber);
  sub->add_option("--ideal", c.ideal, "free | commutative | q-commutative(q) | truncated(m) | JSON object");
  if (with_T) sub->add_option("--T", c.T, "row contraction: inline JSON list of matrices or a JSON file");
}

Json base_doc(const std::string& name, const Common& c) {
  Json doc{{"schema", ncmodel::kScenarioSchema}, {"name", name}, {"n", c.n}, {"N", c.N}, {"ideal", ideal_arg(c.ideal)}};
  if (!c.T.empty()) doc["T"] = json_arg(c.T, "--T");
  return doc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Noncommutative model theory toolkit: verification reports in JSON"};
  app.require_subcommand(1);

  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  std::string out_path;
  std::string format = "json";
  bool parallel = false;
  app.add_option("--tol", tol, "override default task tolerances")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "random seed");
  app.add_option("--out", out_path, "write the report here instead of stdout");
  app.add_option("--format", format, "output format")->check(CLI::IsMember({"json"}));
  app.add_flag("--parallel", parallel, "run scenario tasks concurrently");
  app.fallthrough();

  Common common;
  Json task;
  std::string scenario_path;

  auto* shifts = app.add_subcommand("shifts", "constrained shifts and the defect projection check");
  add_common(shifts, common, false);
  bool no_matrices = false;
  shifts->add_flag("--no-matrices", no_matrices, "omit B_i and W_i from the report");

  auto* factorize = app.add_subcommand("factorize", "characteristic function factorization");
  add_common(factorize, common, true);
  std::string mode = "point", fact_points;
  bool dump_coeffs = false;
  factorize->add_option("--mode", mode)->check(
      CLI::IsMember({"point", "constrained_point", "truncated", "constrained_truncated"}));
  factorize->add_option("--points", fact_points, "evaluation points");
  factorize->add_flag("--dump-coefficients", dump_coeffs);

  auto* curvature = app.add_subcommand("curvature", "curvature and Euler characteristic sequences");
  add_common(curvature, common, true);
  std::optional<int> curv_m, theta_m;
  curvature->add_option("--m-max", curv_m)->check(CLI::PositiveNumber);
  curvature->add_option("--theta-m-max", theta_m)->check(CLI::NonNegativeNumber);

  auto* arveson = app.add_subcommand("arveson", "commutative curvature, boundary integral against trace formula");
  add_common(arveson, common, true);
  std::optional<int> arv_m;
  std::optional<long> samples;
  std::vector<double> radii;
  arveson->add_option("--m-max", arv_m)->check(CLI::PositiveNumber);
  arveson->add_option("--samples", samples)->check(CLI::PositiveNumber);
  arveson->add_option("--radii", radii)->delimiter(',');

  auto* pick = app.add_subcommand("pick", "Pick matrix feasibility");
  add_common(pick, common, false);
  std::string pick_points, pick_targets, expect;
  bool no_ideal = false;
  pick->add_option("--points", pick_points)->required();
  pick->add_option("--targets", pick_targets)->required();
  pick->add_option("--expect", expect)->check(CLI::IsMember({"feasible", "infeasible"}));
  pick->add_flag("--no-ideal", no_ideal, "ignore the ideal's variety");

  auto* wold = app.add_subcommand("wold", "Wold decomposition of an isometric tuple");
  add_common(wold, common, true);
  std::string V;
  wold->add_option("--V", V, "isometric tuple, inline JSON or file");

  auto* dilate = app.add_subcommand("dilate", "constrained isometric dilation");
  add_common(dilate, common, true);
  auto* model = app.add_subcommand("model", "model space and compression equivalence");
  add_common(model, common, true);

  auto* scenario = app.add_subcommand("scenario", "scenario files");
  scenario->require_subcommand(1);
  auto* run = scenario->add_subcommand("run", "run a scenario file");
  run->add_option("path", scenario_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  ncmodel::RunOptions opts{tol, seed, parallel};
  try {
    ncmodel::Scenario s;
    if (run->parsed()) {
      s = ncmodel::load_scenario(scenario_path);
    } else {
      CLI::App* sub = app.get_subcommands().front();
      Json doc = base_doc("cli:" + sub->get_name(), common);
      Json t{{"type", sub->get_name()}};
      if (sub == shifts) t["emit_matrices"] = !no_matrices;
      if (sub == factorize) {
        t["mode"] = mode;
        if (!fact_points.empty()) t["points"] = points_arg(fact_points, common.n, "--points");
        if (dump_coeffs) t["dump_coefficients"] = true;
      }
      if (sub == curvature) {
        if (curv_m) t["m_max"] = *curv_m;
        if (theta_m) t["theta_m_max"] = *theta_m;
      }
      if (sub == arveson) {
        if (arv_m) t["m_max"] = *arv_m;
        if (samples) t["samples"] = *samples;
        if (!radii.empty()) t["radii"] = radii;
      }
      if (sub == pick) {
        t["points"] = points_arg(pick_points, common.n, "--points");
        t["targets"] = targets_arg(pick_targets, "--targets");
        if (no_ideal) t["use_ideal"] = false;
        if (!expect.empty()) t["expect"] = expect;
      }
      if (sub == wold && !V.empty()) t["V"] = json_arg(V, "--V");
      doc["tasks"] = Json::array({t});
      s = ncmodel::parse_scenario(doc);
    }
    auto result = ncmodel::run_scenario(s, opts);
    const std::string text = ncmodel::dump_report(result.report);
    if (out_path.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(out_path, std::ios::binary);
      if (!out) {
        std::cerr << "error: cannot write " << out_path << "\n";
        return 2;
      }
      out << text;
    }
    return result.exit_code;
  } catch (const ncmodel::ParseError& e) {
    std::cerr << "parse error at " << e.what() << "\n";
    return 2;
  } catch (const ncmodel::Error& e) {
    std::cerr << "error (" << ncmodel::to_string(e.kind()) << "): " << e.what() << "\n";
    return 2;
  }
}
