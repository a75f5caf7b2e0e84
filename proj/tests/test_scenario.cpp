#include "ncmodel/scenario.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

using namespace ncmodel;

namespace {

Json trivial() {
  return Json{{"schema", kScenarioSchema},
              {"name", "trivial"},
              {"n", 1},
              {"T", Json::array({0})},
              {"tasks", Json::array({Json{{"type", "factorize"}, {"points", Json::array({Json::array({0.5})})}}})}};
}

std::string where_of(const Json& doc) {
  try {
    parse_scenario(doc);
  } catch (const ParseError& e) {
    return e.where();
  }
  return "<parsed>";
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Scenario, TrivialFactorizationPasses) {
  auto r = run_scenario(parse_scenario(trivial()));
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.report["tasks"][0]["status"], "pass");
  EXPECT_EQ(r.report["schema"], kReportSchema);
}

TEST(Scenario, PointOutsideBallFailsWithPrecondition) {
  Json doc = trivial();
  doc["tasks"].push_back(Json{{"type", "factorize"}, {"points", Json::array({Json::array({1.0})})}});
  auto r = run_scenario(parse_scenario(doc));
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_EQ(r.report["tasks"][0]["status"], "pass");
  EXPECT_EQ(r.report["tasks"][1]["status"], "fail");
  EXPECT_EQ(r.report["tasks"][1]["error"]["kind"], "precondition");
  EXPECT_EQ(r.report["summary"]["fail"], 1);
}

TEST(Scenario, NotARowContractionFailsOnlyItsTasks) {
  Json doc = trivial();
  doc["T"] = Json::array({2.0});
  doc["tasks"].push_back(Json{{"type", "pick"}, {"points", {0, 0.5}}, {"targets", {0, 0.25}}});
  auto r = run_scenario(parse_scenario(doc));
  EXPECT_EQ(r.report["tasks"][0]["error"]["kind"], "not-a-row-contraction");
  EXPECT_EQ(r.report["tasks"][1]["status"], "pass");
  EXPECT_EQ(r.exit_code, 1);
}

TEST(ScenarioParse, ErrorsCarryPaths) {
  Json doc = trivial();
  doc.erase("schema");
  EXPECT_EQ(where_of(doc), "$.schema");

  doc = trivial();
  doc["n"] = 0;
  EXPECT_EQ(where_of(doc), "$.n");

  doc = trivial();
  doc["extra"] = 1;
  EXPECT_EQ(where_of(doc), "$.extra");

  doc = trivial();
  doc["T"] = Json::array({0, 0});
  EXPECT_EQ(where_of(doc), "$.T");

  doc = trivial();
  doc["tasks"][0]["type"] = "integrate";
  EXPECT_EQ(where_of(doc), "$.tasks[0].type");

  doc = trivial();
  doc["tasks"][0]["points"] = Json::array({Json::array({0.1, 0.2})});
  EXPECT_EQ(where_of(doc), "$.tasks[0].points[0]");

  doc = trivial();
  doc["tasks"][0]["mode"] = "truncated";
  EXPECT_EQ(where_of(doc), "$.N");

  doc = trivial();
  doc["tasks"].push_back(Json{{"type", "pick"}, {"points", {0, 0.5}}, {"targets", {0}}});
  EXPECT_EQ(where_of(doc), "$.tasks[1].targets");

  doc = trivial();
  doc["tasks"][0]["tol"] = -1;
  EXPECT_EQ(where_of(doc), "$.tasks[0].tol");
}

TEST(ScenarioParse, TasksNeedingTRequireIt) {
  Json doc = trivial();
  doc.erase("T");
  EXPECT_EQ(where_of(doc), "$.tasks[0]");
}

TEST(Scenario, ToleranceOverrideOrder) {
  Json doc = trivial();
  doc["tasks"].push_back(Json{{"type", "factorize"}, {"points", {{0.1}}}, {"tol", 1e-6}});
  RunOptions opts;
  opts.tol = 1e-7;
  auto r = run_scenario(parse_scenario(doc), opts);
  EXPECT_EQ(r.report["tasks"][0]["tolerance"], 1e-7);
  EXPECT_EQ(r.report["tasks"][1]["tolerance"], 1e-6);
}

TEST(Scenario, CoisometricCurvatureIsZero) {
  Json doc{{"schema", kScenarioSchema},
           {"n", 2},
           {"T", Json::array({Json::array({std::sqrt(0.5), 0.0}), Json::array({std::sqrt(0.5), 0.0})})},
           {"tasks", Json::array({Json{{"type", "curvature"}, {"m_max", 4}}})}};
  auto r = run_scenario(parse_scenario(doc));
  ASSERT_EQ(r.report["tasks"][0]["status"], "pass");
  for (double v : r.report["tasks"][0]["result"]["phi"]["values"].get<std::vector<double>>()) EXPECT_NEAR(v, 0.0, 1e-15);
}

TEST(Scenario, ParallelMatchesSequential) {
  Scenario s = load_scenario(NCMODEL_GOLDEN_DIR "/nilpotent_pair.scenario.json");
  RunOptions par;
  par.parallel = true;
  EXPECT_EQ(dump_report(run_scenario(s).report), dump_report(run_scenario(s, par).report));
}

TEST(Golden, NilpotentPairReproducesByteForByte) {
  Scenario s = load_scenario(NCMODEL_GOLDEN_DIR "/nilpotent_pair.scenario.json");
  auto r = run_scenario(s);
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(dump_report(r.report), slurp(NCMODEL_GOLDEN_DIR "/nilpotent_pair.report.json"));
}

TEST(Golden, SeedChangesOnlySampledFields) {
  Scenario s = load_scenario(NCMODEL_GOLDEN_DIR "/nilpotent_pair.scenario.json");
  RunOptions other;
  other.seed = 7;
  Json a = run_scenario(s).report, b = run_scenario(s, other).report;
  EXPECT_EQ(b["seed"], 7);
  EXPECT_EQ(a["tasks"][3], b["tasks"][3]);
  EXPECT_EQ(b["tasks"][4]["result"]["seed"], 7);
}
