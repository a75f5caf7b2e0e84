#include "ncmodel/scenario.hpp"

#include "ncmodel/charfn.hpp"
#include "ncmodel/dilation.hpp"
#include "ncmodel/error.hpp"
#include "ncmodel/interpolation.hpp"
#include "ncmodel/invariants.hpp"
#include "ncmodel/poisson.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <future>
#include <map>
#include <set>

namespace ncmodel {

namespace {

const std::map<std::string, std::set<std::string>> kTaskKeys = {
    {"shifts", {"emit_matrices"}},
    {"factorize", {"mode", "points", "dump_coefficients"}},
    {"curvature", {"m_max", "theta_m_max"}},
    {"arveson", {"m_max", "samples", "seed", "radii"}},
    {"pick", {"points", "targets", "use_ideal", "expect"}},
    {"wold", {"V"}},
    {"dilate", {}},
    {"model", {}},
};

const std::map<std::string, double> kDefaultTol = {
    {"shifts", 1e-10}, {"factorize", 1e-9}, {"curvature", 1e-8}, {"arveson", 2e-2},
    {"pick", 1e-9},    {"wold", 1e-8},      {"dilate", 1e-10},   {"model", 1e-9},
};

std::string at(const std::string& base, std::size_t k) { return base + "[" + std::to_string(k) + "]"; }

int get_int(const Json& j, const std::string& key, const std::string& where, int lo) {
  const Json& v = j[key];
  if (!v.is_number_integer() || v.get<long long>() < lo)
    throw ParseError(where + "." + key, "expected an integer >= " + std::to_string(lo));
  return v.get<int>();
}

double get_positive(const Json& j, const std::string& key, const std::string& where) {
  const Json& v = j[key];
  if (!v.is_number() || !(v.get<double>() > 0.0)) throw ParseError(where + "." + key, "expected a positive number");
  return v.get<double>();
}

void require_bool(const Json& j, const std::string& key, const std::string& where) {
  if (j.contains(key) && !j[key].is_boolean()) throw ParseError(where + "." + key, "expected true or false");
}

// Each point is a list of n entries, scalars or equal-size square matrices.
std::vector<Tuple> operator_points(const Json& j, int n, const std::string& where) {
  if (!j.is_array() || j.empty()) throw ParseError(where, "expected a non-empty list of points");
  std::vector<Tuple> out;
  for (std::size_t k = 0; k < j.size(); ++k) {
    if (!j[k].is_array() || static_cast<int>(j[k].size()) != n)
      throw ParseError(at(where, k), "a point has exactly n entries");
    out.push_back(tuple_from_json(j[k], at(where, k)));
  }
  return out;
}

std::vector<Point> scalar_points(const Json& j, int n, const std::string& where) {
  if (!j.is_array() || j.empty()) throw ParseError(where, "expected a non-empty list of points");
  std::vector<Point> out;
  for (std::size_t k = 0; k < j.size(); ++k) {
    const Json& p = j[k];
    // n = 1 points may be written as bare scalars
    if (n == 1 && !(p.is_array() && p.size() == 1)) {
      out.push_back({complex_from_json(p, at(where, k))});
      continue;
    }
    if (!p.is_array() || static_cast<int>(p.size()) != n)
      throw ParseError(at(where, k), "a point has exactly n coordinates");
    Point q;
    for (std::size_t t = 0; t < p.size(); ++t) q.push_back(complex_from_json(p[t], at(at(where, k), t)));
    out.push_back(std::move(q));
  }
  return out;
}

void validate_task(const Json& t, const Scenario& s, const std::string& where) {
  if (!t.is_object()) throw ParseError(where, "a task is an object");
  if (!t.contains("type") || !t["type"].is_string()) throw ParseError(where + ".type", "missing task type");
  const std::string type = t["type"].get<std::string>();
  auto keys = kTaskKeys.find(type);
  if (keys == kTaskKeys.end()) throw ParseError(where + ".type", "unknown task type '" + type + "'");
  for (const auto& [k, v] : t.items()) {
    if (k == "type" || k == "tol" || k == "label" || keys->second.count(k)) continue;
    throw ParseError(where + "." + k, "unknown parameter for " + type);
  }
  if (t.contains("tol")) get_positive(t, "tol", where);
  if (t.contains("label") && !t["label"].is_string()) throw ParseError(where + ".label", "expected a string");

  const bool needs_t = type != "shifts" && type != "pick" && !(type == "wold" && t.contains("V"));
  if (needs_t && !s.T) throw ParseError(where, type + " needs the scenario row contraction T");
  const bool needs_fock = type == "shifts" || type == "dilate" || type == "model";
  if (needs_fock && s.N < 1) throw ParseError("$.N", type + " needs a truncation degree N >= 1");

  if (type == "shifts") require_bool(t, "emit_matrices", where);
  if (type == "factorize") {
    if (t.contains("mode") && !t["mode"].is_string()) throw ParseError(where + ".mode", "expected a string");
    const std::string mode = t.value("mode", "point");
    static const std::set<std::string> modes{"point", "constrained_point", "truncated", "constrained_truncated"};
    if (!modes.count(mode)) throw ParseError(where + ".mode", "unknown factorization mode '" + mode + "'");
    if (mode.find("point") != std::string::npos) {
      if (!t.contains("points")) throw ParseError(where + ".points", "point modes need points");
      operator_points(t["points"], s.n, where + ".points");
    } else if (s.N < 1) {
      throw ParseError("$.N", "truncated factorization needs N >= 1");
    }
    require_bool(t, "dump_coefficients", where);
  }
  if (type == "curvature") {
    if (t.contains("m_max")) get_int(t, "m_max", where, 1);
    if (t.contains("theta_m_max")) get_int(t, "theta_m_max", where, 0);
  }
  if (type == "arveson") {
    if (t.contains("m_max")) get_int(t, "m_max", where, 1);
    if (t.contains("samples")) get_int(t, "samples", where, 1);
    if (t.contains("seed") && !t["seed"].is_number_unsigned()) throw ParseError(where + ".seed", "expected a non-negative integer");
    if (t.contains("radii")) {
      const Json& r = t["radii"];
      if (!r.is_array() || r.empty()) throw ParseError(where + ".radii", "expected a non-empty list");
      for (std::size_t k = 0; k < r.size(); ++k)
        if (!r[k].is_number() || r[k].get<double>() <= 0.0 || r[k].get<double>() >= 1.0)
          throw ParseError(at(where + ".radii", k), "radii lie in (0, 1)");
    }
  }
  if (type == "pick") {
    if (!t.contains("points") || !t.contains("targets")) throw ParseError(where, "pick needs points and targets");
    auto pts = scalar_points(t["points"], s.n, where + ".points");
    const Json& tg = t["targets"];
    if (!tg.is_array() || tg.size() != pts.size())
      throw ParseError(where + ".targets", "one target per point");
    Index d = -1;
    for (std::size_t k = 0; k < tg.size(); ++k) {
      Mat a = matrix_from_json(tg[k], at(where + ".targets", k));
      if (a.rows() != a.cols() || (d >= 0 && a.rows() != d))
        throw ParseError(at(where + ".targets", k), "targets are square of one size");
      d = a.rows();
    }
    require_bool(t, "use_ideal", where);
    if (t.contains("expect")) {
      const Json& e = t["expect"];
      if (!e.is_string() || (e != "feasible" && e != "infeasible"))
        throw ParseError(where + ".expect", "expected \"feasible\" or \"infeasible\"");
    }
  }
  if (type == "wold" && t.contains("V")) tuple_from_json(t["V"], where + ".V");
}

Json curvature_json(const CurvatureReport& r) {
  Json extra = Json::object();
  for (const auto& [k, v] : r.extra) extra[k] = v;
  return Json{{"method", r.method}, {"m", r.m},           {"values", r.values}, {"last", r.last},
              {"aitken", r.aitken}, {"budget", r.budget}, {"extra", extra}};
}

Json factorization_json(const FactorizationReport& r) {
  return Json{{"mode", r.mode},
              {"residual", r.residual},
              {"budget", r.budget},
              {"min_eigenvalue", r.min_eigenvalue},
              {"spectral_radius", r.spectral_radius},
              {"pass", r.pass}};
}

struct Context {
  const Scenario& s;
  const Json& t;
  double tol;
  std::uint64_t seed;

  RowContraction rc() const { return RowContraction::validate(*s.T); }
  ConstrainedSubspacePtr cs() const { return build_constrained_subspace(TruncatedFock(s.n, s.N), s.generators); }
};

// Each task returns {result, pass}.
using TaskFn = std::function<std::pair<Json, bool>(const Context&)>;

std::pair<Json, bool> task_shifts(const Context& c) {
  auto cs = c.cs();
  auto sh = constrained_shifts(*cs);
  Json r;
  r["dim"] = cs->dim();
  r["graded"] = cs->graded();
  r["safe_degree"] = cs->safe_degree();
  if (!cs->warning().empty()) r["warning"] = cs->warning();
  if (cs->graded()) {
    std::vector<Index> dims;
    for (int m = 0; m <= cs->degree(); ++m) dims.push_back(cs->slice_dim(m));
    r["dims_per_degree"] = dims;
  }
  if (c.t.value("emit_matrices", true)) {
    r["B"] = tuple_to_json(sh.B);
    r["W"] = tuple_to_json(sh.W);
  }
  auto d = defect_projection_check(*cs, sh);
  r["defect_projection"] = Json{{"window_residual", d.window_residual},
                                {"full_residual", d.full_residual},
                                {"vacuum_rank", d.vacuum_rank}};
  return {r, d.window_residual <= c.tol};
}

std::pair<Json, bool> task_factorize(const Context& c) {
  const std::string mode = c.t.value("mode", "point");
  auto rc = c.rc();
  Json r;
  r["mode"] = mode;
  bool pass = true;
  if (mode == "point" || mode == "constrained_point") {
    Json rows = Json::array();
    for (const Tuple& x : operator_points(c.t["points"], c.s.n, "$.points")) {
      FactorizationReport f = mode == "point" ? verify_point(rc, x, c.tol)
                                              : verify_constrained_point(rc, c.s.generators, x, c.tol);
      pass = pass && f.pass;
      rows.push_back(factorization_json(f));
    }
    r["points"] = rows;
  } else {
    FactorizationReport f = mode == "truncated" ? verify_truncated(rc, TruncatedFock(c.s.n, c.s.N))
                                                : verify_constrained_truncated(rc, c.cs());
    pass = f.pass;
    r["truncated"] = factorization_json(f);
  }
  if (c.t.value("dump_coefficients", false)) {
    auto op = characteristic_coefficients(rc, std::max(1, c.s.N));
    Json coeffs = Json::array();
    for (Index k = 0; k < op.words.dim(); ++k)
      coeffs.push_back(Json{{"word", op.words.word(k).letters()}, {"matrix", matrix_to_json(op.coeffs[k])}});
    r["coefficients"] = coeffs;
  }
  return {r, pass};
}

// Largest m <= m_max whose assembled Theta stays below a dense-size cap.
int theta_window(int n, Index d, Index ds, int m_max) {
  int m = 0;
  while (m < m_max) {
    // dim F_{<=m+1}
    const double dim = n == 1 ? m + 2 : (std::pow(n, m + 2) - 1) / (n - 1);
    if (dim * dim * std::max<Index>(d, 1) * std::max<Index>(ds, 1) > 4e6) break;
    ++m;
  }
  return m;
}

std::pair<Json, bool> task_curvature(const Context& c) {
  auto rc = c.rc();
  const int m_max = c.t.contains("m_max") ? c.t["m_max"].get<int>() : std::max(1, c.s.N);
  Json r;
  r["phi"] = curvature_json(curvature_phi(rc, m_max));
  r["euler"] = curvature_json(euler_phi(rc, m_max));
  int tm = c.t.contains("theta_m_max") ? c.t["theta_m_max"].get<int>()
                                       : theta_window(rc.n(), rc.defect_rank(), rc.defect_star_rank(), m_max);
  bool pass = true;
  if (tm >= 1) {
    auto th = curvature_theta(rc, TruncatedFock(rc.n(), tm), tm);
    r["theta"] = Json{{"m_max", tm},
                      {"curvature", curvature_json(th.curvature)},
                      {"euler", curvature_json(th.euler)},
                      {"slice_deviation", th.slice_deviation},
                      {"cesaro_deviation", th.cesaro_deviation},
                      {"verbatim_deviation", th.verbatim_deviation},
                      {"rank_match", th.rank_match}};
    pass = th.slice_deviation <= c.tol && th.cesaro_deviation <= c.tol && th.rank_match;
  } else {
    r["theta"] = nullptr;
  }
  return {r, pass};
}

std::pair<Json, bool> task_arveson(const Context& c) {
  auto rc = c.rc();
  const int m_max = c.t.contains("m_max") ? c.t["m_max"].get<int>() : (c.s.n <= 2 ? 12 : (c.s.n == 3 ? 6 : 4));
  const std::size_t samples = c.t.contains("samples") ? c.t["samples"].get<std::size_t>() : 100000;
  const std::uint64_t seed = c.t.contains("seed") ? c.t["seed"].get<std::uint64_t>() : c.seed;
  std::vector<double> radii{0.9, 0.99, 0.999};
  if (c.t.contains("radii")) radii = c.t["radii"].get<std::vector<double>>();
  auto a = arveson_curvature(rc, m_max, samples, seed, radii);
  Json r{{"radii", a.radii},
         {"boundary", a.boundary},
         {"boundary_stderr", a.boundary_stderr},
         {"q_trace", curvature_json(a.q_trace)},
         {"q_trace_verbatim", curvature_json(a.q_trace_verbatim)},
         {"euler", curvature_json(a.euler)},
         {"deviation", a.deviation},
         {"samples", a.samples},
         {"seed", a.seed}};
  return {r, a.deviation <= c.tol};
}

std::pair<Json, bool> task_pick(const Context& c) {
  PickProblem p;
  p.n = c.s.n;
  p.points = scalar_points(c.t["points"], c.s.n, "$.points");
  for (std::size_t k = 0; k < c.t["targets"].size(); ++k) p.targets.push_back(matrix_from_json(c.t["targets"][k], "$.targets"));
  if (c.t.value("use_ideal", true)) p.generators = c.s.generators;
  p.tol = c.tol;
  auto res = pick_feasible(p);
  Json r{{"feasible", res.feasible},
         {"marginal", res.marginal},
         {"verdict", !res.feasible ? "infeasible" : (res.marginal ? "feasible (marginal)" : "feasible")},
         {"lambda_min", res.lambda_min},
         {"lambda_max", res.lambda_max},
         {"band", res.band},
         {"matrix", matrix_to_json(res.matrix)}};
  r["certificate"] = res.feasible ? Json(nullptr) : vector_to_json(res.certificate);
  bool pass = true;
  if (c.t.contains("expect")) pass = (c.t["expect"] == "feasible") == res.feasible;
  return {r, pass};
}

std::pair<Json, bool> task_wold(const Context& c) {
  Tuple v = c.t.contains("V") ? tuple_from_json(c.t["V"], "$.V") : *c.s.T;
  auto w = wold_decompose(v);
  auto m = shift_multiplicity(v);
  Json r{{"multiplicity", w.multiplicity},
         {"k0_dim", w.K0_basis.cols()},
         {"k0_kernel_dim", w.K0_kernel_basis.cols()},
         {"k1_dim", w.K1_basis.cols()},
         {"discrepancy", w.discrepancy},
         {"idempotency_defect", w.idempotency_defect},
         {"converged", w.converged},
         {"is_shift", m.is_shift}};
  return {r, !w.converged || w.discrepancy <= c.tol};
}

std::pair<Json, bool> task_dilate(const Context& c) {
  auto b = build_dilation(c.rc(), c.cs());
  auto v = verify_dilation(b);
  double gen_max = 0.0;
  for (double g : b.generator_residuals) gen_max = std::max(gen_max, g);
  Json r{{"dims", Json{{"H", b.rc.dim()}, {"nj", b.cs->dim()}, {"defect", b.kernel.defect_dim()}, {"K", b.K_basis.cols()}}},
         {"dilation_index", b.dilation_index},
         {"isometry_defect", b.isometry_defect},
         {"isometry_budget", b.isometry_budget},
         {"cuntz_defect", b.cuntz_defect},
         {"generator_residuals", b.generator_residuals},
         {"intertwining", Json{{"residual", v.residual}, {"window_residual", v.window_residual}, {"budget", v.budget}}}};
  bool pass = b.isometry_defect <= b.isometry_budget && b.cuntz_defect <= c.tol && gen_max <= c.tol && v.pass;
  return {r, pass};
}

std::pair<Json, bool> task_model(const Context& c) {
  auto m = model_space(c.rc(), c.cs());
  Json r{{"dim", m.basis.cols()},
         {"complement_residual", m.complement_residual},
         {"projection_residual", m.projection_residual},
         {"budget", m.budget},
         {"equivalence_residual", m.equivalence_residual},
         {"unitarity_residual", m.unitarity_residual}};
  return {r, m.complement_residual <= m.budget && m.equivalence_residual <= c.tol};
}

const std::map<std::string, TaskFn> kTasks = {
    {"shifts", task_shifts}, {"factorize", task_factorize}, {"curvature", task_curvature},
    {"arveson", task_arveson}, {"pick", task_pick},         {"wold", task_wold},
    {"dilate", task_dilate},   {"model", task_model},
};

Json run_task(const Scenario& s, std::size_t index, const RunOptions& opts) {
  const TaskSpec& spec = s.tasks[index];
  double tol = kDefaultTol.at(spec.type);
  if (opts.tol) tol = *opts.tol;
  if (spec.params.contains("tol")) tol = spec.params["tol"].get<double>();
  Json out{{"index", index}, {"type", spec.type}, {"tolerance", tol}};
  if (spec.params.contains("label")) out["label"] = spec.params["label"];
  Context ctx{s, spec.params, tol, opts.seed.value_or(s.seed)};
  try {
    auto [result, pass] = kTasks.at(spec.type)(ctx);
    out["result"] = std::move(result);
    out["status"] = pass ? "pass" : "fail";
  } catch (const Error& e) {
    out["status"] = "fail";
    out["error"] = Json{{"kind", to_string(e.kind())}, {"message", e.what()}};
  } catch (const ParseError& e) {
    out["status"] = "fail";
    out["error"] = Json{{"kind", "parse"}, {"message", e.what()}};
  }
  return out;
}

}  // namespace

Scenario parse_scenario(const Json& doc) {
  if (!doc.is_object()) throw ParseError("$", "scenario must be a JSON object");
  static const std::set<std::string> top{"schema", "name", "description", "n", "N", "ideal",
                                         "generators", "T", "seed", "tasks"};
  for (const auto& [k, v] : doc.items())
    if (!top.count(k)) throw ParseError("$." + k, "unknown field");
  if (!doc.contains("schema") || doc["schema"] != kScenarioSchema)
    throw ParseError("$.schema", std::string("expected \"") + kScenarioSchema + "\"");
  Scenario s;
  s.source = doc;
  if (doc.contains("name")) {
    if (!doc["name"].is_string()) throw ParseError("$.name", "expected a string");
    s.name = doc["name"].get<std::string>();
  }
  if (!doc.contains("n")) throw ParseError("$.n", "missing generator count n");
  s.n = get_int(doc, "n", "$", 1);
  s.N = doc.contains("N") ? get_int(doc, "N", "$", 0) : 0;
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) throw ParseError("$.seed", "expected a non-negative integer");
    s.seed = doc["seed"].get<std::uint64_t>();
  }
  s.ideal = doc.value("ideal", Json("free"));
  s.generators = ideal_from_json(s.ideal, s.n, "$.ideal");
  if (doc.contains("generators")) {
    const Json& g = doc["generators"];
    if (!g.is_array()) throw ParseError("$.generators", "expected a list of polynomials");
    for (std::size_t k = 0; k < g.size(); ++k)
      s.generators.push_back(polynomial_from_json(g[k], at("$.generators", k)));
  }
  for (std::size_t k = 0; k < s.generators.size(); ++k) {
    if (s.generators[k].max_letter() > s.n)
      throw ParseError("$.generators", "a generator uses a letter beyond n");
    if (s.N > 0 && s.generators[k].degree() > s.N)
      throw ParseError("$.generators", "a generator has degree above N");
  }
  if (doc.contains("T")) {
    s.T = tuple_from_json(doc["T"], "$.T");
    if (static_cast<int>(s.T->size()) != s.n) throw ParseError("$.T", "expected n matrices");
  }
  if (!doc.contains("tasks") || !doc["tasks"].is_array()) throw ParseError("$.tasks", "expected a list of tasks");
  for (std::size_t k = 0; k < doc["tasks"].size(); ++k) {
    const Json& t = doc["tasks"][k];
    validate_task(t, s, at("$.tasks", k));
    s.tasks.push_back(TaskSpec{t["type"].get<std::string>(), t});
  }
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, "cannot open file");
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ParseError(path, std::string("invalid JSON (") + e.what() + ")");
  }
  return parse_scenario(doc);
}

RunResult run_scenario(const Scenario& s, const RunOptions& opts) {
  std::vector<Json> results(s.tasks.size());
  if (opts.parallel && s.tasks.size() > 1) {
    std::vector<std::future<Json>> futures;
    for (std::size_t k = 0; k < s.tasks.size(); ++k)
      futures.push_back(std::async(std::launch::async, [&s, &opts, k] { return run_task(s, k, opts); }));
    for (std::size_t k = 0; k < futures.size(); ++k) results[k] = futures[k].get();
  } else {
    for (std::size_t k = 0; k < s.tasks.size(); ++k) results[k] = run_task(s, k, opts);
  }
  RunResult out;
  Json counts{{"pass", 0}, {"fail", 0}, {"error", 0}};
  // errored tasks count as failed and are also tallied separately
  for (const auto& r : results) {
    const std::string st = r["status"].get<std::string>();
    counts[st] = counts[st].get<int>() + 1;
    if (r.contains("error")) counts["error"] = counts["error"].get<int>() + 1;
  }
  out.exit_code = counts["fail"].get<int>() > 0 ? 1 : 0;
  out.report = Json{{"schema", kReportSchema},
                    {"scenario", s.source},
                    {"seed", opts.seed.value_or(s.seed)},
                    {"tol_override", opts.tol ? Json(*opts.tol) : Json(nullptr)},
                    {"tasks", results},
                    {"summary", counts}};
  return out;
}

std::string dump_report(const Json& report) { return report.dump(2) + "\n"; }

}  // namespace ncmodel
