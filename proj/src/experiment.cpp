#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <iterator>
#include <sstream>

#include "wcprox/driver.hpp"
#include "wcprox/iprox.hpp"
#include "wcprox/subdiff.hpp"
#include "wcprox/sumrule.hpp"

namespace wcprox {

using nlohmann::json;

namespace {

const json& field(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw ConfigError(path + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(path + "." + key + ": missing field");
  return *it;
}

double as_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path + ": expected a number");
  return j.get<double>();
}

int as_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ConfigError(path + ": expected an integer");
  return j.get<int>();
}

std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) throw ConfigError(path + ": expected a string");
  return j.get<std::string>();
}

Vector as_vector(const json& j, const std::string& path) {
  if (j.is_number()) return Vector{j.get<double>()};
  if (!j.is_array() || j.empty()) throw ConfigError(path + ": expected a number or non-empty array of numbers");
  std::vector<double> xs;
  for (std::size_t i = 0; i < j.size(); ++i) xs.push_back(as_number(j[i], path + "[" + std::to_string(i) + "]"));
  try {
    return Vector(std::move(xs));
  } catch (const ArgumentError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

template <class T, class F>
std::vector<T> as_list(const json& j, const std::string& path, F&& each) {
  if (!j.is_array()) throw ConfigError(path + ": expected an array");
  std::vector<T> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(each(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<Vector> vector_list(const json& obj, const std::string& key, const std::string& path,
                                std::vector<Vector> fallback) {
  if (!obj.contains(key)) return fallback;
  return as_list<Vector>(obj[key], path + "." + key, as_vector);
}

std::vector<double> number_list(const json& obj, const std::string& key, const std::string& path,
                                std::vector<double> fallback) {
  if (!obj.contains(key)) return fallback;
  const json& j = obj[key];
  if (j.is_number()) return {j.get<double>()};
  return as_list<double>(j, path + "." + key, as_number);
}

json function_to_json(const FunctionDesc& d) {
  json j{{"name", d.name}, {"params", d.params}};
  if (!d.terms.empty()) {
    j["terms"] = json::array();
    for (const auto& t : d.terms) j["terms"].push_back(function_to_json(t));
  }
  return j;
}

FunctionSpec build(const FunctionDesc& d, const std::string& path) {
  try {
    return make_function(d);
  } catch (const ArgumentError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

struct SuiteContext {
  std::optional<GridDomain> grid;
  Tolerance tol;

  GridDomain grid_for(std::size_t n) const {
    if (grid && grid->dim() == n) return *grid;
    if (grid && grid->dim() == 1) {
      return GridDomain::cube(n, grid->lo()[0], grid->hi()[0], grid->step());
    }
    return standard_grid(n);
  }
};

ReportRecord record(const std::string& suite, std::string id, json inputs, Verdict v) {
  return {suite, std::move(id), std::move(inputs), std::move(v)};
}

// ---------------------------------------------------------------------------
// Suites

void membership_sweep(const json& s, const std::string& path, const SuiteContext& ctx, Report& out) {
  const FunctionDesc fd = s.contains("function") ? parse_function(s["function"], path + ".function")
                                                 : FunctionDesc{"abs", {}, {}};
  const FunctionSpec f = build(fd, path + ".function");
  const auto x0s = vector_list(s, "x0", path, {Vector{0.0}, Vector{1.0}});
  const auto vs = vector_list(s, "v", path, {Vector{0.0}, Vector{0.5}, Vector{1.5}});
  const auto epss = number_list(s, "eps", path, {0.0, 0.1});
  const auto Cs = number_list(s, "C", path, {0.0, 0.5});
  const double gamma = s.contains("gamma") ? as_number(s["gamma"], path + ".gamma") : 2.0;
  int id = 0;
  for (const auto& x0 : x0s) {
    const GridDomain g = ctx.grid_for(x0.dim());
    for (const auto& v : vs) {
      for (double eps : epss) {
        for (double C : Cs) {
          const json in{{"function", function_to_json(fd)}, {"x0", vector_to_json(x0)}, {"v", vector_to_json(v)},
                        {"eps", eps}, {"C", C}, {"gamma", gamma}};
          try {
            out.records.push_back(record("membership-sweep", "m" + std::to_string(id++), in,
                                         membership_grid(f, {x0, v, eps, C, gamma}, g, ctx.tol)));
          } catch (const ArgumentError& e) {
            throw ConfigError(path + ": " + e.what());
          }
        }
      }
    }
  }
}

std::vector<std::pair<FunctionDesc, FunctionDesc>> default_pairs() {
  return {{{"quadratic", {{"a", 1.0}, {"c", 2.0}}, {}}, {"abs", {}, {}}},
          {{"quadratic", {{"a", 1.0}, {"c", 0.0}}, {}}, {"negquad", {{"a", 1.0}}, {}}},
          {{"abs", {}, {}}, {"abs", {}, {}}},
          {{"huber", {{"delta", 1.0}}, {}}, {"mcp", {{"lambda", 1.0}, {"gamma", 2.0}}, {}}},
          {{"cosquad", {}, {}}, {"scad", {{"lambda", 1.0}, {"gamma", 3.0}}, {}}}};
}

void sumrule_roundtrip(const json& s, const std::string& path, const SuiteContext& ctx, Report& out) {
  std::vector<std::pair<FunctionDesc, FunctionDesc>> pairs = default_pairs();
  if (s.contains("pairs")) {
    pairs = as_list<std::pair<FunctionDesc, FunctionDesc>>(s["pairs"], path + ".pairs", [](const json& j, const std::string& p) {
      return std::make_pair(parse_function(field(j, "f0", p), p + ".f0"), parse_function(field(j, "f1", p), p + ".f1"));
    });
  }
  const auto xs = vector_list(s, "x", path, {Vector{0.5}, Vector{1.1}});
  const auto epss = number_list(s, "eps", path, {0.01});
  int id = 0;
  for (std::size_t pi = 0; pi < pairs.size(); ++pi) {
    const FunctionSpec f0 = build(pairs[pi].first, path + ".pairs");
    const FunctionSpec f1 = build(pairs[pi].second, path + ".pairs");
    const FunctionSpec sum = FunctionSpec::sum(f0, f1);
    for (const auto& x : xs) {
      const GridDomain g = ctx.grid_for(x.dim());
      for (double eps : epss) {
        json in{{"f0", function_to_json(pairs[pi].first)}, {"f1", function_to_json(pairs[pi].second)},
                {"x", vector_to_json(x)}, {"eps", eps}};
        const std::string cid = "r" + std::to_string(id++);
        const auto us = sample_subgradients(sum, x, eps, 1, g, ctx.tol);
        if (us.empty()) {
          out.records.push_back(record("sumrule-roundtrip", cid, in,
                                       Verdict::make_inconclusive(0.0, "no verified subgradient of the sum")));
          continue;
        }
        try {
          const SumDecomposition d = decompose_subgradient(f0, f0.rho(), f1, f1.rho(), x, us.front(), eps, g, ctx.tol);
          in["u"] = vector_to_json(d.u);
          in["p0"] = vector_to_json(d.p0);
          in["p1"] = vector_to_json(d.p1);
          in["eps0"] = d.eps0;
          in["eps1"] = d.eps1;
          out.records.push_back(record("sumrule-roundtrip", cid, in, d.verdict));
        } catch (const InconsistencyError& e) {
          out.records.push_back(record("sumrule-roundtrip", cid, in, Verdict::make_fails(-1.0, x, e.what())));
        }
      }
    }
  }
}

struct ChainCase {
  FunctionDesc f;
  double alpha;
  Vector y;
  double eps;
};

void type1_chain(const json& s, const std::string& path, const SuiteContext& ctx, Report& out) {
  std::vector<ChainCase> cases{{{"abs", {}, {}}, 1.0, Vector{2.0}, 0.005},
                               {{"negquad", {{"a", 1.0}}, {}}, 0.5, Vector{1.0}, 0.0},
                               {{"cosquad", {}, {}}, 1.0, Vector{2.0}, 1e-4},
                               {{"mcp", {{"lambda", 1.0}, {"gamma", 2.0}}, {}}, 1.0, Vector{1.5}, 0.01},
                               {{"scad", {{"lambda", 1.0}, {"gamma", 3.0}}, {}}, 1.0, Vector{-2.5}, 0.01}};
  if (s.contains("cases")) {
    cases = as_list<ChainCase>(s["cases"], path + ".cases", [](const json& j, const std::string& p) {
      return ChainCase{parse_function(field(j, "function", p), p + ".function"),
                       as_number(field(j, "alpha", p), p + ".alpha"), as_vector(field(j, "y", p), p + ".y"),
                       as_number(field(j, "eps", p), p + ".eps")};
    });
  }
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const ChainCase& c = cases[i];
    const std::string p = path + ".cases[" + std::to_string(i) + "]";
    const FunctionSpec f = build(c.f, p + ".function");
    const GridDomain g = ctx.grid_for(c.y.dim());
    json in{{"function", function_to_json(c.f)}, {"alpha", c.alpha}, {"y", vector_to_json(c.y)}, {"eps", c.eps}};
    const std::string cid = "c" + std::to_string(i);
    try {
      const ProxQuery q{c.y, c.alpha, c.eps};
      const ProxSolution sol = solve_eps_prox(f, f.rho(), q);
      const Type1Certificate t1 = certify_type1(f, f.rho(), q, sol.x, g, ctx.tol);
      const Type1Certificate t1s = certify_type1_single_eps(f, f.rho(), q, sol.x, g, ctx.tol);
      const Verdict imp = type1_implies_type2(t1, f, f.rho(), q, g, ctx.tol);
      in["x_eps"] = vector_to_json(sol.x);
      in["gap_bound"] = sol.gap_bound;
      in["e"] = vector_to_json(t1.e);
      in["eps0"] = t1.eps0;
      in["eps1"] = t1.eps1;
      in["type1"] = to_string(t1.verdict.status);
      in["type1_single_eps"] = to_string(t1s.verdict.status);
      in["type2"] = to_string(imp.status);
      out.records.push_back(record("type1-chain", cid, in, combine(combine(t1.verdict, t1s.verdict), imp)));
    } catch (const PreconditionError& e) {
      throw ConfigError(p + ": " + e.what());
    } catch (const BudgetError& e) {
      out.records.push_back(record("type1-chain", cid, in, Verdict::make_inconclusive(e.best().gap_bound, e.what())));
    } catch (const InconsistencyError& e) {
      out.records.push_back(record("type1-chain", cid, in, Verdict::make_fails(-1.0, c.y, e.what())));
    }
  }
}

void ippa_suite(const json& s, const std::string& path, const SuiteContext& ctx, Report& out) {
  json defaults{{"function", {{"name", "cosquad"}}}, {"alpha", 1.0}, {"x0", 0.5},
                {"schedule", {{"kind", "geometric"}, {"eps0", 1e-2}, {"q", 0.5}}},
                {"max_iters", 40}, {"certificates", "both"}};
  for (auto it = s.begin(); it != s.end(); ++it) defaults[it.key()] = it.value();
  IppaConfig cfg = parse_ippa(defaults, path);
  if (!cfg.grid) cfg.grid = ctx.grid_for(cfg.x0.dim());
  cfg.tol = ctx.tol;
  IppaTrace tr;
  try {
    tr = run_ippa(cfg);
  } catch (const std::logic_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  for (const IppaStep& st : tr.steps) {
    json in{{"k", st.k}, {"x", vector_to_json(st.x)}, {"x_next", vector_to_json(st.x_next)}, {"eps", st.eps},
            {"objective", st.objective}, {"residual", st.residual}, {"gap_bound", st.gap_bound}};
    if (st.type1) {
      in["e"] = vector_to_json(st.type1->e);
      in["eps0"] = st.type1->eps0;
      in["eps1"] = st.type1->eps1;
    }
    out.records.push_back(record("ippa", "k" + std::to_string(st.k), in, st.verdict));
  }
  json fin{{"x", vector_to_json(tr.final_x)}, {"objective", tr.final_objective}, {"eps", tr.criticality_eps},
           {"iterations", tr.steps.size()}};
  Verdict v = tr.final_criticality;
  if (tr.error) {
    fin["error"] = *tr.error;
    v = combine(v, Verdict::make_inconclusive(v.margin, *tr.error));
  }
  out.records.push_back(record("ippa", "final", fin, v));
}

}  // namespace

// ---------------------------------------------------------------------------

json vector_to_json(const Vector& v) { return json(v.values()); }

json verdict_to_json(const Verdict& v) {
  json j{{"status", to_string(v.status)}, {"margin", v.margin}};
  j["witness"] = v.witness ? vector_to_json(*v.witness) : json(nullptr);
  if (v.first_violation) j["first_violation"] = vector_to_json(*v.first_violation);
  if (!v.reason.empty()) j["reason"] = v.reason;
  return j;
}

FunctionDesc parse_function(const json& j, const std::string& path) {
  if (j.is_string()) return {j.get<std::string>(), {}, {}};
  FunctionDesc d;
  d.name = as_string(field(j, "name", path), path + ".name");
  if (j.contains("params")) {
    const json& p = j["params"];
    if (!p.is_object()) throw ConfigError(path + ".params: expected an object");
    for (auto it = p.begin(); it != p.end(); ++it) d.params[it.key()] = as_number(it.value(), path + ".params." + it.key());
  }
  if (j.contains("terms")) {
    d.terms = as_list<FunctionDesc>(j["terms"], path + ".terms", parse_function);
  }
  build(d, path);
  return d;
}

GridDomain parse_grid(const json& j, const std::string& path) {
  const Vector lo = as_vector(field(j, "lo", path), path + ".lo");
  const Vector hi = as_vector(field(j, "hi", path), path + ".hi");
  const double step = as_number(field(j, "step", path), path + ".step");
  try {
    return GridDomain(lo, hi, step);
  } catch (const std::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

IppaConfig parse_ippa(const json& j, const std::string& path) {
  IppaConfig cfg;
  cfg.function = parse_function(field(j, "function", path), path + ".function");
  cfg.alpha = as_number(field(j, "alpha", path), path + ".alpha");
  cfg.x0 = as_vector(field(j, "x0", path), path + ".x0");
  const json& sch = field(j, "schedule", path);
  const std::string sp = path + ".schedule";
  const std::string kind = as_string(field(sch, "kind", sp), sp + ".kind");
  if (kind == "constant") {
    cfg.schedule.kind = ScheduleKind::kConstant;
  } else if (kind == "geometric") {
    cfg.schedule.kind = ScheduleKind::kGeometric;
    cfg.schedule.q = as_number(field(sch, "q", sp), sp + ".q");
  } else if (kind == "summable") {
    cfg.schedule.kind = ScheduleKind::kSummable;
  } else {
    throw ConfigError(sp + ".kind: unknown schedule '" + kind + "'");
  }
  cfg.schedule.eps0 = sch.contains("eps") ? as_number(sch["eps"], sp + ".eps")
                                          : as_number(field(sch, "eps0", sp), sp + ".eps0");
  if (j.contains("max_iters")) cfg.max_iters = as_int(j["max_iters"], path + ".max_iters");
  if (j.contains("certificates")) {
    try {
      cfg.certificates = certificate_mode_from_string(as_string(j["certificates"], path + ".certificates"));
    } catch (const ArgumentError& e) {
      throw ConfigError(path + ".certificates: " + e.what());
    }
  }
  if (j.contains("tol_residual")) cfg.tol_residual = as_number(j["tol_residual"], path + ".tol_residual");
  if (j.contains("tol_eps")) cfg.tol_eps = as_number(j["tol_eps"], path + ".tol_eps");
  if (j.contains("grid")) cfg.grid = parse_grid(j["grid"], path + ".grid");
  return cfg;
}

json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ConfigError(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + e.what());
  }
}

Report run_experiment(const json& config, const std::optional<GridDomain>& grid, const Tolerance& tol) {
  if (!config.is_object()) throw ConfigError("config: expected an object");
  const json& suites = field(config, "suites", "config");
  if (!suites.is_array()) throw ConfigError("config.suites: expected an array");

  using Runner = void (*)(const json&, const std::string&, const SuiteContext&, Report&);
  struct Job {
    std::string path;
    json spec;
    SuiteContext ctx;
    Runner run;
  };
  std::vector<Job> jobs;
  for (std::size_t i = 0; i < suites.size(); ++i) {
    const std::string path = "config.suites[" + std::to_string(i) + "]";
    json s = suites[i];
    const std::string name = as_string(field(s, "name", path), path + ".name");
    SuiteContext ctx{grid, tol};
    if (s.contains("grid")) ctx.grid = parse_grid(s["grid"], path + ".grid");
    if (s.contains("abs_tol")) ctx.tol.abs_tol = as_number(s["abs_tol"], path + ".abs_tol");
    Runner run = nullptr;
    if (name == "membership-sweep") {
      run = membership_sweep;
    } else if (name == "sumrule-roundtrip") {
      run = sumrule_roundtrip;
    } else if (name == "type1-chain") {
      run = type1_chain;
    } else if (name == "ippa") {
      s.erase("name");
      s.erase("abs_tol");
      run = ippa_suite;
    } else {
      throw ConfigError(path + ".name: unknown suite '" + name + "'");
    }
    jobs.push_back({path, std::move(s), std::move(ctx), run});
  }

  // Suites are independent; each writes its own report, merged in config order.
  std::vector<std::future<Report>> parts;
  for (const Job& job : jobs) {
    parts.push_back(std::async(std::launch::async, [&job] {
      Report r;
      job.run(job.spec, job.path, job.ctx, r);
      return r;
    }));
  }
  Report out;
  for (auto& part : parts) {
    Report r = part.get();
    std::move(r.records.begin(), r.records.end(), std::back_inserter(out.records));
  }
  return out;
}

Report run_experiment_file(const std::string& path, const std::optional<GridDomain>& grid,
                           const Tolerance& tol) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open");
  std::stringstream ss;
  ss << in.rdbuf();
  return run_experiment(parse_json_text(ss.str(), path), grid, tol);
}

json Report::to_json() const {
  json recs = json::array();
  std::map<std::string, int> summary{{"HOLDS", 0}, {"FAILS", 0}, {"INCONCLUSIVE", 0}};
  for (const ReportRecord& r : records) {
    json j = verdict_to_json(r.verdict);
    j["suite"] = r.suite;
    j["case"] = r.case_id;
    j["inputs"] = r.inputs;
    j["verdict"] = j["status"];
    j.erase("status");
    recs.push_back(std::move(j));
    ++summary[to_string(r.verdict.status)];
  }
  return json{{"records", recs}, {"summary", summary}};
}

std::string Report::to_csv() const {
  std::ostringstream os;
  os.precision(17);
  os << "suite,case,verdict,margin,witness\n";
  for (const ReportRecord& r : records) {
    os << r.suite << ',' << r.case_id << ',' << to_string(r.verdict.status) << ',' << r.verdict.margin << ',';
    if (r.verdict.witness) {
      const auto& w = r.verdict.witness->values();
      for (std::size_t i = 0; i < w.size(); ++i) os << (i ? ";" : "") << w[i];
    }
    os << '\n';
  }
  return os.str();
}

int Report::exit_code() const {
  bool inconclusive = false;
  for (const ReportRecord& r : records) {
    if (r.verdict.fails()) return 1;
    inconclusive = inconclusive || r.verdict.inconclusive();
  }
  return inconclusive ? 2 : 0;
}

}  // namespace wcprox
