// Command-line front end: each subcommand reads a JSON problem file and
// writes a report. Exit codes: 0 all HOLDS, 1 any FAILS, 2 any INCONCLUSIVE,
// 3 usage or input error.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "wcprox/conjugate.hpp"
#include "wcprox/driver.hpp"
#include "wcprox/iprox.hpp"
#include "wcprox/subdiff.hpp"
#include "wcprox/sumrule.hpp"

using namespace wcprox;
using nlohmann::json;

namespace {

constexpr int kUsageError = 3;

struct Globals {
  std::string grid_spec;
  double tol = Tolerance{}.abs_tol;
  std::string out;
  std::string format = "json";
};

struct Context {
  std::optional<GridDomain> grid;
  Tolerance tol;

  GridDomain grid_for(const json& problem, std::size_t n) const {
    if (problem.contains("grid")) return parse_grid(problem["grid"], "problem.grid");
    if (grid) return GridDomain::cube(n, grid->lo()[0], grid->hi()[0], grid->step());
    return standard_grid(n);
  }
};

std::optional<GridDomain> parse_grid_flag(const std::string& s) {
  if (s.empty()) return std::nullopt;
  std::stringstream ss(s);
  std::string part;
  std::vector<double> xs;
  while (std::getline(ss, part, ',')) {
    try {
      std::size_t used = 0;
      xs.push_back(std::stod(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw ConfigError("--grid: '" + part + "' is not a number");
    }
  }
  if (xs.size() != 3) throw ConfigError("--grid: expected lo,hi,step");
  try {
    return GridDomain::cube(1, xs[0], xs[1], xs[2]);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("--grid: ") + e.what());
  }
}

json load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str(), path);
}

const json& need(const json& j, const std::string& key) {
  if (!j.is_object()) throw ConfigError("problem: expected an object");
  if (!j.contains(key)) throw ConfigError("problem." + key + ": missing field");
  return j[key];
}

double number(const json& j, const std::string& key) {
  const json& v = need(j, key);
  if (!v.is_number()) throw ConfigError("problem." + key + ": expected a number");
  return v.get<double>();
}

double number_or(const json& j, const std::string& key, double fallback) {
  return j.contains(key) ? number(j, key) : fallback;
}

Vector vec(const json& j, const std::string& key) {
  const json& v = need(j, key);
  if (v.is_number()) return Vector{v.get<double>()};
  if (!v.is_array() || v.empty()) throw ConfigError("problem." + key + ": expected a number or array");
  std::vector<double> xs;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) throw ConfigError("problem." + key + "[" + std::to_string(i) + "]: expected a number");
    xs.push_back(v[i].get<double>());
  }
  return Vector(std::move(xs));
}

std::vector<Vector> vec_list(const json& j, const std::string& key) {
  const json& v = need(j, key);
  if (v.is_array() && !v.empty() && v[0].is_array()) {
    std::vector<Vector> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(vec(json{{key, v[i]}}, key));
    return out;
  }
  return {vec(j, key)};
}

FunctionSpec function_at(const json& j, const std::string& key, FunctionDesc* desc = nullptr) {
  const FunctionDesc d = parse_function(need(j, key), "problem." + key);
  if (desc) *desc = d;
  return make_function(d);
}

ProxQuery prox_query(const json& p) { return {vec(p, "y"), number(p, "alpha"), number(p, "eps")}; }

// ---------------------------------------------------------------------------

Report check_membership(const json& p, const Context& ctx) {
  const FunctionSpec f = function_at(p, "function");
  const SubgradientQuery q{vec(p, "x0"), vec(p, "v"), number(p, "eps"), number(p, "C"), number_or(p, "gamma", 2.0)};
  const std::string method = p.value("method", std::string("grid"));
  const GridDomain g = ctx.grid_for(p, q.x0.dim());
  const json in{{"x0", vector_to_json(q.x0)}, {"v", vector_to_json(q.v)}, {"eps", q.eps}, {"C", q.C},
                {"gamma", q.gamma}, {"method", method}};
  Report r;
  if (method == "grid" || method == "both") {
    r.records.push_back({"check-membership", "grid", in, membership_grid(f, q, g, ctx.tol)});
  }
  if (method == "conjugate" || method == "both") {
    r.records.push_back({"check-membership", "conjugate", in, membership_via_conjugate(f, q, g, ctx.tol)});
  }
  if (r.records.empty()) throw ConfigError("problem.method: expected grid, conjugate or both");
  return r;
}

Report conjugate_cmd(const json& p, const Context& ctx) {
  const FunctionSpec f = function_at(p, "function");
  const double rho = number(p, "rho");
  const auto us = vec_list(p, "u");
  const GridDomain g = ctx.grid_for(p, us.front().dim());
  Report r;
  for (std::size_t i = 0; i < us.size(); ++i) {
    const ConjugateValue c = rho_conjugate(f, rho, us[i], g);
    json in{{"rho", rho}, {"u", vector_to_json(us[i])}, {"value", c.value},
            {"exactness", to_string(c.exactness)}, {"slop", c.slop}};
    if (c.argsup) in["argsup"] = vector_to_json(*c.argsup);
    const Verdict v = c.tail_ok ? Verdict::make_holds(0.0)
                                : Verdict::make_inconclusive(0.0, "grid sup beyond the hull not bounded");
    r.records.push_back({"conjugate", "u" + std::to_string(i), in, v});
  }
  if (p.value("check_identity", false)) {
    r.records.push_back({"conjugate", "identity", json{{"rho", rho}}, conjugate_identity_check(f, rho, us, g, ctx.tol)});
  }
  return r;
}

Report sum_rule(const json& p, const Context& ctx) {
  const FunctionSpec f0 = function_at(p, "f0");
  const FunctionSpec f1 = function_at(p, "f1");
  const double rho0 = number_or(p, "rho0", f0.rho());
  const double rho1 = number_or(p, "rho1", f1.rho());
  const Vector x = vec(p, "x");
  const GridDomain g = ctx.grid_for(p, x.dim());
  const std::string mode = p.value("mode", std::string("decompose"));
  Report r;
  if (mode == "forward") {
    const json in{{"x", vector_to_json(x)}};
    r.records.push_back({"sum-rule", "forward", in,
                         forward_sum_inclusion(f0, rho0, number(p, "eps0"), vec(p, "w"), f1, rho1, number(p, "eps1"),
                                               vec(p, "v"), x, g, ctx.tol)});
  } else if (mode == "decompose") {
    const double eps = number(p, "eps");
    const SumDecomposition d = decompose_subgradient(f0, rho0, f1, rho1, x, vec(p, "u"), eps, g, ctx.tol);
    const json in{{"x", vector_to_json(x)}, {"u", vector_to_json(d.u)}, {"eps", eps},
                  {"p0", vector_to_json(d.p0)}, {"p1", vector_to_json(d.p1)}, {"eps0", d.eps0},
                  {"eps1", d.eps1}, {"member0", to_string(d.member0.status)},
                  {"member1", to_string(d.member1.status)}, {"value", d.conjugate.value},
                  {"joint", d.conjugate.joint}};
    r.records.push_back({"sum-rule", "decompose", in, d.verdict});
  } else if (mode == "smooth-shift") {
    const double rho = number_or(p, "rho", f1.rho());
    const json in{{"x", vector_to_json(x)}, {"rho", rho}};
    r.records.push_back({"sum-rule", "smooth-shift", in,
                         smooth_shift_inclusion(f0, f1, rho, x, vec(p, "u"), number(p, "eps"), g, ctx.tol)});
  } else {
    throw ConfigError("problem.mode: expected decompose, forward or smooth-shift");
  }
  return r;
}

Report eps_prox(const json& p, const Context& ctx) {
  const FunctionSpec f = function_at(p, "function");
  const ProxQuery q = prox_query(p);
  const GridDomain g = ctx.grid_for(p, q.y.dim());
  Report r;
  json in{{"y", vector_to_json(q.y)}, {"alpha", q.alpha}, {"eps", q.eps}};
  const ProxSolution sol = solve_eps_prox(f, number_or(p, "rho", f.rho()), q);
  in["x_eps"] = vector_to_json(sol.x);
  in["gap_bound"] = sol.gap_bound;
  in["exact"] = sol.exact;
  const EpsProxSet set = eps_prox_set(f, q, g, ctx.tol);
  in["set_size"] = set.points.size();
  in["reference"] = set.reference;
  in["threshold"] = set.threshold;
  if (q.y.dim() == 1 && !set.points.empty()) {
    in["set_min"] = set.points.front()[0];
    in["set_max"] = set.points.back()[0];
  }
  r.records.push_back({"eps-prox", "solve", in, Verdict::make_holds(q.eps - sol.gap_bound)});
  return r;
}

Report certify(const std::string& kind, const json& p, const Context& ctx) {
  const FunctionSpec f = function_at(p, "function");
  const ProxQuery q = prox_query(p);
  const double rho = number_or(p, "rho", f.rho());
  const GridDomain g = ctx.grid_for(p, q.y.dim());
  const Vector x = p.contains("x_eps") ? vec(p, "x_eps") : solve_eps_prox(f, rho, q).x;
  json in{{"y", vector_to_json(q.y)}, {"alpha", q.alpha}, {"eps", q.eps}, {"x_eps", vector_to_json(x)}};
  Report r;
  if (kind == "type2" || kind == "chain") {
    const Type2Certificate c = certify_type2(f, rho, q, x, g, ctx.tol);
    json i2 = in;
    i2["v"] = vector_to_json(c.v);
    i2["C_prime"] = c.C_prime;
    r.records.push_back({"certify", "type2", i2, c.verdict});
  }
  if (kind == "type1" || kind == "chain") {
    const Type1Certificate c = certify_type1(f, rho, q, x, g, ctx.tol);
    json i1 = in;
    i1["e"] = vector_to_json(c.e);
    i1["vector"] = vector_to_json(c.vector);
    i1["eps0"] = c.eps0;
    i1["eps1"] = c.eps1;
    r.records.push_back({"certify", "type1", i1, c.verdict});
    if (kind == "chain") {
      r.records.push_back({"certify", "type1-single-eps", in, certify_type1_single_eps(f, rho, q, x, g, ctx.tol).verdict});
      r.records.push_back({"certify", "type1-implies-type2", in, type1_implies_type2(c, f, rho, q, g, ctx.tol)});
    }
  }
  return r;
}

Report ippa(const json& p, const Context& ctx) {
  json cfg = p;
  json suite{{"suites", json::array()}};
  cfg["name"] = "ippa";
  suite["suites"].push_back(cfg);
  return run_experiment(suite, ctx.grid, ctx.tol);
}

void emit(const Report& r, const Globals& g) {
  const std::string text = g.format == "csv" ? r.to_csv() : r.to_json().dump(2) + "\n";
  if (g.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(g.out);
  if (!os) throw ConfigError(g.out + ": cannot write");
  os << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Inexact proximal operators of weakly convex functions"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--grid", g.grid_spec, "Grid lo,hi,step (cube in the problem dimension)");
  app.add_option("--tol", g.tol, "Absolute tolerance")->check(CLI::NonNegativeNumber);
  app.add_option("--out", g.out, "Write the report here instead of stdout");
  app.add_option("--format", g.format, "Report format")->check(CLI::IsMember({"json", "csv"}));

  std::string problem;
  std::string kind = "chain";
  auto add = [&](const std::string& name, const std::string& help, bool with_kind = false) {
    CLI::App* sub = app.add_subcommand(name, help);
    if (with_kind) {
      sub->add_option("kind", kind, "type1, type2 or chain")->required()->check(CLI::IsMember({"type1", "type2", "chain"}));
    }
    sub->add_option("problem", problem, "JSON problem file")->required()->check(CLI::ExistingFile);
    return sub;
  };
  CLI::App* c_member = add("check-membership", "Proximal eps-subdifferential membership");
  CLI::App* c_conj = add("conjugate", "rho-conjugate values");
  CLI::App* c_sum = add("sum-rule", "Sum-rule decomposition, forward inclusion or smooth shift");
  CLI::App* c_prox = add("eps-prox", "Certified eps-proximal point and grid eps-prox set");
  CLI::App* c_cert = add("certify", "Type-1 / Type-2 certificates", true);
  CLI::App* c_ippa = add("ippa", "Inexact proximal point iteration");
  CLI::App* c_suite = add("suite", "Experiment suites");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    Context ctx{parse_grid_flag(g.grid_spec), Tolerance{g.tol, std::nullopt}};
    Report r;
    if (*c_suite) {
      r = run_experiment_file(problem, ctx.grid, ctx.tol);
    } else {
      const json p = load(problem);
      if (*c_member) r = check_membership(p, ctx);
      if (*c_conj) r = conjugate_cmd(p, ctx);
      if (*c_sum) r = sum_rule(p, ctx);
      if (*c_prox) r = eps_prox(p, ctx);
      if (*c_cert) r = certify(kind, p, ctx);
      if (*c_ippa) r = ippa(p, ctx);
    }
    emit(r, g);
    return r.exit_code();
  } catch (const InconsistencyError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const BudgetError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  }
}
