#include <doctest.h>

#include "oracles.hpp"
#include "wcprox/driver.hpp"

using namespace wcprox;
using doctest::Approx;
using nlohmann::json;

namespace {

IppaConfig config(const std::string& name, ParamMap params, double x0, Schedule sch, int iters) {
  IppaConfig c;
  c.function = {name, std::move(params), {}};
  c.alpha = 1.0;
  c.x0 = Vector{x0};
  c.schedule = sch;
  c.max_iters = iters;
  return c;
}

}  // namespace

TEST_CASE("schedules") {
  CHECK(Schedule{ScheduleKind::kConstant, 0.1}.at(7) == Approx(0.1));
  CHECK(Schedule{ScheduleKind::kGeometric, 0.1, 0.5}.at(3) == Approx(0.0125));
  CHECK(Schedule{ScheduleKind::kSummable, 0.1}.at(1) == Approx(0.025));
  CHECK_THROWS_AS(Schedule({ScheduleKind::kGeometric, 0.1, 1.0}).validate(), ArgumentError);
}

TEST_CASE("ippa on |x| soft-thresholds to the origin") {
  const IppaTrace t = run_ippa(config("abs", {}, 3.0, {ScheduleKind::kConstant, 0.0}, 5));
  REQUIRE(t.steps.size() == 5);
  const double expect[] = {2, 1, 0, 0, 0};
  for (int k = 0; k < 5; ++k) CHECK(t.steps[k].x_next[0] == Approx(expect[k]));
  CHECK(t.final_criticality.holds());
}

TEST_CASE("ippa on x^2/2 halves the iterate") {
  const IppaTrace t = run_ippa(config("quadratic", {}, 4.0, {ScheduleKind::kConstant, 0.0}, 6));
  for (const IppaStep& s : t.steps) CHECK(s.x_next[0] == Approx(4.0 / std::pow(2.0, s.k + 1)));
}

TEST_CASE("ippa with certificates on cosquad reaches the stationary point") {
  IppaConfig c = config("cosquad", {}, 0.5, {ScheduleKind::kGeometric, 1e-2, 0.5}, 40);
  c.certificates = CertificateMode::kBoth;
  const IppaTrace t = run_ippa(c);
  CHECK(t.final_x[0] == Approx(oracle::kHalfXSinRoot).epsilon(1e-3));
  for (const IppaStep& s : t.steps) {
    INFO("k=" << s.k);
    CHECK(s.verdict.holds());
    REQUIRE(s.type1);
    REQUIRE(s.type2);
    CHECK(squared_norm(s.type1->e) / (2 * c.alpha) <= s.eps + 1e-9);
  }
  // Objective decrease up to eps_k.
  for (std::size_t k = 0; k + 1 < t.steps.size(); ++k) {
    const IppaStep& s = t.steps[k];
    const double lhs = t.steps[k + 1].objective + squared_norm(s.x_next - s.x) / (2 * c.alpha);
    CHECK(lhs <= s.objective + s.eps + 1e-12);
  }
  CHECK(t.final_criticality.holds());
}

TEST_CASE("ippa stopping rule and preconditions") {
  IppaConfig c = config("quadratic", {}, 4.0, {ScheduleKind::kConstant, 0.0}, 200);
  c.tol_residual = 1e-3;
  c.tol_eps = 0.0;
  const IppaTrace t = run_ippa(c);
  CHECK(t.stopped_early);
  CHECK(t.steps.size() < 200);
  IppaConfig bad = config("negquad", {{"a", 2.0}}, 1.0, {ScheduleKind::kConstant, 0.0}, 3);
  CHECK_THROWS_AS(run_ippa(bad), PreconditionError);
}

TEST_CASE("experiment runner: empty, suites and diagnostics") {
  const Report empty = run_experiment(json{{"suites", json::array()}});
  CHECK(empty.records.empty());
  CHECK(empty.exit_code() == 0);

  const Report r = run_experiment(json::parse(R"({"suites":[{"name":"sumrule-roundtrip"},{"name":"type1-chain"}]})"));
  CHECK(r.records.size() == 15);
  CHECK(r.exit_code() == 0);
  for (const ReportRecord& rec : r.records) CHECK(rec.verdict.holds());
  const json j = r.to_json();
  CHECK(j["summary"]["HOLDS"] == 15);
  CHECK(j["records"][0].contains("inputs"));
  CHECK(r.to_csv().rfind("suite,case,verdict,margin,witness\n", 0) == 0);

  CHECK_THROWS_WITH_AS(run_experiment(json::parse(R"({"suites":[{"name":"nope"}]})")),
                       doctest::Contains("config.suites[0].name"), ConfigError);
  CHECK_THROWS_WITH_AS(
      run_experiment(json::parse(R"({"suites":[{"name":"type1-chain","cases":[{"function":"abs","alpha":1}]}]})")),
      doctest::Contains("config.suites[0].cases[0].y"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_json_text("{\n  \"a\": ,\n}", "cfg.json"), doctest::Contains("cfg.json:2:"),
                       ConfigError);
}

TEST_CASE("report exit codes") {
  Report r;
  r.records.push_back({"s", "a", json::object(), Verdict::make_holds(0.0)});
  CHECK(r.exit_code() == 0);
  r.records.push_back({"s", "b", json::object(), Verdict::make_inconclusive(0.0, "x")});
  CHECK(r.exit_code() == 2);
  r.records.push_back({"s", "c", json::object(), Verdict::make_fails(-1.0, Vector{0.0})});
  CHECK(r.exit_code() == 1);
}
