// Acceptance harness: one PASS/FAIL line per criterion. Every tolerance,
// sample count and seed is pinned here. With an argument N only criterion N
// runs; the exit status is nonzero when any executed criterion fails.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "wcprox/conjugate.hpp"
#include "wcprox/driver.hpp"
#include "wcprox/iprox.hpp"
#include "wcprox/subdiff.hpp"
#include "wcprox/sumrule.hpp"

using namespace wcprox;

namespace {

constexpr double kAbsTol = 1e-9;
constexpr double kConjTol = 1e-6;
constexpr double kGoldenTol = 1e-6;
constexpr double kBudgetTol = 1e-9;
constexpr double kIppaTol = 1e-3;

struct Outcome {
  bool pass;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

const Tolerance kTol{kAbsTol, std::nullopt};

std::vector<FunctionSpec> catalog() { return catalog_samples(); }

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

// Element of the derivative box drawn uniformly.
double box_draw(const FunctionSpec& f, double x, std::mt19937_64& rng) {
  const Interval iv = f.derivative_box(Vector{x})[0];
  return std::uniform_real_distribution<double>(iv.lo, std::nextafter(iv.hi, iv.hi + 1))(rng);
}

// Grid point of the standard 1D grid inside [-3, 3].
double grid_x(std::mt19937_64& rng) { return std::uniform_int_distribution<int>(-300, 300)(rng) * 0.01; }

std::vector<std::pair<FunctionSpec, FunctionSpec>> pairs() {
  return {{quadratic(1.0, 2.0), abs_fn()}, {quadratic(1.0, 0.0), negquad(1.0)}, {abs_fn(), abs_fn()},
          {huber(1.0), mcp(1.0, 2.0)},     {cosquad(), scad(1.0, 3.0)},         {mcp(1.0, 2.0), scad(1.0, 3.0)},
          {abs_fn(), cosquad()},           {huber(1.0), quadratic(1.0, 0.0)},   {scad(1.0, 3.0), abs_fn()},
          {mcp(1.0, 2.0), cosquad()}};
}

// ---------------------------------------------------------------------------

Outcome c1_modulus() {
  const GridDomain g = standard_grid(1);
  int bad = 0;
  for (const FunctionSpec& f : catalog()) bad += !check_weak_convexity(f, f.rho(), g, kTol).holds();
  const Verdict nq = check_weak_convexity(negquad(1.0), 0.5, g, kTol);
  const bool witness0 = nq.fails() && nq.witness && near((*nq.witness)[0], 0.0, 1e-12);
  std::ostringstream os;
  os << (catalog().size() - bad) << "/" << catalog().size() << " entries pass at their modulus; negquad(1) at rho=0.5 "
     << to_string(nq.status) << " witness " << (nq.witness ? nq.witness->to_string() : "none");
  return {bad == 0 && witness0, os.str()};
}

Outcome c2_monotonicity() {
  const GridDomain g = standard_grid(1);
  const auto cat = catalog();
  std::mt19937_64 rng(1002);
  std::uniform_int_distribution<std::size_t> pick(0, cat.size() - 1);
  std::uniform_real_distribution<double> noise(-0.5, 0.5), ed(0.0, 0.3), cd(0.0, 1.0);
  int holds = 0, violations = 0;
  for (int k = 0; k < 500; ++k) {
    const FunctionSpec& f = cat[pick(rng)];
    const double x0 = grid_x(rng);
    const SubgradientQuery q{Vector{x0}, Vector{box_draw(f, x0, rng) + noise(rng)}, ed(rng), cd(rng)};
    if (!membership_grid(f, q, g, kTol).holds()) continue;
    ++holds;
    SubgradientQuery qe = q, qc = q;
    qe.eps += 0.1;
    qc.C += 0.1;
    violations += !membership_grid(f, qe, g, kTol).holds();
    violations += !membership_grid(f, qc, g, kTol).holds();
  }
  return {violations == 0, "500 queries, " + std::to_string(holds) + " HOLDS re-queried, " +
                               std::to_string(violations) + " violations"};
}

Outcome c3_shift_identity() {
  const GridDomain g = standard_grid(1);
  const auto cat = catalog();
  std::mt19937_64 rng(1003);
  std::uniform_int_distribution<std::size_t> pick(0, cat.size() - 1);
  std::uniform_real_distribution<double> noise(-0.5, 0.5), ed(0.0, 0.3);
  int compared = 0, disagreements = 0, holds = 0, excluded = 0;
  for (int k = 0; k < 200; ++k) {
    const FunctionSpec& f = cat[pick(rng)];
    const double x0 = grid_x(rng), rho = f.rho();
    const Vector v{box_draw(f, x0, rng) + noise(rng)};
    const double eps = ed(rng);
    const SubgradientQuery q{Vector{x0}, v, eps, 0.5 * rho};
    const Verdict a = membership_grid(f, q, g, kTol);
    const Verdict b = membership_via_conjugate(f, q, g, kTol);
    const Verdict c = membership_grid(convexified(f, rho), {Vector{x0}, v + rho * Vector{x0}, eps, 0.0}, g, kTol);
    if (a.inconclusive() || b.inconclusive() || c.inconclusive()) {
      ++excluded;
      continue;
    }
    ++compared;
    holds += a.holds();
    disagreements += (a.holds() != b.holds()) || (a.holds() != c.holds());
  }
  std::ostringstream os;
  os << compared << " compared (" << holds << " HOLDS), " << excluded << " INCONCLUSIVE excluded, "
     << disagreements << " disagreements";
  return {disagreements == 0 && compared > 0, os.str()};
}

Outcome c4_nonemptiness() {
  const GridDomain g = standard_grid(1);
  std::mt19937_64 rng(1004);
  std::uniform_real_distribution<double> xd(-4.0, 4.0);
  int empty = 0, total = 0;
  for (const FunctionSpec& f : catalog()) {
    for (double eps : {0.01, 0.1}) {
      for (int k = 0; k < 50; ++k, ++total) empty += sample_subgradients(f, Vector{xd(rng)}, eps, 1, g, kTol).empty();
    }
  }
  return {empty == 0, std::to_string(total - empty) + "/" + std::to_string(total) + " points yield a verified element"};
}

Outcome c5_globalisation() {
  const GridDomain g = standard_grid(1);
  const auto cat = catalog();
  std::mt19937_64 rng(1005);
  std::uniform_int_distribution<std::size_t> pick(0, cat.size() - 1);
  std::uniform_real_distribution<double> noise(-0.3, 0.3);
  int local_holds = 0, counterexamples = 0, undecided = 0;
  for (int k = 0; k < 100; ++k) {
    const FunctionSpec& f = cat[pick(rng)];
    const double x0 = grid_x(rng);
    const double v = box_draw(f, x0, rng) + (k % 2 ? noise(rng) : 0.0);
    const GlobalisationResult r = check_globalisation(f, {Vector{x0}, Vector{v}, 0.0, 0.5 * f.rho()}, 0.5, g, kTol);
    local_holds += r.local.holds();
    counterexamples += r.implication.fails();
    undecided += r.implication.inconclusive();
  }
  std::ostringstream os;
  os << "100 queries, " << local_holds << " local HOLDS, " << counterexamples << " counterexamples, " << undecided
     << " global INCONCLUSIVE";
  return {counterexamples == 0 && local_holds > 0, os.str()};
}

Outcome c6_conjugate_identity() {
  const GridDomain g = standard_grid(1);
  std::mt19937_64 rng(1006);
  std::uniform_real_distribution<double> ud(-2.0, 2.0);
  int bad = 0, points = 0;
  for (const FunctionSpec& f : catalog()) {
    for (double rho : {f.rho(), f.rho() + 0.5}) {
      std::vector<Vector> us;
      const bool singleton = f.name() == "negquad" && rho == f.rho();
      while (us.size() < 50) {
        const Vector u{singleton ? 0.0 : ud(rng)};
        if (std::isfinite(f.analytic_conjugate(rho, u))) us.push_back(u);
      }
      const GridConjugate grid(f, rho, g);
      for (const Vector& u : us) {
        const ConjugateValue c = grid(u);
        const double a = f.analytic_conjugate(rho, u);
        bad += !c.tail_ok || std::abs(a - c.value) > kConjTol + c.slop;
        ++points;
      }
      bad += !conjugate_identity_check(f, rho, us, g, kTol).holds();
    }
  }
  const double q = rho_conjugate(quadratic(1.0, 0.0), 1.0, Vector{2.0}, g).value;
  const double a = rho_conjugate(abs_fn(), 1.0, Vector{3.0}, g).value;
  const bool golden = near(q, oracle::kConjQuadGolden, kGoldenTol) && near(a, oracle::kConjAbsGolden, kGoldenTol);
  std::ostringstream os;
  os << points << " u-points, " << bad << " disagreements; golden " << q << ", " << a;
  return {bad == 0 && golden, os.str()};
}

Outcome c7_decomposition() {
  const GridDomain g = standard_grid(1);
  std::mt19937_64 rng(1007);
  std::uniform_real_distribution<double> sd(-1.5, 1.5);
  int bad = 0, total = 0;
  double worst = 0.0;
  for (const auto& [f0, f1] : pairs()) {
    for (int k = 0; k < 20; ++k, ++total) {
      const ConjugateDecomposition d = conjugate_sum_decompose(f0, f0.rho(), f1, f1.rho(), Vector{sd(rng)}, g, kTol);
      bad += !d.verdict.holds();
      worst = std::max(worst, std::abs(d.value - d.joint));
    }
  }
  const ConjugateDecomposition gd = conjugate_sum_decompose(quadratic(1.0, 2.0), 0.0, abs_fn(), 0.0, Vector{0.0}, g, kTol);
  const bool golden = near(gd.p0[0], oracle::kDecompP0, kGoldenTol) && near(gd.p1[0], -oracle::kDecompP0, kGoldenTol) &&
                      near(gd.value, oracle::kDecompValue, kGoldenTol);
  std::ostringstream os;
  os << total << " cases, " << bad << " off the joint conjugate (max |diff| " << worst << "); golden (" << gd.p0[0]
     << ", " << gd.p1[0] << ", " << gd.value << ")";
  return {bad == 0 && golden, os.str()};
}

Outcome c8_forward_sum() {
  const GridDomain g = standard_grid(1);
  const auto cat = catalog();
  std::mt19937_64 rng(1008);
  std::uniform_int_distribution<std::size_t> pick(0, cat.size() - 1);
  std::uniform_real_distribution<double> xd(-3.0, 3.0), ed(0.0, 0.2);
  int samples = 0, holds = 0;
  while (samples < 200) {
    const FunctionSpec& f0 = cat[pick(rng)];
    const FunctionSpec& f1 = cat[pick(rng)];
    const Vector x{xd(rng)};
    const double e0 = ed(rng), e1 = ed(rng);
    const auto ws = sample_subgradients(f0, x, e0, 4, g, kTol);
    const auto vs = sample_subgradients(f1, x, e1, 4, g, kTol);
    if (ws.empty() || vs.empty()) continue;
    const Vector& w = ws[std::uniform_int_distribution<std::size_t>(0, ws.size() - 1)(rng)];
    const Vector& v = vs[std::uniform_int_distribution<std::size_t>(0, vs.size() - 1)(rng)];
    try {
      holds += forward_sum_inclusion(f0, f0.rho(), e0, w, f1, f1.rho(), e1, v, x, g, kTol).holds();
      ++samples;
    } catch (const ArgumentError&) {
      // premise not verified on the grid; draw again
    }
  }
  return {holds == samples, std::to_string(holds) + "/" + std::to_string(samples) + " HOLDS"};
}

Outcome c9_round_trip() {
  const GridDomain g = standard_grid(1);
  const auto ps = pairs();
  std::mt19937_64 rng(1009);
  std::uniform_int_distribution<std::size_t> pick(0, ps.size() - 1);
  std::uniform_real_distribution<double> xd(-2.5, 2.5), ed(0.001, 0.2);
  int samples = 0, good = 0;
  while (samples < 100) {
    const auto& [f0, f1] = ps[pick(rng)];
    const Vector x{xd(rng)};
    const double eps = ed(rng);
    const auto us = sample_subgradients(FunctionSpec::sum(f0, f1), x, eps, 4, g, kTol);
    if (us.empty()) continue;
    const Vector& u = us[std::uniform_int_distribution<std::size_t>(0, us.size() - 1)(rng)];
    ++samples;
    try {
      const SumDecomposition d = decompose_subgradient(f0, f0.rho(), f1, f1.rho(), x, u, eps, g, kTol);
      good += d.eps0 + d.eps1 <= eps + kBudgetTol && d.member0.holds() && d.member1.holds();
    } catch (const std::exception&) {
      // counted as a failure
    }
  }
  const SumDecomposition gd =
      decompose_subgradient(quadratic(1.0, 2.0), 0.0, abs_fn(), 0.0, Vector{1.1}, Vector{0.0}, 0.005, g, kTol);
  const bool golden = near(gd.eps0, 0.005, kBudgetTol) && near(gd.eps1, 0.0, kBudgetTol);
  std::ostringstream os;
  os.precision(12);
  os << good << "/" << samples << " round trips within budget with both memberships; golden eps0=" << gd.eps0
     << " eps1=" << gd.eps1;
  return {good == samples && golden, os.str()};
}

Outcome c10_smooth_shift() {
  const GridDomain g = standard_grid(1);
  const auto cat = catalog();
  std::mt19937_64 rng(1010);
  std::uniform_int_distribution<std::size_t> pick(0, cat.size() - 1);
  std::uniform_real_distribution<double> ad(0.2, 2.0), cd(-2.0, 2.0), xd(-2.5, 2.5), ed(0.001, 0.2);
  int samples = 0, holds = 0;
  while (samples < 100) {
    const FunctionSpec f0 = samples % 2 ? huber(ad(rng)) : quadratic(ad(rng), cd(rng));
    const FunctionSpec& f1 = cat[pick(rng)];
    const Vector x{xd(rng)};
    const double eps = ed(rng);
    const auto us = sample_subgradients(FunctionSpec::sum(f0, f1), x, eps, 4, g, kTol);
    if (us.empty()) continue;
    const Vector& u = us[std::uniform_int_distribution<std::size_t>(0, us.size() - 1)(rng)];
    ++samples;
    holds += smooth_shift_inclusion(f0, f1, f1.rho(), x, u, eps, g, kTol).holds();
  }
  // (x^2)/2 + |x| at x = 1, u = 3, eps = 0.5: the shifted vector is 2.
  const bool premise =
      membership_grid(FunctionSpec::sum(quadratic(1.0, 0.0), abs_fn()), {Vector{1.0}, Vector{3.0}, 0.5, 0.0}, g, kTol)
          .holds();
  const Verdict with = membership_grid(abs_fn(), {Vector{1.0}, Vector{2.0}, 0.5, 0.5}, g, kTol);
  const Verdict without = membership_grid(abs_fn(), {Vector{1.0}, Vector{2.0}, 0.5, 0.0}, g, kTol);
  std::ostringstream os;
  os << holds << "/" << samples << " HOLDS; documented sample: C=L0/2 " << to_string(with.status) << ", C=0 "
     << to_string(without.status);
  if (without.witness) os << " (witness " << without.witness->to_string() << ")";
  return {holds == samples && premise && with.holds() && without.fails(), os.str()};
}

Outcome c11_eps_prox_equivalence() {
  const GridDomain g = standard_grid(1);
  const double h = g.step();
  const EpsProxSet s = eps_prox_set(abs_fn(), {Vector{2.0}, 1.0, 0.005}, g, kTol);
  bool golden = !s.points.empty() && near(s.points.front()[0], oracle::kEpsProxLo, h + 1e-12) &&
                near(s.points.back()[0], oracle::kEpsProxHi, h + 1e-12);
  const ProxQuery gq{Vector{2.0}, 1.0, 0.005};
  const bool t11 = certify_type2(abs_fn(), 0.0, gq, Vector{1.1}, g, kTol).verdict.holds();
  const bool t12 = certify_type2(abs_fn(), 0.0, gq, Vector{1.2}, g, kTol).verdict.fails();
  golden = golden && t11 && t12;

  const auto cat = catalog();
  std::mt19937_64 rng(1011);
  std::uniform_int_distribution<std::size_t> pick(0, cat.size() - 1);
  std::uniform_real_distribution<double> yd(-3.0, 3.0), ed(0.001, 0.2), td(-2.0, 2.0);
  int compared = 0, banded = 0, inconclusive = 0, dis_flat = 0, dis_curved = 0, type2_only = 0;
  for (int k = 0; k < 100; ++k) {
    const FunctionSpec& f = cat[pick(rng)];
    const double alpha = 0.5 / std::max(f.rho(), 0.5);
    const ProxQuery q{Vector{yd(rng)}, alpha, ed(rng)};
    const ProxSolution sol = solve_eps_prox(f, f.rho(), q);
    const EpsProxSet set = eps_prox_set(f, q, g, kTol);
    // Probe around the sublevel boundary so both classes occur.
    const Vector x{sol.x[0] + td(rng) * std::sqrt(2.0 * alpha * q.eps)};
    const double excess = prox_objective(f, q, x) - set.threshold;
    const Verdict t2 = certify_type2(f, f.rho(), q, x, g, kTol).verdict;
    if (std::abs(excess) <= 2.0 * set.grid_slop + kAbsTol) {
      ++banded;
      continue;
    }
    if (t2.inconclusive()) {
      ++inconclusive;
      continue;
    }
    ++compared;
    if ((excess <= 0.0) != t2.holds()) {
      ++(f.rho() > 0.0 ? dis_curved : dis_flat);
      type2_only += t2.holds();
    }
  }
  std::ostringstream os;
  os << "golden " << (golden ? "ok" : "off") << "; " << compared << " compared, " << banded << " in band, "
     << inconclusive << " INCONCLUSIVE; disagreements rho=0: " << dis_flat << ", rho>0: " << dis_curved << " ("
     << type2_only << " Type-2 HOLDS outside the eps-prox set)";
  return {golden && dis_flat + dis_curved == 0, os.str()};
}

Outcome c12_type1_chain() {
  const GridDomain g = standard_grid(1);
  const ProxQuery gq{Vector{2.0}, 1.0, 0.005};
  const Type1Certificate c = certify_type1(abs_fn(), 0.0, gq, Vector{1.1}, g, kTol);
  const bool golden = near(c.e[0], -0.1, kBudgetTol) && near(c.eps0, 0.005, kBudgetTol) &&
                      near(c.eps1, 0.0, kBudgetTol) && near(c.vector[0], 1.0, kBudgetTol) && c.verdict.holds() &&
                      type1_implies_type2(c, abs_fn(), 0.0, gq, g, kTol).holds() &&
                      certify_type1_single_eps(abs_fn(), 0.0, gq, Vector{1.1}, g, kTol).verdict.holds();

  const auto cat = catalog();
  std::mt19937_64 rng(1012);
  std::uniform_int_distribution<std::size_t> pick(0, cat.size() - 1);
  std::uniform_real_distribution<double> yd(-3.0, 3.0), ed(0.001, 0.1), ad(0.2, 1.0);
  int ok = 0;
  for (int k = 0; k < 50; ++k) {
    const FunctionSpec& f = cat[pick(rng)];
    const double alpha = ad(rng) / std::max(f.rho(), 1.0);
    const ProxQuery q{Vector{yd(rng)}, alpha, ed(rng)};
    try {
      const ProxSolution sol = solve_eps_prox(f, f.rho(), q);
      // The certificate grid must contain x_eps and y with room to spare.
      const double reach = std::ceil(std::max({5.0, std::abs(sol.x[0]) + 3.0, std::abs(q.y[0]) + 3.0}));
      const GridDomain gc = GridDomain::cube(1, -reach, reach, 0.01);
      const Type1Certificate t1 = certify_type1(f, f.rho(), q, sol.x, gc, kTol);
      const Type1Certificate t1s = certify_type1_single_eps(f, f.rho(), q, sol.x, gc, kTol);
      ok += t1.verdict.holds() && t1s.verdict.holds() && type1_implies_type2(t1, f, f.rho(), q, gc, kTol).holds() &&
            certify_type2(f, f.rho(), q, sol.x, gc, kTol).verdict.holds();
    } catch (const std::exception&) {
      // counted as a failure
    }
  }
  std::ostringstream os;
  os.precision(12);
  os << "golden e=" << c.e[0] << " eps0=" << c.eps0 << " eps1=" << c.eps1 << " vector=" << c.vector[0] << "; " << ok
     << "/50 random chains HOLDS";
  return {golden && ok == 50, os.str()};
}

Outcome c13_ippa() {
  IppaConfig cfg;
  cfg.function = {"cosquad", {}, {}};
  cfg.alpha = 1.0;
  cfg.x0 = Vector{0.5};
  cfg.schedule = {ScheduleKind::kGeometric, 1e-2, 0.5};
  cfg.max_iters = 40;
  cfg.certificates = CertificateMode::kBoth;
  cfg.tol = kTol;
  const IppaTrace t = run_ippa(cfg);
  const double target = oracle::bisect([](double x) { return 0.5 * x - std::sin(x); }, 1.5, 2.5);
  int verified = 0;
  for (const IppaStep& s : t.steps) verified += s.verdict.holds();
  const bool ok = !t.error && t.steps.size() <= 40 && verified == int(t.steps.size()) &&
                  near(t.final_x[0], target, kIppaTol);
  std::ostringstream os;
  os.precision(10);
  os << "final x=" << t.final_x[0] << " target " << target << " after " << t.steps.size() << " steps, " << verified
     << " certificates verified";
  return {ok, os.str()};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {1, "modulus validation", c1_modulus},
      {2, "membership monotonicity", c2_monotonicity},
      {3, "shift identity (grid vs conjugate)", c3_shift_identity},
      {4, "subdifferential nonemptiness", c4_nonemptiness},
      {5, "globalisation", c5_globalisation},
      {6, "rho-conjugate identity", c6_conjugate_identity},
      {7, "conjugate decomposition", c7_decomposition},
      {8, "sum rule forward", c8_forward_sum},
      {9, "sum rule round trip", c9_round_trip},
      {10, "smooth shift", c10_smooth_shift},
      {11, "eps-prox equivalence", c11_eps_prox_equivalence},
      {12, "Type-1 chain", c12_type1_chain},
      {13, "IPPA sanity", c13_ippa},
  };
  const int only = argc > 1 ? std::atoi(argv[1]) : 0;
  int failed = 0;
  for (const Criterion& c : all) {
    if (only && c.id != only) continue;
    Outcome o{false, ""};
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("[%s] %2d %s: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
