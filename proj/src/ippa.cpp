#include <cmath>

#include "wcprox/driver.hpp"
#include "wcprox/subdiff.hpp"

namespace wcprox {

double Schedule::at(int k) const {
  switch (kind) {
    case ScheduleKind::kConstant:
      return eps0;
    case ScheduleKind::kGeometric:
      return eps0 * std::pow(q, k);
    case ScheduleKind::kSummable:
      return eps0 / (double(k + 1) * double(k + 1));
  }
  return eps0;
}

void Schedule::validate() const {
  if (!(eps0 >= 0.0) || !std::isfinite(eps0)) throw ArgumentError("schedule: eps0 must be >= 0");
  if (kind == ScheduleKind::kGeometric && !(q > 0.0 && q < 1.0)) {
    throw ArgumentError("schedule: geometric ratio must lie in (0, 1)");
  }
}

CertificateMode certificate_mode_from_string(const std::string& s) {
  if (s == "none") return CertificateMode::kNone;
  if (s == "type1") return CertificateMode::kType1;
  if (s == "type2") return CertificateMode::kType2;
  if (s == "both") return CertificateMode::kBoth;
  throw ArgumentError("unknown certificate mode '" + s + "'");
}

std::string to_string(CertificateMode m) {
  switch (m) {
    case CertificateMode::kNone:
      return "none";
    case CertificateMode::kType1:
      return "type1";
    case CertificateMode::kType2:
      return "type2";
    case CertificateMode::kBoth:
      return "both";
  }
  return "none";
}

IppaTrace run_ippa(const IppaConfig& cfg) {
  if (!(cfg.alpha > 0.0)) throw ArgumentError("ippa: alpha must be > 0");
  if (cfg.max_iters <= 0) throw ArgumentError("ippa: max_iters must be positive");
  if (cfg.x0.dim() == 0) throw ArgumentError("ippa: empty x0");
  cfg.schedule.validate();
  cfg.tol.validate();
  const FunctionSpec f = make_function(cfg.function);
  f.check_dim(cfg.x0);
  const double rho = f.rho();
  if (!(1.0 / cfg.alpha > rho)) throw PreconditionError("ippa: requires 1/alpha > rho");
  const GridDomain grid = cfg.grid.value_or(standard_grid(cfg.x0.dim()));
  const bool want1 = cfg.certificates == CertificateMode::kType1 || cfg.certificates == CertificateMode::kBoth;
  const bool want2 = cfg.certificates == CertificateMode::kType2 || cfg.certificates == CertificateMode::kBoth;

  IppaTrace trace;
  Vector x = cfg.x0;
  for (int k = 0; k < cfg.max_iters; ++k) {
    IppaStep step;
    step.k = k;
    step.x = x;
    step.eps = cfg.schedule.at(k);
    step.objective = f(x);
    const ProxQuery q{x, cfg.alpha, step.eps};
    ProxSolution sol;
    try {
      sol = solve_eps_prox(f, rho, q);
    } catch (const BudgetError& e) {
      trace.error = "iteration " + std::to_string(k) + ": " + e.what();
      break;
    }
    step.x_next = sol.x;
    step.gap_bound = sol.gap_bound;
    step.residual = distance(x, sol.x) / cfg.alpha;
    step.verdict = Verdict::make_holds(0.0);
    try {
      if (want2) {
        step.type2 = certify_type2(f, rho, q, sol.x, grid, cfg.tol);
        step.verdict = step.type2->verdict;
      }
      if (want1) {
        step.type1 = certify_type1(f, rho, q, sol.x, grid, cfg.tol);
        step.verdict = want2 ? combine(step.verdict, step.type1->verdict) : step.type1->verdict;
      }
    } catch (const std::exception& e) {
      step.verdict = Verdict::make_fails(-1.0, sol.x, std::string("certificate error: ") + e.what());
    }
    trace.steps.push_back(step);
    x = sol.x;
    if (cfg.tol_residual && cfg.tol_eps && step.residual <= *cfg.tol_residual && step.eps <= *cfg.tol_eps) {
      trace.stopped_early = true;
      break;
    }
  }

  trace.final_x = x;
  trace.final_objective = f(x);
  double g2 = 0.0;
  for (const Interval& iv : f.derivative_box(x)) g2 += iv.nearest_to_zero() * iv.nearest_to_zero();
  trace.criticality_eps = std::sqrt(g2) * grid.max_distance_from(x);
  trace.final_criticality = is_eps_critical(f, x, trace.criticality_eps, 0.5 * rho, grid, cfg.tol);
  return trace;
}

}  // namespace wcprox
