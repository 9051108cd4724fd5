#include "wcprox/sumrule.hpp"

#include <algorithm>
#include <cmath>

#include "wcprox/subdiff.hpp"

namespace wcprox {
namespace {

void require_moduli(const FunctionSpec& f0, double rho0, const FunctionSpec& f1, double rho1,
                    const char* who) {
  if (!(rho0 >= f0.rho() && rho1 >= f1.rho())) {
    throw ArgumentError(std::string(who) + ": rho_i must be >= the modulus of f_i");
  }
}

double part_budget(const FunctionSpec& f, double rho, const Vector& p, const Vector& x,
                   const GridDomain& domain) {
  const double c = rho_conjugate(f, rho, p, domain).value;
  return f(x) + c - dot(p, x) + 0.5 * rho * squared_norm(x);
}

}  // namespace

Verdict forward_sum_inclusion(const FunctionSpec& f0, double rho0, double eps0, const Vector& w,
                              const FunctionSpec& f1, double rho1, double eps1, const Vector& v,
                              const Vector& x, const GridDomain& domain, const Tolerance& tol) {
  require_moduli(f0, rho0, f1, rho1, "forward_sum_inclusion");
  const Verdict prem0 = membership_grid(f0, {x, w, eps0, 0.5 * rho0, 2.0}, domain, tol);
  const Verdict prem1 = membership_grid(f1, {x, v, eps1, 0.5 * rho1, 2.0}, domain, tol);
  if (prem0.fails()) throw ArgumentError("forward_sum_inclusion: w is not in the eps0-subdifferential of f0");
  if (prem1.fails()) throw ArgumentError("forward_sum_inclusion: v is not in the eps1-subdifferential of f1");
  if (!prem0.holds() || !prem1.holds()) {
    return Verdict::make_inconclusive(std::min(prem0.margin, prem1.margin), "premise undecided");
  }
  // The conclusion's slack is the sum of the premises' slacks; pad by their deficits.
  Tolerance padded = tol;
  padded.abs_tol += std::max(0.0, -prem0.margin) + std::max(0.0, -prem1.margin);
  return membership_grid(FunctionSpec::sum(f0, f1), {x, w + v, eps0 + eps1, 0.5 * (rho0 + rho1), 2.0},
                         domain, padded);
}

SumDecomposition decompose_subgradient(const FunctionSpec& f0, double rho0, const FunctionSpec& f1,
                                       double rho1, const Vector& x, const Vector& u, double eps,
                                       const GridDomain& domain, const Tolerance& tol) {
  require_moduli(f0, rho0, f1, rho1, "decompose_subgradient");
  const double rho = rho0 + rho1;
  const Verdict premise = membership_grid(FunctionSpec::sum(f0, f1), {x, u, eps, 0.5 * rho, 2.0}, domain, tol);
  if (premise.fails()) throw ArgumentError("decompose_subgradient: u is not an eps-subgradient of the sum");

  SumDecomposition d;
  d.u = u;
  d.conjugate = conjugate_sum_decompose(f0, rho0, f1, rho1, u + rho * x, domain, tol);
  d.p0 = d.conjugate.p0;
  d.p1 = d.conjugate.p1;
  d.eps0 = std::max(0.0, part_budget(f0, rho0, d.p0, x, domain));
  d.eps1 = std::max(0.0, part_budget(f1, rho1, d.p1, x, domain));

  d.member0 = membership_grid(f0, {x, d.p0 - rho0 * x, d.eps0, 0.5 * rho0, 2.0}, domain, tol);
  d.member1 = membership_grid(f1, {x, d.p1 - rho1 * x, d.eps1, 0.5 * rho1, 2.0}, domain, tol);
  if (d.member0.fails() || d.member1.fails()) {
    throw InconsistencyError("decompose_subgradient: a returned membership fails on the grid");
  }

  Verdict v = combine(premise, d.conjugate.verdict);
  v = combine(v, d.member0);
  v = combine(v, d.member1);
  const double budget_margin = eps + tol.abs_tol - (d.eps0 + d.eps1);
  if (budget_margin < 0.0) {
    v = combine(v, Verdict::make_inconclusive(budget_margin, "eps0 + eps1 exceeds eps"));
  }
  d.verdict = v;
  return d;
}

Verdict smooth_shift_inclusion(const FunctionSpec& f0, const FunctionSpec& f1, double rho,
                               const Vector& x, const Vector& u, double eps,
                               const GridDomain& domain, const Tolerance& tol) {
  const auto L0 = f0.lipschitz_grad();
  if (!L0) throw PreconditionError("smooth_shift_inclusion: f0 needs a Lipschitz gradient");
  if (f0.rho() != 0.0) throw PreconditionError("smooth_shift_inclusion: f0 must be convex");
  if (!(rho >= f1.rho())) throw ArgumentError("smooth_shift_inclusion: rho must be >= the modulus of f1");
  const Verdict premise = membership_grid(FunctionSpec::sum(f0, f1), {x, u, eps, 0.5 * rho, 2.0}, domain, tol);
  if (premise.fails()) throw ArgumentError("smooth_shift_inclusion: u is not an eps-subgradient of the sum");
  const Verdict target =
      membership_grid(f1, {x, u - f0.gradient(x), eps, 0.5 * (rho + *L0), 2.0}, domain, tol);
  if (!premise.holds() && target.holds()) {
    return Verdict::make_inconclusive(target.margin, "premise undecided: " + premise.reason);
  }
  return target;
}

}  // namespace wcprox
