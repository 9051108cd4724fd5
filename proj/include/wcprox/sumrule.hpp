#pragma once

// Sum rules for proximal eps-subdifferentials of f0 + f1 with C = rho/2:
// forward inclusion, exact decomposition with budget bookkeeping, and the
// shift by the gradient of a smooth convex part.

#include "wcprox/catalog.hpp"
#include "wcprox/conjugate.hpp"
#include "wcprox/core.hpp"

namespace wcprox {

struct SumDecomposition {
  Vector u;
  Vector p0;
  Vector p1;
  double eps0 = 0.0;
  double eps1 = 0.0;
  /// p0 - rho0 x in d^eps0_(2,rho0/2) f0(x), re-verified on the grid.
  Verdict member0;
  /// p1 - rho1 x in d^eps1_(2,rho1/2) f1(x), re-verified on the grid.
  Verdict member1;
  ConjugateDecomposition conjugate;
  /// Combined: premise, conjugate agreement, both memberships and eps0 + eps1 <= eps.
  Verdict verdict;
};

/// w in d^eps0 f0(x) and v in d^eps1 f1(x) imply w + v in d^(eps0+eps1) (f0+f1)(x).
/// Throws ArgumentError when a premise fails; INCONCLUSIVE when one cannot be decided.
Verdict forward_sum_inclusion(const FunctionSpec& f0, double rho0, double eps0, const Vector& w,
                              const FunctionSpec& f1, double rho1, double eps1, const Vector& v,
                              const Vector& x, const GridDomain& domain, const Tolerance& tol = {});

/// Splits u in d^eps_(2,(rho0+rho1)/2) (f0+f1)(x) through the conjugate
/// decomposition of s = u + (rho0+rho1) x. Budgets are
///   eps_i = f_i(x) + (f_i)*_rho_i(p_i) - <p_i, x> + (rho_i/2)||x||^2,
/// clamped at 0 against grid rounding.
/// Throws ArgumentError when the premise fails and InconsistencyError when a
/// returned membership fails on the grid.
SumDecomposition decompose_subgradient(const FunctionSpec& f0, double rho0, const FunctionSpec& f1,
                                       double rho1, const Vector& x, const Vector& u, double eps,
                                       const GridDomain& domain, const Tolerance& tol = {});

/// u in d^eps_(2,rho/2) (f0+f1)(x), f0 convex with L0-Lipschitz gradient
/// implies u - grad f0(x) in d^eps_(2,(rho+L0)/2) f1(x). Requires rho >= f1.rho().
Verdict smooth_shift_inclusion(const FunctionSpec& f0, const FunctionSpec& f1, double rho,
                               const Vector& x, const Vector& u, double eps,
                               const GridDomain& domain, const Tolerance& tol = {});

}  // namespace wcprox
