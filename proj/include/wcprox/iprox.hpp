#pragma once

// eps-proximal points: x is one when h(x) = f(x) + ||x-y||^2/(2 alpha)
// is within eps of inf h. Provides the grid set oracle, a certified inner
// solver and the two certificate families.

#include <stdexcept>
#include <vector>

#include "wcprox/catalog.hpp"
#include "wcprox/core.hpp"
#include "wcprox/sumrule.hpp"

namespace wcprox {

struct ProxQuery {
  Vector y;
  double alpha = 1.0;
  double eps = 0.0;

  void validate() const;
};

double prox_objective(const FunctionSpec& f, const ProxQuery& q, const Vector& x);

struct EpsProxSet {
  std::vector<Vector> points;
  /// Certified lower bound of inf h (or the grid minimum when no solver applies).
  double reference = 0.0;
  /// Members satisfy h(x) <= threshold = reference + eps + allowance.
  double threshold = 0.0;
  /// Grid minimum minus reference.
  double grid_slop = 0.0;
};

/// Grid sublevel set of the prox objective. When 1/alpha > f.rho() the
/// reference is h(x_hat) - gap from the inner solver, so every member is a
/// genuine eps-proximal point; otherwise it falls back to the grid minimum
/// less a Lipschitz slop. Throws PreconditionError when 1/alpha <= c2 of the
/// minorant (h may be unbounded below).
EpsProxSet eps_prox_set(const FunctionSpec& f, const ProxQuery& q, const GridDomain& domain,
                        const Tolerance& tol = {});

struct ProxSolution {
  Vector x;
  /// h(x) - inf h <= gap_bound.
  double gap_bound = 0.0;
  bool exact = false;
  int iterations = 0;
};

/// Raised when the inner solver cannot certify gap_bound <= eps.
class BudgetError : public std::runtime_error {
 public:
  BudgetError(const std::string& what, ProxSolution best)
      : std::runtime_error(what), best_(std::move(best)) {}
  const ProxSolution& best() const { return best_; }

 private:
  ProxSolution best_;
};

/// Closed-form prox when available (gap 0); otherwise coordinate-wise
/// bisection on the sign of the subdifferential of the mu-strongly convex
/// objective, mu = 1/alpha - rho, certified by gap = dist(0, dh(x))^2 / (2 mu).
/// Requires rho >= f.rho(); PreconditionError when 1/alpha <= rho.
ProxSolution solve_eps_prox(const FunctionSpec& f, double rho, const ProxQuery& q);

struct Type2Certificate {
  Vector x_eps;
  /// (y - x_eps) / alpha.
  Vector v;
  /// rho/2 + 1/(2 alpha).
  double C_prime = 0.0;
  double eps = 0.0;
  Verdict verdict;
};

/// v in d^eps_(2,C') f(x_eps). HOLDS for every eps-proximal point; the
/// converse is only guaranteed when rho = 0.
Type2Certificate certify_type2(const FunctionSpec& f, double rho, const ProxQuery& q,
                               const Vector& x_eps, const GridDomain& domain,
                               const Tolerance& tol = {});

struct Type1Certificate {
  Vector x_eps;
  Vector e;
  /// (y - x_eps - e) / alpha.
  Vector vector;
  double eps0 = 0.0;
  double eps1 = 0.0;
  /// ||e||^2/(2 alpha) <= eps0 + abs_tol.
  Verdict error_bound;
  /// vector in d^eps1_(2,rho/2) f(x_eps).
  Verdict membership;
  /// eps0 + eps1 <= eps + abs_tol.
  Verdict budget;
  Verdict verdict;
  SumDecomposition decomposition;
};

/// Decomposes 0 in d^eps (||.-y||^2/(2 alpha) + f)(x_eps) and sets
/// e = alpha p0 - (x_eps - y). Throws ArgumentError when x_eps is not an
/// eps-proximal point on the grid.
Type1Certificate certify_type1(const FunctionSpec& f, double rho, const ProxQuery& q,
                               const Vector& x_eps, const GridDomain& domain,
                               const Tolerance& tol = {});

/// certify_type1 with both budgets relaxed to eps.
Type1Certificate certify_type1_single_eps(const FunctionSpec& f, double rho, const ProxQuery& q,
                                          const Vector& x_eps, const GridDomain& domain,
                                          const Tolerance& tol = {});

/// The Type-2 membership implied by a Type-1 certificate.
Verdict type1_implies_type2(const Type1Certificate& cert, const FunctionSpec& f, double rho,
                            const ProxQuery& q, const GridDomain& domain, const Tolerance& tol = {});

}  // namespace wcprox
