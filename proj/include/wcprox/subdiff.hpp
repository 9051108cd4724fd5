#pragma once

// Membership oracles for the proximal eps-subdifferential
//   v in d^eps_(gamma,C) f(x0)  iff  f(x) - f(x0) >= <v, x-x0> - C||x-x0||^gamma - eps  for all x.
// The grid surrogates "for all x"; points beyond the lattice hull are
// discharged either by convexity of the slack or by the catalog minorant.

#include <vector>

#include "wcprox/catalog.hpp"
#include "wcprox/core.hpp"

namespace wcprox {

struct SubgradientQuery {
  Vector x0;
  Vector v;
  double eps = 0.0;
  double C = 0.0;
  double gamma = 2.0;

  void validate() const;
};

/// f(x) - f(x0) - <v, x-x0> + C||x-x0||^gamma + eps.
double membership_slack(const FunctionSpec& f, const SubgradientQuery& q, const Vector& x);

/// Lipschitz bound of the slack over the lattice hull times the covering radius.
double membership_grid_slop(const FunctionSpec& f, const SubgradientQuery& q,
                            const GridDomain& domain);

/// Grid scan plus tail discharge. FAILS on any grid violation; INCONCLUSIVE
/// when the grid holds but the tail cannot be bounded.
Verdict membership_grid(const FunctionSpec& f, const SubgradientQuery& q, const GridDomain& domain,
                        const Tolerance& tol = {});

/// Same question through the rho-conjugate with rho = 2C (gamma must be 2):
///   inf slack = eps - [f(x0) + f*_rho(v + rho x0) + (rho/2)||x0||^2 - <v + rho x0, x0>].
/// Analytic conjugates give an exact infimum; FAILS is only reported when it
/// is below -(abs_tol + slop), so that a grid scan of the same domain could see it.
Verdict membership_via_conjugate(const FunctionSpec& f, const SubgradientQuery& q,
                                 const GridDomain& domain, const Tolerance& tol = {});

/// 0 in d^eps_(2,C) f(x).
Verdict is_eps_critical(const FunctionSpec& f, const Vector& x, double eps, double C,
                        const GridDomain& domain, const Tolerance& tol = {});

struct GlobalisationResult {
  /// Grid points within local_radius of x0 only; no tail.
  Verdict local;
  Verdict global;
  /// FAILS exactly when local HOLDS and global FAILS.
  Verdict implication;
};

GlobalisationResult check_globalisation(const FunctionSpec& f, const SubgradientQuery& q,
                                        double local_radius, const GridDomain& domain,
                                        const Tolerance& tol = {});

/// Up to count elements of d^eps_(2,rho/2) f(x0), rho = f.rho(), each verified
/// HOLDS by membership_via_conjugate; sorted lexicographically. Candidates in
/// priority order: midpoint of the derivative box, its corners, then
/// eps-enlargements along the coordinate axes. Enlargements use an upper
/// bound of the Fenchel-Young gap (grid sups plus slop), so they remain
/// members when f has no closed-form conjugate.
std::vector<Vector> sample_subgradients(const FunctionSpec& f, const Vector& x0, double eps,
                                        std::size_t count, const GridDomain& domain,
                                        const Tolerance& tol = {});

}  // namespace wcprox
