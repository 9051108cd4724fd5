#include "wcprox/iprox.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wcprox/subdiff.hpp"

namespace wcprox {
namespace {

constexpr int kBisectionSteps = 200;

// dist(0, [lo, hi]).
double dist_to_zero(const Interval& iv) { return std::abs(iv.nearest_to_zero()); }

}  // namespace

void ProxQuery::validate() const {
  if (y.dim() == 0) throw ArgumentError("ProxQuery: empty anchor");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ArgumentError("ProxQuery: alpha must be > 0");
  if (!(eps >= 0.0) || !std::isfinite(eps)) throw ArgumentError("ProxQuery: eps must be >= 0");
}

double prox_objective(const FunctionSpec& f, const ProxQuery& q, const Vector& x) {
  return f(x) + squared_norm(x - q.y) / (2.0 * q.alpha);
}

ProxSolution solve_eps_prox(const FunctionSpec& f, double rho, const ProxQuery& q) {
  q.validate();
  f.check_dim(q.y);
  if (!(rho >= f.rho())) throw ArgumentError("solve_eps_prox: rho must be >= the modulus of f");
  if (!(1.0 / q.alpha > rho)) throw PreconditionError("solve_eps_prox: requires 1/alpha > rho");
  if (f.has_exact_prox()) return {f.exact_prox(q.alpha, q.y), 0.0, true, 0};

  const std::size_t n = q.y.dim();
  const double mu = 1.0 / q.alpha - rho;
  // Subdifferential box of h at x, coordinate by coordinate.
  auto h_box = [&](const Vector& x) {
    auto box = f.derivative_box(x);
    for (std::size_t i = 0; i < n; ++i) {
      const double shift = (x[i] - q.y[i]) / q.alpha;
      box[i].lo += shift;
      box[i].hi += shift;
    }
    return box;
  };

  // Strong convexity confines the minimiser to |x_i - y_i| <= |g_i(y)| / mu.
  const auto box_y = h_box(q.y);
  Vector lo(n), hi(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = dist_to_zero(box_y[i]) / mu;
    lo[i] = q.y[i] - r * (1.0 + 1e-12) - 1e-12;
    hi[i] = q.y[i] + r * (1.0 + 1e-12) + 1e-12;
  }
  int it = 0;
  auto converged = [&] {
    for (std::size_t i = 0; i < n; ++i) {
      if (hi[i] - lo[i] > 4e-16 * std::max(1.0, std::abs(lo[i]))) return false;
    }
    return true;
  };
  for (; it < kBisectionSteps && !converged(); ++it) {
    const Vector mid = 0.5 * (lo + hi);
    const auto box = h_box(mid);
    for (std::size_t i = 0; i < n; ++i) {
      if (box[i].lo > 0.0) {
        hi[i] = mid[i];
      } else if (box[i].hi < 0.0) {
        lo[i] = mid[i];
      } else {
        lo[i] = hi[i] = mid[i];
      }
    }
  }

  // Per coordinate keep the candidate (bracket midpoint or a kink inside it)
  // with the smallest subgradient distance; separability makes this global.
  Vector x = 0.5 * (lo + hi);
  std::vector<double> g(n);
  {
    const auto box = h_box(x);
    for (std::size_t i = 0; i < n; ++i) g[i] = dist_to_zero(box[i]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double pad = 1e-9 * std::max(1.0, std::abs(x[i]));
    for (double k : f.kinks(i)) {
      if (k < lo[i] - pad || k > hi[i] + pad) continue;
      Vector cand = x;
      cand[i] = k;
      const double gk = dist_to_zero(h_box(cand)[i]);
      if (gk < g[i]) {
        g[i] = gk;
        x[i] = k;
      }
    }
  }
  double gg = 0.0;
  for (double gi : g) gg += gi * gi;
  ProxSolution sol{x, gg / (2.0 * mu), false, it};
  if (sol.gap_bound > q.eps) throw BudgetError("solve_eps_prox: gap bound above eps", sol);
  return sol;
}

EpsProxSet eps_prox_set(const FunctionSpec& f, const ProxQuery& q, const GridDomain& domain,
                        const Tolerance& tol) {
  tol.validate();
  q.validate();
  if (q.y.dim() != domain.dim()) throw ArgumentError("eps_prox_set: dimension mismatch");
  const QuadraticMinorant m = f.minorant(domain.dim());
  if (!(1.0 / q.alpha > m.c2)) throw PreconditionError("eps_prox_set: 1/alpha <= c2; objective may be unbounded below");

  std::vector<Vector> pts;
  std::vector<double> vals;
  double grid_min = std::numeric_limits<double>::infinity();
  domain.for_each([&](std::size_t, const Vector& x) {
    const double h = prox_objective(f, q, x);
    pts.push_back(x);
    vals.push_back(h);
    grid_min = std::min(grid_min, h);
  });

  EpsProxSet out;
  if (1.0 / q.alpha > f.rho()) {
    ProxQuery loose = q;
    loose.eps = std::numeric_limits<double>::max();
    const ProxSolution sol = solve_eps_prox(f, f.rho(), loose);
    out.reference = prox_objective(f, q, sol.x) - sol.gap_bound;
    out.threshold = out.reference + q.eps + tol.abs_tol;
  } else {
    double lip = f.lipschitz_bound(domain);
    for (std::size_t i = 0; i < domain.dim(); ++i) {
      const double far = std::max(std::abs(domain.lo()[i] - q.y[i]), std::abs(domain.axis_max(i) - q.y[i]));
      lip += far / q.alpha;
    }
    out.reference = grid_min - tol.grid_slop.value_or(lip * domain.covering_radius());
    out.threshold = grid_min + q.eps + tol.abs_tol;
  }
  out.grid_slop = grid_min - out.reference;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    if (vals[k] <= out.threshold) out.points.push_back(std::move(pts[k]));
  }
  return out;
}

Type2Certificate certify_type2(const FunctionSpec& f, double rho, const ProxQuery& q,
                               const Vector& x_eps, const GridDomain& domain, const Tolerance& tol) {
  q.validate();
  if (!(rho >= f.rho())) throw ArgumentError("certify_type2: rho must be >= the modulus of f");
  Type2Certificate c;
  c.x_eps = x_eps;
  c.v = (q.y - x_eps) / q.alpha;
  c.C_prime = 0.5 * rho + 0.5 / q.alpha;
  c.eps = q.eps;
  c.verdict = membership_grid(f, {x_eps, c.v, q.eps, c.C_prime, 2.0}, domain, tol);
  return c;
}

Type1Certificate certify_type1(const FunctionSpec& f, double rho, const ProxQuery& q,
                               const Vector& x_eps, const GridDomain& domain, const Tolerance& tol) {
  q.validate();
  const FunctionSpec f0 = quadratic(1.0 / q.alpha, q.y);
  const Vector zero(x_eps.dim(), 0.0);
  Type1Certificate c;
  c.x_eps = x_eps;
  c.decomposition = decompose_subgradient(f0, 0.0, f, rho, x_eps, zero, q.eps, domain, tol);
  const SumDecomposition& d = c.decomposition;
  c.e = q.alpha * d.p0 - (x_eps - q.y);
  c.vector = (q.y - x_eps - c.e) / q.alpha;
  c.eps0 = d.eps0;
  c.eps1 = d.eps1;

  const double err = squared_norm(c.e) / (2.0 * q.alpha);
  const double err_margin = c.eps0 + tol.abs_tol - err;
  c.error_bound = err_margin >= 0.0
                      ? Verdict::make_holds(err_margin)
                      : Verdict::make_fails(err_margin, c.e, "||e||^2/(2 alpha) exceeds eps0");
  c.membership = membership_grid(f, {x_eps, c.vector, c.eps1, 0.5 * rho, 2.0}, domain, tol);
  const double budget_margin = q.eps + tol.abs_tol - (c.eps0 + c.eps1);
  c.budget = budget_margin >= 0.0 ? Verdict::make_holds(budget_margin)
                                  : Verdict::make_inconclusive(budget_margin, "eps0 + eps1 exceeds eps");
  if (c.error_bound.fails() || c.membership.fails()) {
    throw InconsistencyError("certify_type1: certificate invariant violated");
  }
  c.verdict = combine(combine(combine(d.verdict, c.error_bound), c.membership), c.budget);
  return c;
}

Type1Certificate certify_type1_single_eps(const FunctionSpec& f, double rho, const ProxQuery& q,
                                          const Vector& x_eps, const GridDomain& domain,
                                          const Tolerance& tol) {
  Type1Certificate c = certify_type1(f, rho, q, x_eps, domain, tol);
  c.eps0 = q.eps;
  c.eps1 = q.eps;
  const double err_margin = q.eps + tol.abs_tol - squared_norm(c.e) / (2.0 * q.alpha);
  c.error_bound = err_margin >= 0.0
                      ? Verdict::make_holds(err_margin)
                      : Verdict::make_fails(err_margin, c.e, "||e||^2/(2 alpha) exceeds eps");
  c.membership = membership_grid(f, {x_eps, c.vector, q.eps, 0.5 * rho, 2.0}, domain, tol);
  c.budget = Verdict::make_holds(0.0);
  c.verdict = combine(combine(c.decomposition.conjugate.verdict, c.error_bound), c.membership);
  return c;
}

Verdict type1_implies_type2(const Type1Certificate& cert, const FunctionSpec& f, double rho,
                            const ProxQuery& q, const GridDomain& domain, const Tolerance& tol) {
  return certify_type2(f, rho, q, cert.x_eps, domain, tol).verdict;
}

}  // namespace wcprox
