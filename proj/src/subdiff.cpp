#include "wcprox/subdiff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wcprox/conjugate.hpp"

namespace wcprox {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_query_dims(const SubgradientQuery& q, const GridDomain& domain) {
  if (q.x0.dim() != domain.dim() || q.v.dim() != domain.dim()) {
    throw ArgumentError("membership: x0, v and grid dimensions differ");
  }
}

double finite_value_at(const FunctionSpec& f, const Vector& x0) {
  const double fx0 = f(x0);
  if (!std::isfinite(fx0)) throw ArgumentError("membership: f(x0) is not finite");
  return fx0;
}

// Lower bound of the slack for ||x - x0|| = r >= r_in, gamma = 2, from the
// minorant. Returns true when it never drops below -abs_tol on [r_in, inf).
bool minorant_discharges_quadratic(const QuadraticMinorant& m, const SubgradientQuery& q,
                                   double fx0, double r_in, double abs_tol) {
  const double nx0 = norm(q.x0);
  const double a = q.C - 0.5 * m.c2;
  const double b = norm(q.v + m.c2 * q.x0) + m.c1;
  const double k = m.c0 - 0.5 * m.c2 * nx0 * nx0 - fx0 + q.eps - std::abs(m.c1) * nx0 + abs_tol;
  // phi(r) = a r^2 - b r + k must stay >= 0 for r >= r_in.
  auto phi = [&](double r) { return a * r * r - b * r + k; };
  if (a > 1e-14) {
    return phi(std::max(r_in, b / (2.0 * a))) >= 0.0;
  }
  if (std::abs(a) <= 1e-14) return b <= 0.0 && phi(r_in) >= 0.0;
  return false;
}

// General gamma: crude bound with ||x|| <= ||x0|| + r, usable when the slack
// bound is convex in r on [r_in, inf).
bool minorant_discharges_power(const QuadraticMinorant& m, const SubgradientQuery& q, double fx0,
                               double r_in, double abs_tol) {
  if (!(q.C > 0.0)) return false;
  const double nx0 = norm(q.x0);
  const double c1p = std::max(m.c1, 0.0);
  const double c2p = std::max(m.c2, 0.0);
  const double g = q.gamma;
  if (c2p > 0.0 && !(g > 2.0)) return false;
  auto phi = [&](double r) {
    const double z = nx0 + r;
    return q.C * std::pow(r, g) - 0.5 * c2p * z * z - c1p * z - norm(q.v) * r + m.c0 - fx0 + q.eps;
  };
  auto dphi = [&](double r) {
    return q.C * g * std::pow(r, g - 1.0) - c2p * (nx0 + r) - c1p - norm(q.v);
  };
  if (c2p > 0.0) {
    const double r_convex = std::pow(c2p / (q.C * g * (g - 1.0)), 1.0 / (g - 2.0));
    if (r_in < r_convex) return false;
  }
  double r_star = r_in;
  if (dphi(r_in) < 0.0) {
    double hi = std::max(1.0, 2.0 * r_in);
    for (int i = 0; i < 200 && dphi(hi) < 0.0; ++i) hi *= 2.0;
    double lo = r_in;
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      (dphi(mid) < 0.0 ? lo : hi) = mid;
    }
    r_star = hi;
  }
  return phi(r_star) >= -abs_tol;
}

}  // namespace

void SubgradientQuery::validate() const {
  if (x0.dim() == 0 || x0.dim() != v.dim()) throw ArgumentError("SubgradientQuery: x0/v dimension mismatch");
  if (!(eps >= 0.0) || !std::isfinite(eps)) throw ArgumentError("SubgradientQuery: eps must be >= 0");
  if (!(C >= 0.0) || !std::isfinite(C)) throw ArgumentError("SubgradientQuery: C must be >= 0");
  if (!(gamma > 1.0) || !std::isfinite(gamma)) throw ArgumentError("SubgradientQuery: gamma must be > 1");
}

double membership_slack(const FunctionSpec& f, const SubgradientQuery& q, const Vector& x) {
  const Vector d = x - q.x0;
  return f(x) - f(q.x0) - dot(q.v, d) + q.C * std::pow(norm(d), q.gamma) + q.eps;
}

namespace {

double slack_lipschitz(const FunctionSpec& f, const SubgradientQuery& q, const GridDomain& domain) {
  const double D = domain.max_distance_from(q.x0);
  return f.lipschitz_bound(domain) + norm(q.v) + q.gamma * q.C * std::pow(D, q.gamma - 1.0);
}

}  // namespace

double membership_grid_slop(const FunctionSpec& f, const SubgradientQuery& q,
                            const GridDomain& domain) {
  return slack_lipschitz(f, q, domain) * domain.covering_radius();
}

Verdict membership_grid(const FunctionSpec& f, const SubgradientQuery& q, const GridDomain& domain,
                        const Tolerance& tol) {
  tol.validate();
  q.validate();
  check_query_dims(q, domain);
  const double fx0 = finite_value_at(f, q.x0);

  SlackScan scan(tol.abs_tol);
  double boundary_min = kInf;
  double interior_min = kInf;
  domain.for_each([&](std::size_t idx, const Vector& x) {
    const Vector d = x - q.x0;
    const double pw = q.gamma == 2.0 ? squared_norm(d) : std::pow(norm(d), q.gamma);
    const double s = f(x) - fx0 - dot(q.v, d) + q.C * pw + q.eps;
    scan.observe(x, s);
    double& side = domain.on_boundary(idx) ? boundary_min : interior_min;
    side = std::min(side, s);
  });
  Verdict grid = scan.verdict("slack negative at a grid point");
  if (!grid.holds()) return grid;

  // Tail rule 1: with gamma = 2 and C >= rho/2 the slack is convex; an
  // interior minimum below the boundary bounds everything outside the hull.
  if (q.gamma == 2.0 && q.C >= 0.5 * f.rho()) {
    const double face_slop =
        tol.grid_slop.value_or(slack_lipschitz(f, q, domain) * domain.face_covering_radius());
    const double tail_floor = boundary_min - face_slop;
    if (interior_min <= tail_floor && tail_floor >= -tol.abs_tol) return grid;
  }
  // Tail rule 2: minorant bound beyond the inner radius around x0.
  const QuadraticMinorant m = f.minorant(domain.dim());
  const double r_in = domain.inner_radius_around(q.x0);
  const bool discharged = q.gamma == 2.0
                              ? minorant_discharges_quadratic(m, q, fx0, r_in, tol.abs_tol)
                              : minorant_discharges_power(m, q, fx0, r_in, tol.abs_tol);
  if (discharged) return grid;
  Verdict out = Verdict::make_inconclusive(grid.margin, "grid holds but the tail beyond the grid is not discharged");
  out.witness = grid.witness;
  return out;
}

Verdict membership_via_conjugate(const FunctionSpec& f, const SubgradientQuery& q,
                                 const GridDomain& domain, const Tolerance& tol) {
  tol.validate();
  q.validate();
  check_query_dims(q, domain);
  if (q.gamma != 2.0) throw ArgumentError("membership_via_conjugate: requires gamma = 2");
  const double fx0 = finite_value_at(f, q.x0);
  const double rho = 2.0 * q.C;
  const Vector u = q.v + rho * q.x0;
  const ConjugateValue cv = rho_conjugate(f, rho, u, domain);

  if (cv.value == kInf) {
    // Unbounded below: report the worst grid point as witness.
    SlackScan scan(tol.abs_tol);
    domain.for_each([&](std::size_t, const Vector& x) { scan.observe(x, membership_slack(f, q, x)); });
    return Verdict::make_fails(-kInf, *scan.argmin(), "v+rho*x0 not in dom (f)*_rho");
  }
  const double inf_slack = q.eps - (fx0 + cv.value + 0.5 * rho * squared_norm(q.x0) - dot(u, q.x0));
  auto witness = [&]() -> Vector {
    if (cv.argsup) return *cv.argsup;
    return q.x0;
  };

  if (cv.exactness == Exactness::kAnalytic) {
    if (inf_slack >= -tol.abs_tol) return Verdict::make_holds(inf_slack);
    const double band = tol.grid_slop.value_or(membership_grid_slop(f, q, domain));
    if (inf_slack < -(tol.abs_tol + band)) {
      return Verdict::make_fails(inf_slack, witness(), "conjugate inequality violated");
    }
    Verdict out = Verdict::make_inconclusive(inf_slack, "violation within the grid discretisation band");
    out.witness = witness();
    return out;
  }
  if (inf_slack < -tol.abs_tol) return Verdict::make_fails(inf_slack, witness(), "conjugate inequality violated on the grid");
  if (!cv.tail_ok) return Verdict::make_inconclusive(inf_slack, "grid conjugate tail unresolved");
  return Verdict::make_holds(inf_slack);
}

Verdict is_eps_critical(const FunctionSpec& f, const Vector& x, double eps, double C,
                        const GridDomain& domain, const Tolerance& tol) {
  return membership_grid(f, SubgradientQuery{x, Vector(x.dim(), 0.0), eps, C, 2.0}, domain, tol);
}

GlobalisationResult check_globalisation(const FunctionSpec& f, const SubgradientQuery& q,
                                        double local_radius, const GridDomain& domain,
                                        const Tolerance& tol) {
  tol.validate();
  q.validate();
  check_query_dims(q, domain);
  if (!(local_radius > 0.0)) throw ArgumentError("check_globalisation: local_radius must be > 0");
  const double fx0 = finite_value_at(f, q.x0);

  SlackScan scan(tol.abs_tol);
  domain.for_each([&](std::size_t, const Vector& x) {
    const Vector d = x - q.x0;
    if (norm(d) > local_radius * (1.0 + 1e-12)) return;
    scan.observe(x, f(x) - fx0 - dot(q.v, d) + q.C * std::pow(norm(d), q.gamma) + q.eps);
  });

  GlobalisationResult r;
  r.local = scan.empty() ? Verdict::make_inconclusive(0.0, "no grid point inside the local ball")
                         : scan.verdict("slack negative inside the local ball");
  r.global = membership_grid(f, q, domain, tol);
  if (r.local.holds() && r.global.fails()) {
    r.implication = Verdict::make_fails(r.global.margin, *r.global.witness, "local membership did not globalise");
  } else if (r.local.holds() && r.global.inconclusive()) {
    r.implication = Verdict::make_inconclusive(r.global.margin, r.global.reason);
  } else {
    r.implication = Verdict::make_holds(r.local.holds() ? r.global.margin : 0.0);
  }
  return r;
}

std::vector<Vector> sample_subgradients(const FunctionSpec& f, const Vector& x0, double eps,
                                        std::size_t count, const GridDomain& domain,
                                        const Tolerance& tol) {
  if (count == 0) throw ArgumentError("sample_subgradients: count must be positive");
  if (!(eps >= 0.0)) throw ArgumentError("sample_subgradients: eps must be >= 0");
  if (x0.dim() != domain.dim()) throw ArgumentError("sample_subgradients: dimension mismatch");
  const std::size_t n = x0.dim();
  const double fx0 = finite_value_at(f, x0);
  const double rho = f.rho();

  std::optional<GridConjugate> grid;
  if (!f.has_analytic_conjugate()) grid.emplace(f, rho, domain);
  // Upper bound of the Fenchel-Young gap; v is an eps-subgradient iff gap(v) <= eps.
  // Grid sups are raised by their slop so enlargements never overshoot eps.
  auto gap = [&](const Vector& v) {
    const Vector u = v + rho * x0;
    double c = 0.0;
    if (grid) {
      const ConjugateValue g = (*grid)(u);
      c = g.tail_ok ? g.value + g.slop : std::numeric_limits<double>::infinity();
    } else {
      c = f.analytic_conjugate(rho, u);
    }
    return fx0 + c + 0.5 * rho * squared_norm(x0) - dot(u, x0);
  };

  const auto box = f.derivative_box(x0);
  std::vector<Vector> candidates;
  Vector center(n);
  for (std::size_t i = 0; i < n; ++i) center[i] = 0.5 * (box[i].lo + box[i].hi);
  candidates.push_back(center);
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    Vector c(n);
    for (std::size_t i = 0; i < n; ++i) c[i] = (mask >> (n - 1 - i)) & 1 ? box[i].hi : box[i].lo;
    candidates.push_back(c);
  }
  if (eps > 0.0) {
    for (std::size_t i = 0; i < n; ++i) {
      for (double dir : {-1.0, 1.0}) {
        Vector start = center;
        start[i] = dir < 0 ? box[i].lo : box[i].hi;
        if (!(gap(start) <= eps)) continue;
        auto at = [&](double t) {
          Vector v = start;
          v[i] += dir * t;
          return v;
        };
        double lo = 0.0;
        double hi = 1.0;
        while (hi < 1e6 && gap(at(hi)) <= eps) {
          lo = hi;
          hi *= 2.0;
        }
        for (int it = 0; it < 80; ++it) {
          const double mid = 0.5 * (lo + hi);
          (gap(at(mid)) <= eps ? lo : hi) = mid;
        }
        if (lo > 0.0) candidates.push_back(at(lo));
      }
    }
  }

  std::vector<Vector> out;
  for (const Vector& v : candidates) {
    if (out.size() >= count) break;
    const bool dup = std::any_of(out.begin(), out.end(),
                                 [&](const Vector& w) { return max_abs_diff(v, w) <= 1e-12; });
    if (dup) continue;
    const SubgradientQuery q{x0, v, eps, 0.5 * rho, 2.0};
    if (membership_via_conjugate(f, q, domain, tol).holds()) out.push_back(v);
  }
  std::sort(out.begin(), out.end(),
            [](const Vector& a, const Vector& b) { return a.values() < b.values(); });
  return out;
}

}  // namespace wcprox
