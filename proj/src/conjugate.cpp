#include "wcprox/conjugate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace wcprox {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kAgreeTol = 1e-6;

// Golden-section search for a convex extended-valued phi on [a, b]; returns
// the best point seen, never worse than (t0, phi0).
template <class Phi>
std::pair<double, double> golden_min(const Phi& phi, double a, double b, double t0, double phi0) {
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double best_t = t0;
  double best_v = phi0;
  auto note = [&](double t, double v) {
    if (v < best_v) {
      best_v = v;
      best_t = t;
    }
  };
  double c = b - r * (b - a);
  double d = a + r * (b - a);
  double fc = phi(c);
  double fd = phi(d);
  note(c, fc);
  note(d, fd);
  const double stop = 1e-14 * std::max(1.0, std::max(std::abs(a), std::abs(b)));
  for (int it = 0; it < 200 && b - a > stop; ++it) {
    bool keep_left = fc < fd;
    if (fc == fd) keep_left = best_t <= 0.5 * (c + d);
    if (keep_left) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = phi(c);
      note(c, fc);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = phi(d);
      note(d, fd);
    }
  }
  return {best_t, best_v};
}

}  // namespace

std::string to_string(Exactness e) { return e == Exactness::kAnalytic ? "ANALYTIC" : "GRID"; }

// ---------------------------------------------------------------------------
// GridConjugate

GridConjugate::GridConjugate(const FunctionSpec& f, double rho, const GridDomain& domain)
    : rho_(rho), domain_(domain), n_(domain.dim()) {
  if (!(rho >= 0.0)) throw ArgumentError("rho_conjugate: rho must be >= 0");
  count_ = domain.size();
  coords_.reserve(count_ * n_);
  base_.reserve(count_);
  boundary_.reserve(count_);
  domain.for_each([&](std::size_t idx, const Vector& y) {
    coords_.insert(coords_.end(), y.begin(), y.end());
    base_.push_back(-0.5 * rho * squared_norm(y) - f(y));
    boundary_.push_back(domain.on_boundary(idx) ? 1 : 0);
    max_norm_ = std::max(max_norm_, norm(y));
  });
  lip_f_ = f.lipschitz_bound(domain);
  origin_radius_ = domain.inner_radius_around(Vector(n_, 0.0));
  minorant_ = f.minorant(n_);
  concave_ = rho >= f.rho();
}

ConjugateValue GridConjugate::operator()(const Vector& u) const {
  if (u.dim() != n_) throw ArgumentError("rho_conjugate: dimension mismatch");
  double best = -kInf;
  double interior_best = -kInf;
  double boundary_best = -kInf;
  std::size_t arg = count_;
  for (std::size_t k = 0; k < count_; ++k) {
    const double* y = &coords_[k * n_];
    double val = base_[k];
    for (std::size_t i = 0; i < n_; ++i) val += u[i] * y[i];
    if (std::isnan(val)) continue;
    if (val > best) {
      best = val;
      arg = k;
    }
    if (boundary_[k]) {
      boundary_best = std::max(boundary_best, val);
    } else {
      interior_best = std::max(interior_best, val);
    }
  }

  ConjugateValue out;
  out.exactness = Exactness::kGrid;
  out.value = best;
  if (arg < count_) {
    out.argsup = Vector(std::vector<double>(coords_.begin() + long(arg * n_),
                                            coords_.begin() + long((arg + 1) * n_)));
  }
  const double lip = lip_f_ + norm(u) + rho_ * max_norm_;
  out.slop = lip * domain_.covering_radius();

  // Concave objective: an interior maximum dominating the boundary bounds the tail.
  bool tail_ok = false;
  if (concave_) {
    tail_ok = interior_best >= boundary_best + lip * domain_.face_covering_radius();
  }
  if (!tail_ok) {
    const double k = 0.5 * (rho_ - minorant_.c2);
    const double b = norm(u) + minorant_.c1;
    auto psi = [&](double r) { return -k * r * r + b * r - minorant_.c0; };
    double tail_sup = kInf;
    if (k > 1e-14) {
      tail_sup = psi(std::max(origin_radius_, b / (2.0 * k)));
    } else if (std::abs(k) <= 1e-14 && b <= 0.0) {
      tail_sup = psi(origin_radius_);
    }
    tail_ok = tail_sup <= best + out.slop;
  }
  out.tail_ok = tail_ok;
  return out;
}

// ---------------------------------------------------------------------------

ConjugateValue rho_conjugate(const FunctionSpec& f, double rho, const Vector& u,
                             const GridDomain& domain) {
  if (!(rho >= 0.0)) throw ArgumentError("rho_conjugate: rho must be >= 0");
  if (u.dim() != domain.dim()) throw ArgumentError("rho_conjugate: dimension mismatch");
  if (f.has_analytic_conjugate()) {
    ConjugateValue out;
    out.exactness = Exactness::kAnalytic;
    Vector arg;
    out.value = f.analytic_conjugate(rho, u, &arg);
    if (!arg.empty()) out.argsup = arg;
    return out;
  }
  return GridConjugate(f, rho, domain)(u);
}

Verdict conjugate_identity_check(const FunctionSpec& f, double rho, const std::vector<Vector>& us,
                                 const GridDomain& domain, const Tolerance& tol) {
  tol.validate();
  if (!(rho >= 0.0)) throw ArgumentError("conjugate_identity_check: rho must be >= 0");
  const FunctionSpec g = convexified(f, rho);
  std::optional<GridConjugate> direct;
  if (!f.has_analytic_conjugate()) direct.emplace(f, rho, domain);
  const GridConjugate shifted(g, 0.0, domain);

  Verdict out = Verdict::make_holds(kInf);
  for (const Vector& u : us) {
    const ConjugateValue a = direct ? (*direct)(u) : rho_conjugate(f, rho, u, domain);
    const ConjugateValue b = shifted(u);
    if (!a.tail_ok || !b.tail_ok) {
      out = combine(out, Verdict::make_inconclusive(out.margin, "grid sup tail unresolved at u=" + u.to_string()));
      continue;
    }
    double diff = std::abs(a.value - b.value);
    if (std::isinf(a.value) && std::isinf(b.value) && a.value == b.value) diff = 0.0;
    const double margin = kAgreeTol + tol.grid_slop.value_or(a.slop + b.slop) - diff;
    if (margin < 0.0) {
      out = combine(out, Verdict::make_fails(margin, u, "rho-conjugate paths disagree"));
    } else {
      out = combine(out, Verdict::make_holds(margin));
    }
  }
  if (us.empty()) out.margin = 0.0;
  return out;
}

ConjugateDecomposition conjugate_sum_decompose(const FunctionSpec& f0, double rho0,
                                               const FunctionSpec& f1, double rho1,
                                               const Vector& s, const GridDomain& domain,
                                               const Tolerance& tol) {
  tol.validate();
  if (!(rho0 >= 0.0 && rho1 >= 0.0)) throw ArgumentError("conjugate_sum_decompose: rho must be >= 0");
  if (s.dim() != domain.dim()) throw ArgumentError("conjugate_sum_decompose: dimension mismatch");
  const std::size_t n = s.dim();
  const bool analytic0 = f0.has_analytic_conjugate();
  const bool analytic1 = f1.has_analytic_conjugate();

  std::optional<GridConjugate> g0, g1;
  if (!analytic0) g0.emplace(f0, rho0, domain);
  if (!analytic1) g1.emplace(f1, rho1, domain);
  auto conj = [&](int which, const Vector& p) -> double {
    if (which == 0) return analytic0 ? f0.analytic_conjugate(rho0, p) : (*g0)(p).value;
    return analytic1 ? f1.analytic_conjugate(rho1, p) : (*g1)(p).value;
  };
  auto objective = [&](const Vector& p0) { return conj(0, p0) + conj(1, s - p0); };

  // Lattice scan; ties go to the smaller ||p0||, then lexicographic order.
  std::optional<Vector> best_p;
  double best_v = kInf;
  auto consider = [&](const Vector& p) {
    const double v = objective(p);
    if (!(v < kInf)) return;
    const double tie = 1e-12 * (1.0 + std::abs(best_v));
    if (!best_p || v < best_v - tie ||
        (v <= best_v + tie && squared_norm(p) < squared_norm(*best_p))) {
      best_v = v;
      best_p = p;
    }
  };
  // p0 = 0 and p0 = s first: a part whose conjugate domain is the single point
  // {0} is never hit by the lattice.
  consider(Vector(n, 0.0));
  consider(s);
  domain.for_each([&](std::size_t, const Vector& p) { consider(p); });
  if (!best_p) throw ArgumentError("conjugate_sum_decompose: s is outside the domain of the joint conjugate");

  Vector p = *best_p;
  const double h = domain.step();
  const int sweeps = n == 1 ? 1 : 4;
  for (int sweep = 0; sweep < sweeps; ++sweep) {
    for (std::size_t i = 0; i < n; ++i) {
      auto phi = [&](double t) {
        Vector q = p;
        q[i] = t;
        return objective(q);
      };
      const auto [t, v] = golden_min(phi, p[i] - h, p[i] + h, p[i], best_v);
      if (v < best_v) {
        best_v = v;
        p[i] = t;
      }
    }
  }

  // Prefer a nearby rounded split of equal value: conjugate domains such as
  // |p| <= 1 or {0} are closed, and a split 1e-12 outside or inside them turns
  // a valid membership into one whose slack drifts linearly to -inf.
  {
    auto snap = [](Vector v) {
      for (std::size_t i = 0; i < v.dim(); ++i) v[i] = std::round(v[i] * 1e9) / 1e9;
      return v;
    };
    const double tie = 1e-12 * (1.0 + std::abs(best_v));
    for (const Vector& cand : {snap(p), s - snap(s - p)}) {
      const double v = objective(cand);
      if (v <= best_v + tie) {
        p = cand;
        best_v = std::min(best_v, v);
        break;
      }
    }
  }

  ConjugateDecomposition out;
  out.p0 = p;
  out.p1 = s - p;
  out.value = best_v;
  out.parts = analytic0 && analytic1 ? Exactness::kAnalytic : Exactness::kGrid;

  double part_slop = 0.0;
  bool tails_ok = true;
  if (g0) {
    const ConjugateValue c = (*g0)(out.p0);
    part_slop += c.slop;
    tails_ok = tails_ok && c.tail_ok;
  }
  if (g1) {
    const ConjugateValue c = (*g1)(out.p1);
    part_slop += c.slop;
    tails_ok = tails_ok && c.tail_ok;
  }
  const ConjugateValue joint = GridConjugate(FunctionSpec::sum(f0, f1), rho0 + rho1, domain)(s);
  out.joint = joint.value;
  const double allowance = kAgreeTol + tol.grid_slop.value_or(part_slop + joint.slop);
  const double margin = allowance - std::abs(out.value - out.joint);
  if (!tails_ok || !joint.tail_ok) {
    out.verdict = Verdict::make_inconclusive(margin, "grid sup tail unresolved");
  } else if (margin < 0.0) {
    out.verdict = Verdict::make_inconclusive(margin, "decomposition value off the joint conjugate; grid too coarse");
  } else {
    out.verdict = Verdict::make_holds(margin);
  }
  return out;
}

}  // namespace wcprox
