#include "wcprox/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "wcprox/catalog.hpp"

namespace wcprox {

// ---------------------------------------------------------------------------
// Vector

Vector::Vector(std::size_t n, double fill) : coords_(n, fill) {
  if (!std::isfinite(fill)) throw ArgumentError("Vector: non-finite fill value");
}

Vector::Vector(std::initializer_list<double> coords) : coords_(coords) {
  if (!all_finite()) throw ArgumentError("Vector: non-finite coordinate");
}

Vector::Vector(std::vector<double> coords) : coords_(std::move(coords)) {
  if (!all_finite()) throw ArgumentError("Vector: non-finite coordinate");
}

Vector& Vector::operator+=(const Vector& other) {
  if (other.dim() != dim()) throw ArgumentError("Vector: dimension mismatch");
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] += other.coords_[i];
  return *this;
}

Vector& Vector::operator-=(const Vector& other) {
  if (other.dim() != dim()) throw ArgumentError("Vector: dimension mismatch");
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] -= other.coords_[i];
  return *this;
}

Vector& Vector::operator*=(double s) {
  for (double& c : coords_) c *= s;
  return *this;
}

bool Vector::all_finite() const {
  return std::all_of(coords_.begin(), coords_.end(), [](double c) { return std::isfinite(c); });
}

std::string Vector::to_string() const {
  std::ostringstream os;
  os.precision(12);
  os << '(';
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (i) os << ", ";
    os << coords_[i];
  }
  os << ')';
  return os.str();
}

double dot(const Vector& a, const Vector& b) {
  if (a.dim() != b.dim()) throw ArgumentError("dot: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) s += a[i] * b[i];
  return s;
}

double squared_norm(const Vector& a) { return dot(a, a); }
double norm(const Vector& a) { return std::sqrt(squared_norm(a)); }

double distance(const Vector& a, const Vector& b) {
  if (a.dim() != b.dim()) throw ArgumentError("distance: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

double max_abs_diff(const Vector& a, const Vector& b) {
  if (a.dim() != b.dim()) throw ArgumentError("max_abs_diff: dimension mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// ---------------------------------------------------------------------------
// GridDomain

GridDomain::GridDomain(Vector lo, Vector hi, double step)
    : lo_(std::move(lo)), hi_(std::move(hi)), step_(step) {
  if (lo_.dim() == 0) throw ArgumentError("GridDomain: empty dimension");
  if (lo_.dim() != hi_.dim()) throw ArgumentError("GridDomain: lo/hi dimension mismatch");
  if (!(step_ > 0.0) || !std::isfinite(step_)) throw ArgumentError("GridDomain: step must be > 0");
  counts_.resize(lo_.dim());
  total_ = 1;
  for (std::size_t a = 0; a < lo_.dim(); ++a) {
    if (!(lo_[a] < hi_[a])) throw ArgumentError("GridDomain: lo must be < hi componentwise");
    const double span = (hi_[a] - lo_[a]) / step_;
    if (span + 1.0 > static_cast<double>(kMaxPointsPerAxis)) {
      throw ResourceError("GridDomain: more than 1e6 points on an axis");
    }
    counts_[a] = static_cast<std::size_t>(std::floor(span * (1.0 + 1e-12) + 1e-9)) + 1;
    total_ *= counts_[a];
    if (total_ > kMaxTotalPoints) throw ResourceError("GridDomain: total point count guard exceeded");
  }
}

GridDomain GridDomain::cube(std::size_t n, double lo, double hi, double step) {
  return GridDomain(Vector(n, lo), Vector(n, hi), step);
}

double GridDomain::axis_value(std::size_t axis, std::size_t k) const {
  return lo_[axis] + static_cast<double>(k) * step_;
}

double GridDomain::axis_max(std::size_t axis) const { return axis_value(axis, counts_[axis] - 1); }

Vector GridDomain::point(std::size_t flat_index) const {
  Vector p(dim());
  for (std::size_t a = dim(); a-- > 0;) {
    const std::size_t k = flat_index % counts_[a];
    flat_index /= counts_[a];
    p[a] = axis_value(a, k);
  }
  return p;
}

bool GridDomain::on_boundary(std::size_t flat_index) const {
  for (std::size_t a = dim(); a-- > 0;) {
    const std::size_t k = flat_index % counts_[a];
    flat_index /= counts_[a];
    if (k == 0 || k + 1 == counts_[a]) return true;
  }
  return false;
}

void GridDomain::for_each(const std::function<void(std::size_t, const Vector&)>& visit) const {
  const std::size_t n = dim();
  std::vector<std::size_t> k(n, 0);
  Vector p(n);
  for (std::size_t a = 0; a < n; ++a) p[a] = lo_[a];
  for (std::size_t flat = 0; flat < total_; ++flat) {
    visit(flat, p);
    for (std::size_t a = n; a-- > 0;) {
      if (++k[a] < counts_[a]) {
        p[a] = axis_value(a, k[a]);
        break;
      }
      k[a] = 0;
      p[a] = lo_[a];
    }
  }
}

double GridDomain::max_distance_from(const Vector& p) const {
  double s = 0.0;
  for (std::size_t a = 0; a < dim(); ++a) {
    const double d = std::max(std::abs(p[a] - lo_[a]), std::abs(p[a] - axis_max(a)));
    s += d * d;
  }
  return std::sqrt(s);
}

double GridDomain::inner_radius_around(const Vector& p) const {
  double r = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < dim(); ++a) {
    r = std::min({r, p[a] - lo_[a], axis_max(a) - p[a]});
  }
  return std::max(r, 0.0);
}

bool GridDomain::contains(const Vector& p) const {
  if (p.dim() != dim()) return false;
  for (std::size_t a = 0; a < dim(); ++a) {
    if (p[a] < lo_[a] || p[a] > axis_max(a)) return false;
  }
  return true;
}

double GridDomain::covering_radius() const {
  return 0.5 * step_ * std::sqrt(static_cast<double>(dim()));
}

double GridDomain::face_covering_radius() const {
  return 0.5 * step_ * std::sqrt(static_cast<double>(dim() - 1));
}

std::vector<Vector> grid_points(const GridDomain& domain) {
  std::vector<Vector> pts;
  pts.reserve(domain.size());
  domain.for_each([&](std::size_t, const Vector& p) { pts.push_back(p); });
  return pts;
}

GridDomain standard_grid(std::size_t n) {
  return GridDomain::cube(n, -5.0, 5.0, n == 1 ? 0.01 : 0.05);
}

// ---------------------------------------------------------------------------
// Tolerance / Verdict

void Tolerance::validate() const {
  if (!(abs_tol > 0.0)) throw ArgumentError("Tolerance: abs_tol must be > 0");
  if (grid_slop && !(*grid_slop >= 0.0)) throw ArgumentError("Tolerance: grid_slop must be >= 0");
}

std::string to_string(Status s) {
  switch (s) {
    case Status::kHolds: return "HOLDS";
    case Status::kFails: return "FAILS";
    case Status::kInconclusive: return "INCONCLUSIVE";
  }
  return "?";
}

Status status_from_string(const std::string& s) {
  if (s == "HOLDS") return Status::kHolds;
  if (s == "FAILS") return Status::kFails;
  if (s == "INCONCLUSIVE") return Status::kInconclusive;
  throw ArgumentError("unknown status '" + s + "'");
}

Verdict Verdict::make_holds(double margin) {
  Verdict v;
  v.status = Status::kHolds;
  v.margin = margin;
  return v;
}

Verdict Verdict::make_fails(double margin, Vector witness, std::string reason) {
  Verdict v;
  v.status = Status::kFails;
  v.margin = margin;
  v.witness = std::move(witness);
  v.reason = std::move(reason);
  return v;
}

Verdict Verdict::make_inconclusive(double margin, std::string reason) {
  Verdict v;
  v.status = Status::kInconclusive;
  v.margin = margin;
  v.reason = std::move(reason);
  return v;
}

Verdict combine(const Verdict& a, const Verdict& b) {
  auto rank = [](Status s) {
    return s == Status::kFails ? 2 : s == Status::kInconclusive ? 1 : 0;
  };
  Verdict out = rank(b.status) > rank(a.status) ? b : a;
  if (rank(a.status) == rank(b.status) && b.margin < a.margin) out = b;
  out.margin = std::min(a.margin, b.margin);
  if (!out.first_violation) out.first_violation = a.first_violation ? a.first_violation : b.first_violation;
  return out;
}

void SlackScan::observe(const Vector& at, double slack) {
  if (std::isnan(slack)) slack = -std::numeric_limits<double>::infinity();
  if (!seen_ || slack < min_) {
    min_ = slack;
    argmin_ = at;
  }
  seen_ = true;
  if (slack < -abs_tol_ && !first_violation_) first_violation_ = at;
}

Verdict SlackScan::verdict(std::string fail_reason) const {
  if (!seen_) return Verdict::make_inconclusive(0.0, "no grid point evaluated");
  if (min_ < -abs_tol_) {
    Verdict v = Verdict::make_fails(min_, *argmin_, std::move(fail_reason));
    v.first_violation = first_violation_;
    return v;
  }
  return Verdict::make_holds(min_);
}

// ---------------------------------------------------------------------------
// Structural checks

Verdict check_weak_convexity(const FunctionSpec& f, double rho, const GridDomain& domain,
                             const Tolerance& tol) {
  tol.validate();
  if (!(rho >= 0.0)) throw ArgumentError("check_weak_convexity: rho must be >= 0");
  const auto pts = grid_points(domain);
  auto g = [&](const Vector& x) { return f(x) + 0.5 * rho * squared_norm(x); };
  std::vector<double> gv(pts.size());
  bool any_finite = false;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    gv[i] = g(pts[i]);
    any_finite = any_finite || std::isfinite(gv[i]);
  }
  if (!any_finite) return Verdict::make_inconclusive(0.0, "f is +inf on the whole grid");

  SlackScan scan(tol.abs_tol);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (!std::isfinite(gv[i])) continue;
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      if (!std::isfinite(gv[j])) continue;
      const Vector mid = 0.5 * (pts[i] + pts[j]);
      scan.observe(mid, 0.5 * (gv[i] + gv[j]) - g(mid));
    }
  }
  if (scan.empty()) return Verdict::make_holds(0.0);
  return scan.verdict("midpoint convexity of f + (rho/2)||.||^2 violated");
}

Verdict check_paraconvexity(const FunctionSpec& f, double gamma, double C,
                            const GridDomain& domain, const std::vector<double>& lambdas,
                            const Tolerance& tol) {
  tol.validate();
  if (lambdas.empty()) throw ArgumentError("check_paraconvexity: empty lambda list");
  if (!(gamma > 1.0)) throw ArgumentError("check_paraconvexity: gamma must be > 1");
  if (!(C >= 0.0)) throw ArgumentError("check_paraconvexity: C must be >= 0");
  for (double l : lambdas) {
    if (!(l >= 0.0 && l <= 1.0)) throw ArgumentError("check_paraconvexity: lambda outside [0,1]");
  }
  const auto pts = grid_points(domain);
  std::vector<double> fv(pts.size());
  bool any_finite = false;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    fv[i] = f(pts[i]);
    any_finite = any_finite || std::isfinite(fv[i]);
  }
  if (!any_finite) return Verdict::make_inconclusive(0.0, "f is +inf on the whole grid");

  SlackScan scan(tol.abs_tol);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (!std::isfinite(fv[i])) continue;
    for (std::size_t j = 0; j < pts.size(); ++j) {
      if (i == j || !std::isfinite(fv[j])) continue;
      const double dist_pow = std::pow(distance(pts[i], pts[j]), gamma);
      for (double l : lambdas) {
        const Vector z = l * pts[i] + (1.0 - l) * pts[j];
        const double rhs = l * fv[i] + (1.0 - l) * fv[j] + C * l * (1.0 - l) * dist_pow;
        scan.observe(z, rhs - f(z));
      }
    }
  }
  return scan.verdict("paraconvexity inequality violated");
}

}  // namespace wcprox
