#pragma once

// Finite-dimensional substrate: vectors, uniform grids, three-valued
// verification verdicts and the structural weak convexity / paraconvexity
// checks.

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace wcprox {

class FunctionSpec;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

struct ArgumentError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct PreconditionError : std::domain_error {
  using std::domain_error::domain_error;
};

struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UnsupportedError : std::logic_error {
  using std::logic_error::logic_error;
};

/// A proven identity was numerically contradicted beyond tolerance.
struct InconsistencyError : std::logic_error {
  using std::logic_error::logic_error;
};

// ---------------------------------------------------------------------------
// Vector
// ---------------------------------------------------------------------------

/// Dense real vector with finite entries.
class Vector {
 public:
  Vector() = default;
  explicit Vector(std::size_t n, double fill = 0.0);
  Vector(std::initializer_list<double> coords);
  explicit Vector(std::vector<double> coords);

  static Vector constant(std::size_t n, double value) { return Vector(n, value); }

  std::size_t dim() const { return coords_.size(); }
  bool empty() const { return coords_.empty(); }

  double operator[](std::size_t i) const { return coords_[i]; }
  double& operator[](std::size_t i) { return coords_[i]; }

  std::span<const double> coords() const { return coords_; }
  const std::vector<double>& values() const { return coords_; }

  auto begin() const { return coords_.begin(); }
  auto end() const { return coords_.end(); }

  Vector& operator+=(const Vector& other);
  Vector& operator-=(const Vector& other);
  Vector& operator*=(double s);

  friend Vector operator+(Vector a, const Vector& b) { return a += b; }
  friend Vector operator-(Vector a, const Vector& b) { return a -= b; }
  friend Vector operator*(Vector a, double s) { return a *= s; }
  friend Vector operator*(double s, Vector a) { return a *= s; }
  friend Vector operator/(Vector a, double s) { return a *= (1.0 / s); }
  friend Vector operator-(Vector a) { return a *= -1.0; }

  bool operator==(const Vector&) const = default;

  bool all_finite() const;
  std::string to_string() const;

 private:
  std::vector<double> coords_;
};

double dot(const Vector& a, const Vector& b);
double norm(const Vector& a);
double squared_norm(const Vector& a);
double distance(const Vector& a, const Vector& b);
double max_abs_diff(const Vector& a, const Vector& b);

// ---------------------------------------------------------------------------
// Grid
// ---------------------------------------------------------------------------

/// Axis-aligned uniform lattice lo + k*step, inclusive of lo, never past hi.
class GridDomain {
 public:
  static constexpr std::size_t kMaxPointsPerAxis = 1'000'000;
  static constexpr std::size_t kMaxTotalPoints = 20'000'000;

  GridDomain(Vector lo, Vector hi, double step);

  /// [lo, hi]^n with the given step.
  static GridDomain cube(std::size_t n, double lo, double hi, double step);

  const Vector& lo() const { return lo_; }
  const Vector& hi() const { return hi_; }
  double step() const { return step_; }
  std::size_t dim() const { return lo_.dim(); }

  std::size_t points_per_axis(std::size_t axis) const { return counts_[axis]; }
  std::size_t size() const { return total_; }

  /// Last lattice coordinate on the axis (<= hi).
  double axis_max(std::size_t axis) const;
  double axis_value(std::size_t axis, std::size_t k) const;

  Vector point(std::size_t flat_index) const;
  bool on_boundary(std::size_t flat_index) const;

  /// Visits every lattice point in lexicographic order (first axis slowest).
  void for_each(const std::function<void(std::size_t, const Vector&)>& visit) const;

  /// Largest distance from p to a corner of the lattice hull.
  double max_distance_from(const Vector& p) const;
  /// Distance from p to the boundary of the lattice hull (0 when outside).
  double inner_radius_around(const Vector& p) const;
  bool contains(const Vector& p) const;

  /// Half the diagonal of a grid cell: every hull point is this close to the lattice.
  double covering_radius() const;
  /// Same as covering_radius for a boundary face (one fewer dimension).
  double face_covering_radius() const;

 private:
  Vector lo_;
  Vector hi_;
  double step_;
  std::vector<std::size_t> counts_;
  std::size_t total_ = 0;
};

/// Materialises the lattice. Throws ResourceError past the point-count guard.
std::vector<Vector> grid_points(const GridDomain& domain);

/// [-5, 5]^n with step 0.01 in 1D and 0.05 otherwise.
GridDomain standard_grid(std::size_t n);

// ---------------------------------------------------------------------------
// Tolerances and verdicts
// ---------------------------------------------------------------------------

struct Tolerance {
  double abs_tol = 1e-9;
  /// Discretisation allowance. When unset, checks derive it from the
  /// catalog's local Lipschitz bound times the grid covering radius.
  std::optional<double> grid_slop;

  void validate() const;
};

enum class Status { kHolds, kFails, kInconclusive };

std::string to_string(Status s);
Status status_from_string(const std::string& s);

/// Outcome of checking a quantified inequality on a grid. margin is the
/// minimal slack seen; witness is the minimal-slack point.
struct Verdict {
  Status status = Status::kHolds;
  double margin = 0.0;
  std::optional<Vector> witness;
  /// First violating point in lexicographic grid order.
  std::optional<Vector> first_violation;
  std::string reason;

  bool holds() const { return status == Status::kHolds; }
  bool fails() const { return status == Status::kFails; }
  bool inconclusive() const { return status == Status::kInconclusive; }

  static Verdict make_holds(double margin);
  static Verdict make_fails(double margin, Vector witness, std::string reason = {});
  static Verdict make_inconclusive(double margin, std::string reason);
};

/// FAILS dominates INCONCLUSIVE dominates HOLDS; margins take the minimum.
Verdict combine(const Verdict& a, const Verdict& b);

/// Running minimum of a slack function over grid points.
class SlackScan {
 public:
  explicit SlackScan(double abs_tol) : abs_tol_(abs_tol) {}

  void observe(const Vector& at, double slack);

  bool empty() const { return !seen_; }
  double min_slack() const { return min_; }
  const std::optional<Vector>& argmin() const { return argmin_; }
  const std::optional<Vector>& first_violation() const { return first_violation_; }

  /// HOLDS / FAILS from the grid alone.
  Verdict verdict(std::string fail_reason = {}) const;

 private:
  double abs_tol_;
  bool seen_ = false;
  double min_ = 0.0;
  std::optional<Vector> argmin_;
  std::optional<Vector> first_violation_;
};

// ---------------------------------------------------------------------------
// Structural checks
// ---------------------------------------------------------------------------

/// Midpoint convexity of f + (rho/2)||.||^2 over all grid pairs.
Verdict check_weak_convexity(const FunctionSpec& f, double rho, const GridDomain& domain,
                             const Tolerance& tol = {});

inline const std::vector<double> kDefaultLambdas{0.0, 0.25, 0.5, 0.75, 1.0};

/// f(lx+(1-l)y) <= l f(x) + (1-l) f(y) + C l(1-l)||x-y||^gamma on all
/// ordered grid pairs and sampled l.
Verdict check_paraconvexity(const FunctionSpec& f, double gamma, double C,
                            const GridDomain& domain,
                            const std::vector<double>& lambdas = kDefaultLambdas,
                            const Tolerance& tol = {});

}  // namespace wcprox
