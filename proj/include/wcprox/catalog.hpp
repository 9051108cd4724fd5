#pragma once

// Named weakly convex test functions. Every entry is coordinate-separable:
// f(x) = sum_i phi_i(x_i), which is what makes closed-form proxes, analytic
// rho-conjugates and box-shaped subdifferentials available.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "wcprox/core.hpp"

namespace wcprox {

using ParamMap = std::map<std::string, double>;

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double t) const { return lo <= t && t <= hi; }
  /// Element of minimal absolute value.
  double nearest_to_zero() const;
};

/// f(x) >= c0 - c1 ||x|| - (c2/2) ||x||^2. Negative c1 / c2 encode growth.
struct QuadraticMinorant {
  double c0 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;

  double operator()(const Vector& x) const;
  QuadraticMinorant& operator+=(const QuadraticMinorant& o);
};

struct ConjugateEval {
  double value = 0.0;
  std::optional<double> argmax;
};

/// Scalar building block phi_i of a separable function.
class Term {
 public:
  virtual ~Term() = default;

  virtual std::string name() const = 0;
  virtual ParamMap params() const = 0;
  virtual double rho() const = 0;
  virtual std::optional<double> lipschitz_grad() const { return std::nullopt; }
  virtual double lower_bound(std::size_t dim) const = 0;
  virtual QuadraticMinorant minorant(std::size_t dim) const = 0;
  /// 0 when the term accepts any dimension.
  virtual std::size_t fixed_dim() const { return 0; }

  virtual double value(std::size_t i, double t) const = 0;
  /// One-sided derivatives [phi'_-(t), phi'_+(t)].
  virtual Interval derivative(std::size_t i, double t) const = 0;
  /// sup |phi'| over [a, b].
  virtual double slope_bound(std::size_t i, double a, double b) const = 0;
  /// Points of non-differentiability.
  virtual std::vector<double> kinks(std::size_t) const { return {}; }

  virtual bool has_prox() const { return false; }
  /// argmin_s phi_i(s) + (s - t)^2 / (2 alpha); caller guarantees 1/alpha > rho.
  virtual double prox(std::size_t i, double alpha, double t) const;

  virtual bool has_conjugate() const { return false; }
  /// sup_s { -(rho/2) s^2 + u s - phi_i(s) }, possibly +inf.
  virtual ConjugateEval conjugate(std::size_t i, double rho, double u) const;
};

struct FunctionDesc {
  std::string name;
  ParamMap params;
  std::vector<FunctionDesc> terms;  // only for "sum"
};

/// Immutable weakly convex function with its declared modulus and metadata.
class FunctionSpec {
 public:
  explicit FunctionSpec(std::shared_ptr<const Term> term);

  static FunctionSpec sum(const FunctionSpec& a, const FunctionSpec& b);

  const std::string& name() const { return name_; }
  const ParamMap& params() const { return params_; }
  const std::vector<FunctionSpec>& parts() const { return parts_; }
  FunctionDesc describe() const;

  /// Modulus of weak convexity: f + (rho/2)||.||^2 is convex.
  double rho() const { return rho_; }
  std::optional<double> lipschitz_grad() const { return lipschitz_grad_; }
  double lower_bound(std::size_t dim) const;
  QuadraticMinorant minorant(std::size_t dim) const;
  bool has_exact_prox() const;
  bool has_analytic_conjugate() const;

  double operator()(const Vector& x) const { return evaluate(x); }
  double evaluate(const Vector& x) const;

  /// Box of one-sided partial derivatives; for weakly convex separable f
  /// this is the (limiting) subdifferential.
  std::vector<Interval> derivative_box(const Vector& x) const;
  bool differentiable_at(const Vector& x) const;
  /// Throws UnsupportedError where f has a kink.
  Vector gradient(const Vector& x) const;

  std::vector<double> kinks(std::size_t axis) const;

  /// Exact minimiser of f(x) + ||x - y||^2 / (2 alpha).
  Vector exact_prox(double alpha, const Vector& y) const;

  /// Closed-form rho-conjugate. Throws UnsupportedError when unavailable.
  ConjugateEval analytic_conjugate_coord(std::size_t i, double rho, double u) const;
  double analytic_conjugate(double rho, const Vector& u, Vector* argmax = nullptr) const;

  /// Euclidean Lipschitz bound of f over the lattice hull.
  double lipschitz_bound(const GridDomain& domain) const;

  void check_dim(const Vector& x) const;

 private:
  friend FunctionSpec convexified(const FunctionSpec& f, double rho);
  FunctionSpec() = default;

  std::string name_;
  ParamMap params_;
  std::vector<std::shared_ptr<const Term>> terms_;
  std::vector<FunctionSpec> parts_;
  double rho_ = 0.0;
  std::optional<double> lipschitz_grad_;
  std::size_t fixed_dim_ = 0;
};

// Catalog constructors.
FunctionSpec abs_fn();
FunctionSpec quadratic(double a, double c = 0.0);
/// (a/2)||x - center||^2 with a per-coordinate center.
FunctionSpec quadratic(double a, const Vector& center);
FunctionSpec negquad(double a);
FunctionSpec mcp(double lambda, double gamma);
FunctionSpec scad(double lambda, double gamma);
FunctionSpec cosquad();
FunctionSpec huber(double delta);

/// f + (rho/2)||.||^2.
FunctionSpec convexified(const FunctionSpec& f, double rho);

/// Looks up a catalog entry by name. Throws ArgumentError on unknown names
/// or invalid parameters.
FunctionSpec make_function(const std::string& name, const ParamMap& params = {});
FunctionSpec make_function(const FunctionDesc& desc);

/// Every non-sum catalog entry with representative parameters.
std::vector<FunctionSpec> catalog_samples();

}  // namespace wcprox
