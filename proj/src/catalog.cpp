#include "wcprox/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace wcprox {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Rounding allowance at the edge of a conjugate's effective domain.

double sign(double t) { return t > 0.0 ? 1.0 : (t < 0.0 ? -1.0 : 0.0); }
double max_abs(double a, double b) { return std::max(std::abs(a), std::abs(b)); }

// phi restricted to [a, b] equals p2 t^2 + p1 t + const; a/b may be infinite.
struct QuadPiece {
  double a;
  double b;
  double p2;
  double p1;
};

// sup_t -(rho/2) t^2 + u t - phi(t) for piecewise-quadratic phi: the sup is
// attained at a piece endpoint or a piece's stationary point, or is +inf.
ConjugateEval piecewise_conjugate(const std::vector<QuadPiece>& pieces, double rho, double u,
                                  const Term& term) {
  constexpr double kFlat = 1e-12;
  auto psi = [&](double t) { return -0.5 * rho * t * t + u * t - term.value(0, t); };
  double best = -kInf;
  double arg = 0.0;
  auto consider = [&](double t) {
    const double v = psi(t);
    if (v > best || (v == best && std::abs(t) < std::abs(arg))) {
      best = v;
      arg = t;
    }
  };
  for (const QuadPiece& pc : pieces) {
    const double k = rho + 2.0 * pc.p2;  // -psi'' on the piece
    const double slope0 = u - pc.p1;     // psi'(t) = slope0 - k t
    const bool open_right = std::isinf(pc.b);
    const bool open_left = std::isinf(pc.a);
    if (open_right || open_left) {
      if (k < -kFlat) return {kInf, std::nullopt};
      if (std::abs(k) <= kFlat) {
        if (open_right && slope0 > kFlat) return {kInf, std::nullopt};
        if (open_left && slope0 < -kFlat) return {kInf, std::nullopt};
      }
    }
    if (!open_left) consider(pc.a);
    if (!open_right) consider(pc.b);
    if (k > kFlat) {
      const double t = slope0 / k;
      if (t >= pc.a && t <= pc.b) consider(t);
    }
  }
  return {best, arg};
}

class AbsTerm final : public Term {
 public:
  std::string name() const override { return "abs"; }
  ParamMap params() const override { return {}; }
  double rho() const override { return 0.0; }
  double lower_bound(std::size_t) const override { return 0.0; }
  // ||x||_1 >= ||x||_2
  QuadraticMinorant minorant(std::size_t) const override { return {0.0, -1.0, 0.0}; }

  double value(std::size_t, double t) const override { return std::abs(t); }
  Interval derivative(std::size_t, double t) const override {
    if (t > 0.0) return {1.0, 1.0};
    if (t < 0.0) return {-1.0, -1.0};
    return {-1.0, 1.0};
  }
  double slope_bound(std::size_t, double, double) const override { return 1.0; }
  std::vector<double> kinks(std::size_t) const override { return {0.0}; }

  bool has_prox() const override { return true; }
  double prox(std::size_t, double alpha, double t) const override {
    return sign(t) * std::max(std::abs(t) - alpha, 0.0);
  }

  bool has_conjugate() const override { return true; }
  ConjugateEval conjugate(std::size_t, double rho, double u) const override {
    if (rho == 0.0) {
      if (std::abs(u) <= 1.0) return {0.0, 0.0};
      return {kInf, std::nullopt};
    }
    const double excess = std::max(std::abs(u) - 1.0, 0.0);
    return {excess * excess / (2.0 * rho), sign(u) * excess / rho};
  }
};

class QuadraticTerm final : public Term {
 public:
  QuadraticTerm(double a, double c) : a_(a), scalar_center_(c) {}
  QuadraticTerm(double a, Vector center) : a_(a), center_(std::move(center)) {}

  std::string name() const override { return "quadratic"; }
  ParamMap params() const override {
    ParamMap p{{"a", a_}};
    if (center_.empty()) {
      p["c"] = scalar_center_;
    } else {
      for (std::size_t i = 0; i < center_.dim(); ++i) p["c" + std::to_string(i)] = center_[i];
    }
    return p;
  }
  double rho() const override { return 0.0; }
  std::optional<double> lipschitz_grad() const override { return a_; }
  double lower_bound(std::size_t) const override { return 0.0; }
  QuadraticMinorant minorant(std::size_t dim) const override {
    const double cn = center_.empty() ? std::abs(scalar_center_) * std::sqrt(double(dim)) : norm(center_);
    return {0.5 * a_ * cn * cn, a_ * cn, -a_};
  }
  std::size_t fixed_dim() const override { return center_.dim(); }

  double value(std::size_t i, double t) const override {
    const double d = t - c(i);
    return 0.5 * a_ * d * d;
  }
  Interval derivative(std::size_t i, double t) const override {
    const double g = a_ * (t - c(i));
    return {g, g};
  }
  double slope_bound(std::size_t i, double lo, double hi) const override {
    return a_ * max_abs(lo - c(i), hi - c(i));
  }

  bool has_prox() const override { return true; }
  double prox(std::size_t i, double alpha, double t) const override {
    return (t / alpha + a_ * c(i)) / (a_ + 1.0 / alpha);
  }

  bool has_conjugate() const override { return true; }
  ConjugateEval conjugate(std::size_t i, double rho, double u) const override {
    const double curv = a_ + rho;
    if (curv == 0.0) {
      if (u == 0.0) return {0.0, 0.0};
      return {kInf, std::nullopt};
    }
    const double y = (u + a_ * c(i)) / curv;
    return {-0.5 * rho * y * y + u * y - value(i, y), y};
  }

 private:
  double c(std::size_t i) const { return center_.empty() ? scalar_center_ : center_[i]; }

  double a_;
  double scalar_center_ = 0.0;
  Vector center_;
};

class NegQuadTerm final : public Term {
 public:
  explicit NegQuadTerm(double a) : a_(a) {}

  std::string name() const override { return "negquad"; }
  ParamMap params() const override { return {{"a", a_}}; }
  double rho() const override { return a_; }
  std::optional<double> lipschitz_grad() const override { return a_; }
  double lower_bound(std::size_t) const override { return a_ > 0.0 ? -kInf : 0.0; }
  QuadraticMinorant minorant(std::size_t) const override { return {0.0, 0.0, a_}; }

  double value(std::size_t, double t) const override { return -0.5 * a_ * t * t; }
  Interval derivative(std::size_t, double t) const override { return {-a_ * t, -a_ * t}; }
  double slope_bound(std::size_t, double lo, double hi) const override { return a_ * max_abs(lo, hi); }

  bool has_prox() const override { return true; }
  double prox(std::size_t, double alpha, double t) const override { return t / (1.0 - a_ * alpha); }

  bool has_conjugate() const override { return true; }
  ConjugateEval conjugate(std::size_t, double rho, double u) const override {
    const double curv = rho - a_;
    if (std::abs(curv) <= 1e-12 * std::max(1.0, a_)) {
      if (std::abs(u) <= 1e-12) return {0.0, 0.0};
      return {kInf, std::nullopt};
    }
    if (curv < 0.0) return {kInf, std::nullopt};
    return {u * u / (2.0 * curv), u / curv};
  }

 private:
  double a_;
};

// Minimax concave penalty.
class McpTerm final : public Term {
 public:
  McpTerm(double lambda, double gamma) : lambda_(lambda), gamma_(gamma) {}

  std::string name() const override { return "mcp"; }
  ParamMap params() const override { return {{"lambda", lambda_}, {"gamma", gamma_}}; }
  double rho() const override { return 1.0 / gamma_; }
  double lower_bound(std::size_t) const override { return 0.0; }
  QuadraticMinorant minorant(std::size_t) const override { return {0.0, 0.0, 0.0}; }

  double value(std::size_t, double t) const override {
    const double at = std::abs(t);
    if (at <= gamma_ * lambda_) return lambda_ * at - t * t / (2.0 * gamma_);
    return 0.5 * gamma_ * lambda_ * lambda_;
  }
  Interval derivative(std::size_t, double t) const override {
    if (t == 0.0) return {-lambda_, lambda_};
    const double at = std::abs(t);
    const double g = at < gamma_ * lambda_ ? sign(t) * (lambda_ - at / gamma_) : 0.0;
    return {g, g};
  }
  double slope_bound(std::size_t, double, double) const override { return lambda_; }
  std::vector<double> kinks(std::size_t) const override { return {0.0}; }

  bool has_prox() const override { return true; }
  double prox(std::size_t, double alpha, double t) const override {
    const double at = std::abs(t);
    if (at <= alpha * lambda_) return 0.0;
    if (at <= gamma_ * lambda_) return sign(t) * (at - alpha * lambda_) / (1.0 - alpha / gamma_);
    return t;
  }

  bool has_conjugate() const override { return true; }
  ConjugateEval conjugate(std::size_t, double rho, double u) const override {
    const double e = gamma_ * lambda_;
    const double c = -1.0 / (2.0 * gamma_);
    return piecewise_conjugate({{-kInf, -e, 0.0, 0.0},
                                {-e, 0.0, c, -lambda_},
                                {0.0, e, c, lambda_},
                                {e, kInf, 0.0, 0.0}},
                               rho, u, *this);
  }

 private:
  double lambda_;
  double gamma_;
};

// Smoothly clipped absolute deviation.
class ScadTerm final : public Term {
 public:
  ScadTerm(double lambda, double gamma) : lambda_(lambda), gamma_(gamma) {}

  std::string name() const override { return "scad"; }
  ParamMap params() const override { return {{"lambda", lambda_}, {"gamma", gamma_}}; }
  double rho() const override { return 1.0 / (gamma_ - 1.0); }
  double lower_bound(std::size_t) const override { return 0.0; }
  QuadraticMinorant minorant(std::size_t) const override { return {0.0, 0.0, 0.0}; }

  double value(std::size_t, double t) const override {
    const double at = std::abs(t);
    if (at <= lambda_) return lambda_ * at;
    if (at <= gamma_ * lambda_) {
      return (2.0 * gamma_ * lambda_ * at - t * t - lambda_ * lambda_) / (2.0 * (gamma_ - 1.0));
    }
    return 0.5 * lambda_ * lambda_ * (gamma_ + 1.0);
  }
  Interval derivative(std::size_t, double t) const override {
    if (t == 0.0) return {-lambda_, lambda_};
    const double at = std::abs(t);
    double g = 0.0;
    if (at <= lambda_) {
      g = lambda_;
    } else if (at < gamma_ * lambda_) {
      g = (gamma_ * lambda_ - at) / (gamma_ - 1.0);
    }
    return {sign(t) * g, sign(t) * g};
  }
  double slope_bound(std::size_t, double, double) const override { return lambda_; }
  std::vector<double> kinks(std::size_t) const override { return {0.0}; }

  bool has_prox() const override { return true; }
  double prox(std::size_t, double alpha, double t) const override {
    const double at = std::abs(t);
    if (at <= lambda_ * (1.0 + alpha)) return sign(t) * std::max(at - alpha * lambda_, 0.0);
    if (at <= gamma_ * lambda_) {
      return ((gamma_ - 1.0) * t - sign(t) * alpha * gamma_ * lambda_) / (gamma_ - 1.0 - alpha);
    }
    return t;
  }

  bool has_conjugate() const override { return true; }
  ConjugateEval conjugate(std::size_t, double rho, double u) const override {
    const double l = lambda_;
    const double e = gamma_ * lambda_;
    const double c = -1.0 / (2.0 * (gamma_ - 1.0));
    const double s = gamma_ * lambda_ / (gamma_ - 1.0);
    return piecewise_conjugate({{-kInf, -e, 0.0, 0.0},
                                {-e, -l, c, -s},
                                {-l, 0.0, 0.0, -l},
                                {0.0, l, 0.0, l},
                                {l, e, c, s},
                                {e, kInf, 0.0, 0.0}},
                               rho, u, *this);
  }

 private:
  double lambda_;
  double gamma_;
};

// t^2/4 + cos(t): smooth, curvature in [-1/2, 3/2].
class CosQuadTerm final : public Term {
 public:
  std::string name() const override { return "cosquad"; }
  ParamMap params() const override { return {}; }
  double rho() const override { return 0.5; }
  std::optional<double> lipschitz_grad() const override { return 1.5; }
  double lower_bound(std::size_t dim) const override { return double(dim) * min_value(); }
  // cos t >= -1
  QuadraticMinorant minorant(std::size_t dim) const override { return {-double(dim), 0.0, -0.5}; }

  double value(std::size_t, double t) const override { return 0.25 * t * t + std::cos(t); }
  Interval derivative(std::size_t, double t) const override {
    const double g = 0.5 * t - std::sin(t);
    return {g, g};
  }
  double slope_bound(std::size_t, double lo, double hi) const override {
    return 0.5 * max_abs(lo, hi) + 1.0;
  }

  // Stationary points of psi(t) = -(c/2) t^2 + u t - cos t, c = rho + 1/2,
  // lie in [(u-1)/c, (u+1)/c] with psi' >= 0 left of it and <= 0 right of it.
  // Splitting where psi'' = cos t - c vanishes leaves monotone pieces of psi'.
  bool has_conjugate() const override { return true; }
  ConjugateEval conjugate(std::size_t, double rho, double u) const override {
    const double c = rho + 0.5;
    auto psi = [&](double t) { return -0.5 * rho * t * t + u * t - value(0, t); };
    auto dpsi = [&](double t) { return u - c * t + std::sin(t); };
    const double lo = (u - 1.0) / c;
    const double hi = (u + 1.0) / c;
    std::vector<double> cuts{lo, hi};
    if (c < 1.0) {
      const double a = std::acos(c);
      const double two_pi = 2.0 * std::acos(-1.0);
      for (double base : {a, -a}) {
        for (double t = base + two_pi * std::floor((lo - base) / two_pi); t <= hi; t += two_pi) {
          if (t > lo) cuts.push_back(t);
        }
      }
    }
    std::sort(cuts.begin(), cuts.end());
    double best = -kInf;
    double arg = 0.0;
    auto consider = [&](double t) {
      const double v = psi(t);
      if (v > best) {
        best = v;
        arg = t;
      }
    };
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      double a = cuts[k];
      double b = cuts[k + 1];
      consider(a);
      const double da = dpsi(a);
      const double db = dpsi(b);
      if ((da > 0.0) == (db > 0.0) && da != 0.0 && db != 0.0) continue;
      const bool increasing = db > da;
      for (int it = 0; it < 200 && b - a > 1e-16 * std::max(1.0, std::abs(a)); ++it) {
        const double m = 0.5 * (a + b);
        ((dpsi(m) > 0.0) == increasing ? b : a) = m;
      }
      consider(0.5 * (a + b));
    }
    consider(cuts.back());
    return {best, arg};
  }

 private:
  // Minimum sits at the positive root of t/2 = sin t.
  static double min_value() {
    static const double v = [] {
      double t = 1.9;
      for (int k = 0; k < 50; ++k) t -= (0.5 * t - std::sin(t)) / (0.5 - std::cos(t));
      return 0.25 * t * t + std::cos(t);
    }();
    return v;
  }
};

class HuberTerm final : public Term {
 public:
  explicit HuberTerm(double delta) : delta_(delta) {}

  std::string name() const override { return "huber"; }
  ParamMap params() const override { return {{"delta", delta_}}; }
  double rho() const override { return 0.0; }
  std::optional<double> lipschitz_grad() const override { return 1.0 / delta_; }
  double lower_bound(std::size_t) const override { return 0.0; }
  QuadraticMinorant minorant(std::size_t dim) const override {
    return {-0.5 * delta_ * double(dim), -1.0, 0.0};
  }

  double value(std::size_t, double t) const override {
    const double at = std::abs(t);
    return at <= delta_ ? t * t / (2.0 * delta_) : at - 0.5 * delta_;
  }
  Interval derivative(std::size_t, double t) const override {
    const double g = std::clamp(t / delta_, -1.0, 1.0);
    return {g, g};
  }
  double slope_bound(std::size_t, double, double) const override { return 1.0; }

  bool has_prox() const override { return true; }
  double prox(std::size_t, double alpha, double t) const override {
    if (std::abs(t) <= delta_ + alpha) return t * delta_ / (delta_ + alpha);
    return t - alpha * sign(t);
  }

  bool has_conjugate() const override { return true; }
  ConjugateEval conjugate(std::size_t, double rho, double u) const override {
    const double au = std::abs(u);
    if (rho == 0.0) {
      if (au <= 1.0) return {0.5 * delta_ * u * u, delta_ * u};
      return {kInf, std::nullopt};
    }
    const double curv = 1.0 / delta_ + rho;
    if (au <= 1.0 + rho * delta_) return {u * u / (2.0 * curv), u / curv};
    const double y = (au - 1.0) / rho;
    return {(au - 1.0) * (au - 1.0) / (2.0 * rho) + 0.5 * delta_, sign(u) * y};
  }

 private:
  double delta_;
};

void require(bool ok, const std::string& msg) {
  if (!ok) throw ArgumentError(msg);
}

}  // namespace

// ---------------------------------------------------------------------------

double Interval::nearest_to_zero() const { return std::clamp(0.0, lo, hi); }

double QuadraticMinorant::operator()(const Vector& x) const {
  const double r = norm(x);
  return c0 - c1 * r - 0.5 * c2 * r * r;
}

QuadraticMinorant& QuadraticMinorant::operator+=(const QuadraticMinorant& o) {
  c0 += o.c0;
  c1 += o.c1;
  c2 += o.c2;
  return *this;
}

double Term::prox(std::size_t, double, double) const {
  throw UnsupportedError(name() + ": no closed-form prox");
}

ConjugateEval Term::conjugate(std::size_t, double, double) const {
  throw UnsupportedError(name() + ": no analytic conjugate");
}

// ---------------------------------------------------------------------------
// FunctionSpec

FunctionSpec::FunctionSpec(std::shared_ptr<const Term> term) {
  if (!term) throw ArgumentError("FunctionSpec: null term");
  name_ = term->name();
  params_ = term->params();
  rho_ = term->rho();
  lipschitz_grad_ = term->lipschitz_grad();
  fixed_dim_ = term->fixed_dim();
  terms_.push_back(std::move(term));
}

FunctionSpec FunctionSpec::sum(const FunctionSpec& a, const FunctionSpec& b) {
  if (a.fixed_dim_ && b.fixed_dim_ && a.fixed_dim_ != b.fixed_dim_) {
    throw ArgumentError("sum: parts have different fixed dimensions");
  }
  FunctionSpec s;
  s.name_ = "sum";
  s.parts_ = {a, b};
  s.terms_ = a.terms_;
  s.terms_.insert(s.terms_.end(), b.terms_.begin(), b.terms_.end());
  s.rho_ = a.rho_ + b.rho_;
  if (a.lipschitz_grad_ && b.lipschitz_grad_) s.lipschitz_grad_ = *a.lipschitz_grad_ + *b.lipschitz_grad_;
  s.fixed_dim_ = std::max(a.fixed_dim_, b.fixed_dim_);
  return s;
}

FunctionDesc FunctionSpec::describe() const {
  FunctionDesc d{name_, params_, {}};
  for (const auto& p : parts_) d.terms.push_back(p.describe());
  return d;
}

double FunctionSpec::lower_bound(std::size_t dim) const {
  double lb = 0.0;
  for (const auto& t : terms_) lb += t->lower_bound(dim);
  return lb;
}

QuadraticMinorant FunctionSpec::minorant(std::size_t dim) const {
  QuadraticMinorant m;
  for (const auto& t : terms_) m += t->minorant(dim);
  return m;
}

bool FunctionSpec::has_exact_prox() const { return terms_.size() == 1 && terms_[0]->has_prox(); }

bool FunctionSpec::has_analytic_conjugate() const {
  return terms_.size() == 1 && terms_[0]->has_conjugate();
}

void FunctionSpec::check_dim(const Vector& x) const {
  if (x.dim() == 0) throw ArgumentError(name_ + ": empty input vector");
  if (fixed_dim_ && x.dim() != fixed_dim_) {
    throw ArgumentError(name_ + ": expected dimension " + std::to_string(fixed_dim_));
  }
}

double FunctionSpec::evaluate(const Vector& x) const {
  check_dim(x);
  double s = 0.0;
  for (const auto& t : terms_) {
    for (std::size_t i = 0; i < x.dim(); ++i) s += t->value(i, x[i]);
  }
  return s;
}

std::vector<Interval> FunctionSpec::derivative_box(const Vector& x) const {
  check_dim(x);
  std::vector<Interval> box(x.dim());
  for (const auto& t : terms_) {
    for (std::size_t i = 0; i < x.dim(); ++i) {
      const Interval d = t->derivative(i, x[i]);
      box[i].lo += d.lo;
      box[i].hi += d.hi;
    }
  }
  return box;
}

bool FunctionSpec::differentiable_at(const Vector& x) const {
  for (const auto& iv : derivative_box(x)) {
    if (iv.lo != iv.hi) return false;
  }
  return true;
}

Vector FunctionSpec::gradient(const Vector& x) const {
  const auto box = derivative_box(x);
  Vector g(x.dim());
  for (std::size_t i = 0; i < box.size(); ++i) {
    if (box[i].lo != box[i].hi) throw UnsupportedError(name_ + ": not differentiable at " + x.to_string());
    g[i] = box[i].lo;
  }
  return g;
}

std::vector<double> FunctionSpec::kinks(std::size_t axis) const {
  std::set<double> all;
  for (const auto& t : terms_) {
    for (double k : t->kinks(axis)) all.insert(k);
  }
  return {all.begin(), all.end()};
}

Vector FunctionSpec::exact_prox(double alpha, const Vector& y) const {
  if (!(alpha > 0.0)) throw ArgumentError("exact_prox: alpha must be > 0");
  if (!has_exact_prox()) throw UnsupportedError(name_ + ": no closed-form prox");
  if (!(1.0 / alpha > rho_)) throw PreconditionError("exact_prox: requires 1/alpha > rho");
  check_dim(y);
  Vector x(y.dim());
  for (std::size_t i = 0; i < y.dim(); ++i) x[i] = terms_[0]->prox(i, alpha, y[i]);
  return x;
}

ConjugateEval FunctionSpec::analytic_conjugate_coord(std::size_t i, double rho, double u) const {
  if (!has_analytic_conjugate()) throw UnsupportedError(name_ + ": no analytic conjugate");
  return terms_[0]->conjugate(i, rho, u);
}

double FunctionSpec::analytic_conjugate(double rho, const Vector& u, Vector* argmax) const {
  if (!(rho >= 0.0)) throw ArgumentError("conjugate: rho must be >= 0");
  check_dim(u);
  double total = 0.0;
  bool attained = true;
  Vector arg(u.dim());
  for (std::size_t i = 0; i < u.dim(); ++i) {
    const ConjugateEval c = analytic_conjugate_coord(i, rho, u[i]);
    total += c.value;
    if (c.argmax) {
      arg[i] = *c.argmax;
    } else {
      attained = false;
    }
  }
  if (argmax) *argmax = attained && std::isfinite(total) ? arg : Vector{};
  return total;
}

double FunctionSpec::lipschitz_bound(const GridDomain& domain) const {
  double s = 0.0;
  for (std::size_t i = 0; i < domain.dim(); ++i) {
    double li = 0.0;
    for (const auto& t : terms_) li += t->slope_bound(i, domain.lo()[i], domain.axis_max(i));
    s += li * li;
  }
  return std::sqrt(s);
}

// ---------------------------------------------------------------------------
// Constructors

FunctionSpec abs_fn() { return FunctionSpec(std::make_shared<AbsTerm>()); }

FunctionSpec quadratic(double a, double c) {
  require(a >= 0.0 && std::isfinite(a), "quadratic: a must be >= 0");
  require(std::isfinite(c), "quadratic: c must be finite");
  return FunctionSpec(std::make_shared<QuadraticTerm>(a, c));
}

FunctionSpec quadratic(double a, const Vector& center) {
  require(a >= 0.0 && std::isfinite(a), "quadratic: a must be >= 0");
  require(center.dim() > 0, "quadratic: empty center");
  return FunctionSpec(std::make_shared<QuadraticTerm>(a, center));
}

FunctionSpec negquad(double a) {
  require(a >= 0.0 && std::isfinite(a), "negquad: a must be >= 0");
  return FunctionSpec(std::make_shared<NegQuadTerm>(a));
}

FunctionSpec mcp(double lambda, double gamma) {
  require(lambda > 0.0 && std::isfinite(lambda), "mcp: lambda must be > 0");
  require(gamma > 0.0 && std::isfinite(gamma), "mcp: gamma must be > 0");
  return FunctionSpec(std::make_shared<McpTerm>(lambda, gamma));
}

FunctionSpec scad(double lambda, double gamma) {
  require(lambda > 0.0 && std::isfinite(lambda), "scad: lambda must be > 0");
  require(gamma > 1.0 && std::isfinite(gamma), "scad: gamma must be > 1");
  return FunctionSpec(std::make_shared<ScadTerm>(lambda, gamma));
}

FunctionSpec cosquad() { return FunctionSpec(std::make_shared<CosQuadTerm>()); }

FunctionSpec huber(double delta) {
  require(delta > 0.0 && std::isfinite(delta), "huber: delta must be > 0");
  return FunctionSpec(std::make_shared<HuberTerm>(delta));
}

FunctionSpec convexified(const FunctionSpec& f, double rho) {
  require(rho >= 0.0, "convexified: rho must be >= 0");
  FunctionSpec out = FunctionSpec::sum(f, quadratic(rho, 0.0));
  out.rho_ = std::max(0.0, f.rho() - rho);
  return out;
}

FunctionSpec make_function(const std::string& name, const ParamMap& params) {
  auto take = [&](std::initializer_list<std::pair<const char*, double>> allowed) {
    std::map<std::string, double> out;
    for (const auto& [k, def] : allowed) out[k] = def;
    for (const auto& [k, v] : params) {
      if (!out.count(k)) throw ArgumentError(name + ": unknown parameter '" + k + "'");
      if (!std::isfinite(v)) throw ArgumentError(name + ": parameter '" + k + "' not finite");
      out[k] = v;
    }
    return out;
  };
  if (name == "abs") {
    take({});
    return abs_fn();
  }
  if (name == "quadratic") {
    auto p = take({{"a", 1.0}, {"c", 0.0}});
    return quadratic(p["a"], p["c"]);
  }
  if (name == "negquad") return negquad(take({{"a", 1.0}})["a"]);
  if (name == "mcp") {
    auto p = take({{"lambda", 1.0}, {"gamma", 2.0}});
    return mcp(p["lambda"], p["gamma"]);
  }
  if (name == "scad") {
    auto p = take({{"lambda", 1.0}, {"gamma", 3.7}});
    return scad(p["lambda"], p["gamma"]);
  }
  if (name == "cosquad") {
    take({});
    return cosquad();
  }
  if (name == "huber") return huber(take({{"delta", 1.0}})["delta"]);
  if (name == "sum") throw ArgumentError("sum: build from a FunctionDesc with terms");
  throw ArgumentError("unknown function '" + name + "'");
}

FunctionSpec make_function(const FunctionDesc& desc) {
  if (desc.name != "sum") {
    if (!desc.terms.empty()) throw ArgumentError(desc.name + ": only 'sum' takes terms");
    return make_function(desc.name, desc.params);
  }
  if (!desc.params.empty()) throw ArgumentError("sum: takes no parameters");
  if (desc.terms.size() < 2) throw ArgumentError("sum: needs at least two terms");
  FunctionSpec acc = make_function(desc.terms[0]);
  for (std::size_t i = 1; i < desc.terms.size(); ++i) acc = FunctionSpec::sum(acc, make_function(desc.terms[i]));
  return acc;
}

std::vector<FunctionSpec> catalog_samples() {
  return {abs_fn(), quadratic(1.0, 0.0), negquad(1.0), mcp(1.0, 2.0),
          scad(1.0, 3.0), cosquad(), huber(1.0)};
}

}  // namespace wcprox
