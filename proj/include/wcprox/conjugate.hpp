#pragma once

// rho-conjugates (f)*_rho(u) = sup_y { -(rho/2)||y||^2 + <u,y> - f(y) } and
// the two-function infimal-convolution decomposition of a sum's conjugate.

#include <optional>
#include <vector>

#include "wcprox/catalog.hpp"
#include "wcprox/core.hpp"

namespace wcprox {

enum class Exactness { kAnalytic, kGrid };

std::string to_string(Exactness e);

struct ConjugateValue {
  double value = 0.0;
  /// Maximiser when attained (analytic) or the lexicographically first grid argmax.
  std::optional<Vector> argsup;
  Exactness exactness = Exactness::kGrid;
  /// Grid path only: the sup beyond the lattice hull is provably <= value + slop.
  bool tail_ok = true;
  /// Grid path only: value <= true sup <= value + slop when tail_ok.
  double slop = 0.0;
};

/// Grid sup oracle with the lattice and f-values cached for repeated queries.
class GridConjugate {
 public:
  GridConjugate(const FunctionSpec& f, double rho, const GridDomain& domain);

  ConjugateValue operator()(const Vector& u) const;

  double rho() const { return rho_; }
  const GridDomain& domain() const { return domain_; }

 private:
  double rho_;
  GridDomain domain_;
  std::size_t n_;
  std::size_t count_ = 0;
  std::vector<double> coords_;  // row-major, n_ per point
  std::vector<double> base_;    // -(rho/2)||y||^2 - f(y)
  std::vector<char> boundary_;
  double lip_f_ = 0.0;
  double max_norm_ = 0.0;
  double origin_radius_ = 0.0;
  QuadraticMinorant minorant_;
  bool concave_ = false;
};

/// Analytic when the catalog has a closed form, otherwise the grid sup.
ConjugateValue rho_conjugate(const FunctionSpec& f, double rho, const Vector& u,
                             const GridDomain& domain);

/// Checks (f)*_rho(u) == (f + (rho/2)||.||^2)*(u) at every u within
/// 1e-6 + grid slop of the paths involved.
Verdict conjugate_identity_check(const FunctionSpec& f, double rho, const std::vector<Vector>& us,
                                 const GridDomain& domain, const Tolerance& tol = {});

struct ConjugateDecomposition {
  Vector p0;
  Vector p1;
  /// (f0)*_rho0(p0) + (f1)*_rho1(p1).
  double value = 0.0;
  /// (f0 + f1)*_{rho0+rho1}(s) on the grid.
  double joint = 0.0;
  /// ANALYTIC only when both parts are.
  Exactness parts = Exactness::kGrid;
  /// HOLDS when value matches joint within 1e-6 + slop; INCONCLUSIVE otherwise.
  Verdict verdict;
};

/// Minimises (f0)*_rho0(p0) + (f1)*_rho1(s - p0) over a p0-lattice of the same
/// extent as the domain, then refines coordinate-wise. Each part uses its
/// analytic conjugate when the catalog has one, the grid sup otherwise.
/// Throws ArgumentError when s is outside the domain of the joint conjugate.
ConjugateDecomposition conjugate_sum_decompose(const FunctionSpec& f0, double rho0,
                                               const FunctionSpec& f1, double rho1,
                                               const Vector& s, const GridDomain& domain,
                                               const Tolerance& tol = {});

}  // namespace wcprox
