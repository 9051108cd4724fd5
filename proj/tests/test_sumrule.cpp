#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "wcprox/subdiff.hpp"
#include "wcprox/sumrule.hpp"

using namespace wcprox;
using doctest::Approx;

TEST_CASE("golden round trip: (x-2)^2/2 + |x| at x = 1.1, u = 0, eps = 0.005") {
  const SumDecomposition d = decompose_subgradient(quadratic(1.0, 2.0), 0.0, abs_fn(), 0.0, Vector{1.1},
                                                   Vector{0.0}, 0.005, standard_grid(1));
  CHECK(d.eps0 == Approx(0.005).epsilon(1e-9));
  CHECK(d.eps1 == Approx(0.0).epsilon(1e-9));
  CHECK(d.p0[0] == Approx(-1.0).epsilon(1e-9));
  CHECK(d.p1[0] == Approx(1.0).epsilon(1e-9));
  CHECK(d.member0.holds());
  CHECK(d.member1.holds());
  CHECK(d.verdict.holds());
}

TEST_CASE("failed premises are argument errors") {
  const GridDomain g = standard_grid(1);
  CHECK_THROWS_AS(decompose_subgradient(quadratic(1.0, 2.0), 0.0, abs_fn(), 0.0, Vector{1.1}, Vector{1.0}, 0.005, g),
                  ArgumentError);
  CHECK_THROWS_AS(forward_sum_inclusion(abs_fn(), 0.0, 0.0, Vector{2.0}, abs_fn(), 0.0, 0.0, Vector{0.0},
                                        Vector{0.0}, g),
                  ArgumentError);
  // Moduli below the declared ones are rejected.
  CHECK_THROWS_AS(decompose_subgradient(negquad(1.0), 0.0, abs_fn(), 0.0, Vector{0.0}, Vector{0.0}, 0.0, g),
                  ArgumentError);
}

TEST_CASE("property: forward inclusion of verified premises") {
  const GridDomain g = standard_grid(1);
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> xd(-3, 3), ed(0.0, 0.2);
  const auto cat = catalog_samples();
  int checked = 0;
  for (std::size_t i = 0; i < cat.size(); ++i) {
    for (std::size_t j = 0; j < cat.size(); j += 2) {
      const Vector x{xd(rng)};
      const double e0 = ed(rng), e1 = ed(rng);
      const auto w = sample_subgradients(cat[i], x, e0, 3, g);
      const auto v = sample_subgradients(cat[j], x, e1, 3, g);
      if (w.empty() || v.empty()) continue;
      const Verdict r = forward_sum_inclusion(cat[i], cat[i].rho(), e0, w.back(), cat[j], cat[j].rho(), e1,
                                              v.front(), x, g);
      INFO(cat[i].name() << "+" << cat[j].name() << " x=" << x[0]);
      CHECK(r.holds());
      ++checked;
    }
  }
  CHECK(checked >= 20);
}

TEST_CASE("property: decomposition budgets and memberships") {
  const GridDomain g = standard_grid(1);
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> xd(-2.5, 2.5), ed(0.001, 0.2);
  const auto cat = catalog_samples();
  for (std::size_t i = 0; i < cat.size(); ++i) {
    for (std::size_t j = i; j < cat.size(); j += 3) {
      const FunctionSpec sum = FunctionSpec::sum(cat[i], cat[j]);
      const Vector x{xd(rng)};
      const double eps = ed(rng);
      const auto us = sample_subgradients(sum, x, eps, 2, g);
      REQUIRE(!us.empty());
      const SumDecomposition d = decompose_subgradient(cat[i], cat[i].rho(), cat[j], cat[j].rho(), x, us.back(), eps, g);
      INFO(cat[i].name() << "+" << cat[j].name() << " x=" << x[0] << " u=" << us.back()[0]);
      CHECK(d.eps0 >= 0.0);
      CHECK(d.eps1 >= 0.0);
      CHECK(d.eps0 + d.eps1 <= eps + 1e-9);
      CHECK(d.member0.holds());
      CHECK(d.member1.holds());
      CHECK(d.verdict.holds());
    }
  }
}

TEST_CASE("smooth shift by the gradient of a convex quadratic") {
  const GridDomain g = standard_grid(1);
  // (x^2)/2 + |x| at x = 1: u = 3 lies in the 0.5-subdifferential of the sum.
  CHECK(smooth_shift_inclusion(quadratic(1.0, 0.0), abs_fn(), 0.0, Vector{1.0}, Vector{3.0}, 0.5, g).holds());
  // Without the L0/2 curvature allowance the shifted vector 2 is not a member of d^0.5 |x|(1).
  CHECK(membership_grid(abs_fn(), {Vector{1.0}, Vector{2.0}, 0.5, 0.0}, g).fails());
  CHECK(membership_grid(abs_fn(), {Vector{1.0}, Vector{2.0}, 0.5, 0.5}, g).holds());
  CHECK_THROWS_AS(smooth_shift_inclusion(negquad(1.0), abs_fn(), 0.0, Vector{1.0}, Vector{0.0}, 0.5, g),
                  PreconditionError);
  CHECK_THROWS_AS(smooth_shift_inclusion(quadratic(1.0, 0.0), mcp(1.0, 2.0), 0.0, Vector{1.0}, Vector{0.0}, 0.5, g),
                  ArgumentError);
}
