#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "wcprox/catalog.hpp"

using namespace wcprox;
using doctest::Approx;

namespace {

oracle::Scalar scalar_of(const FunctionSpec& f) { return oracle::phi(f.name(), f.params()); }

}  // namespace

TEST_CASE("catalog values match restated formulas") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> t(-6, 6);
  for (const FunctionSpec& f : catalog_samples()) {
    const auto phi = scalar_of(f);
    for (int k = 0; k < 200; ++k) {
      const double a = t(rng), b = t(rng);
      INFO(f.name() << " at " << a << "," << b);
      CHECK(f(Vector{a, b}) == Approx(phi(a) + phi(b)).epsilon(1e-13));
    }
  }
}

TEST_CASE("exact proxes agree with brute-force minimisation") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> t(-5, 5);
  for (const FunctionSpec& f : catalog_samples()) {
    if (!f.has_exact_prox()) continue;
    const double alpha = 0.5 / std::max(f.rho(), 0.5);  // 1/alpha > rho
    const auto phi = scalar_of(f);
    for (int k = 0; k < 40; ++k) {
      const double y = t(rng);
      INFO(f.name() << " y=" << y);
      CHECK(f.exact_prox(alpha, Vector{y})[0] == Approx(oracle::brute_prox(phi, alpha, y)).epsilon(1e-6));
    }
  }
  CHECK_THROWS_AS(negquad(1.0).exact_prox(1.0, Vector{1.0}), PreconditionError);
}

TEST_CASE("analytic rho-conjugates agree with brute-force sups") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> t(-3, 3);
  for (const FunctionSpec& f : catalog_samples()) {
    REQUIRE(f.has_analytic_conjugate());
    const auto phi = scalar_of(f);
    for (double extra : {0.0, 0.5, 2.0}) {
      const double rho = f.rho() + extra;
      for (int k = 0; k < 15; ++k) {
        const double u = t(rng);
        const double a = f.analytic_conjugate(rho, Vector{u});
        if (std::isinf(a)) {
          // Unbounded sups grow with the search window.
          CHECK(oracle::brute_conjugate(phi, rho, u, -200, 200) > oracle::brute_conjugate(phi, rho, u, -50, 50) + 1.0);
          continue;
        }
        INFO(f.name() << " rho=" << rho << " u=" << u);
        CHECK(a == Approx(oracle::brute_conjugate(phi, rho, u)).epsilon(1e-8).scale(1.0));
      }
    }
  }
}

TEST_CASE("minorants and lower bounds hold on the test grid") {
  const GridDomain g = GridDomain::cube(2, -5, 5, 0.1);
  for (const FunctionSpec& f : catalog_samples()) {
    const QuadraticMinorant m = f.minorant(2);
    const double lb = f.lower_bound(2);
    g.for_each([&](std::size_t, const Vector& x) {
      CHECK(f(x) >= m(x) - 1e-12);
      CHECK(f(x) >= lb - 1e-12);
    });
  }
  CHECK(cosquad().lower_bound(1) == Approx(oracle::kCosquadMin).epsilon(1e-12));
}

TEST_CASE("declared gradient Lipschitz constants bound finite-difference variation") {
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> t(-5, 5);
  for (const FunctionSpec& f : catalog_samples()) {
    const auto L = f.lipschitz_grad();
    if (!L) continue;
    const auto phi = scalar_of(f);
    auto fd = [&](double x) { return (phi(x + 1e-6) - phi(x - 1e-6)) / 2e-6; };
    for (int k = 0; k < 200; ++k) {
      const double a = t(rng), b = t(rng);
      INFO(f.name());
      CHECK(std::abs(fd(a) - fd(b)) <= *L * std::abs(a - b) + 1e-6);
    }
  }
}

TEST_CASE("derivative boxes contain one-sided difference quotients") {
  std::mt19937_64 rng(15);
  std::uniform_real_distribution<double> t(-5, 5);
  for (const FunctionSpec& f : catalog_samples()) {
    const auto phi = scalar_of(f);
    for (int k = 0; k < 100; ++k) {
      const double x = t(rng);
      const Interval iv = f.derivative_box(Vector{x})[0];
      CHECK((phi(x + 1e-7) - phi(x)) / 1e-7 == Approx(iv.hi).epsilon(1e-5).scale(1.0));
      CHECK((phi(x) - phi(x - 1e-7)) / 1e-7 == Approx(iv.lo).epsilon(1e-5).scale(1.0));
    }
  }
  const Interval at0 = abs_fn().derivative_box(Vector{0.0})[0];
  CHECK(at0.lo == -1.0);
  CHECK(at0.hi == 1.0);
  CHECK_THROWS_AS(abs_fn().gradient(Vector{0.0}), UnsupportedError);
}

TEST_CASE("catalog lookup by name and parameter validation") {
  CHECK(make_function("mcp", {{"lambda", 2.0}, {"gamma", 4.0}}).rho() == Approx(0.25));
  CHECK(make_function("scad", {{"gamma", 3.0}}).rho() == Approx(0.5));
  CHECK_THROWS_AS(make_function("lp", {}), ArgumentError);
  CHECK_THROWS_AS(make_function("abs", {{"a", 1.0}}), ArgumentError);
  CHECK_THROWS_AS(make_function("scad", {{"gamma", 1.0}}), ArgumentError);
  CHECK_THROWS_AS(make_function("huber", {{"delta", 0.0}}), ArgumentError);
  const FunctionSpec s = make_function(FunctionDesc{"sum", {}, {{"abs", {}, {}}, {"negquad", {{"a", 0.5}}, {}}}});
  CHECK(s.rho() == Approx(0.5));
  CHECK(s(Vector{2.0}) == Approx(1.0));
  CHECK_FALSE(s.has_exact_prox());
  CHECK_FALSE(s.has_analytic_conjugate());
}

TEST_CASE("sums add moduli and convexification removes them") {
  const FunctionSpec s = FunctionSpec::sum(mcp(1.0, 2.0), cosquad());
  CHECK(s.rho() == Approx(1.0));
  const GridDomain g = GridDomain::cube(1, -4, 4, 0.05);
  CHECK(check_weak_convexity(s, s.rho(), g).holds());
  CHECK(check_weak_convexity(convexified(s, s.rho()), 0.0, g).holds());
  CHECK(FunctionSpec::sum(quadratic(1.0, 0.0), huber(1.0)).lipschitz_grad().value() == Approx(2.0));
  CHECK_FALSE(FunctionSpec::sum(quadratic(1.0, 0.0), abs_fn()).lipschitz_grad().has_value());
}

TEST_CASE("every catalog entry is sharp: modulus minus 0.1 fails on the standard grid") {
  for (const FunctionSpec& f : catalog_samples()) {
    if (f.rho() == 0.0) continue;
    INFO(f.name());
    CHECK(check_weak_convexity(f, f.rho() - 0.1, standard_grid(1)).fails());
  }
}
