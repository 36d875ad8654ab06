#include <cmath>

#include "doctest.h"
#include "mgda/min_norm.hpp"
#include "mgda/oracle.hpp"
#include "mgda/problems.hpp"
#include "property.hpp"

using mgda::Vector;

namespace {

// Test-side central differences, independent of FiniteDiffCheck.
double PartialFd(const mgda::Problem& p, Vector x, std::size_t i, std::size_t j, double h) {
  x[j] += h;
  const double up = p.Eval(x)[i];
  x[j] -= 2.0 * h;
  return (up - p.Eval(x)[i]) / (2.0 * h);
}

Vector RandomPoint(std::mt19937_64& rng, std::size_t m, double r) {
  std::uniform_real_distribution<double> u(-r, r);
  Vector x(m);
  for (auto& v : x) v = u(rng);
  return x;
}

}  // namespace

TEST_CASE("clamped norm landscape values and gradients") {
  const auto p = mgda::MakeClampedNormLandscape(2, 2);
  CHECK(p->Eval(Vector{0.0, 0.0}) == Vector{0.0, 0.0});
  const Vector f = p->Eval(Vector{7.0, 0.0});
  CHECK(f[0] == doctest::Approx(4.0));
  CHECK(f[1] == doctest::Approx(49.0));
  const auto g = p->Grad(Vector{7.0, 0.0});
  CHECK(g[0] == Vector{4.0, 0.0});
  CHECK(g[1] == Vector{14.0, 0.0});
  CHECK(PartialFd(*p, {7.0, 0.0}, 0, 0, 1e-6) == doctest::Approx(4.0).epsilon(1e-6));
  CHECK(PartialFd(*p, {7.0, 0.0}, 1, 0, 1e-6) == doctest::Approx(14.0).epsilon(1e-6));
  CHECK(p->smoothness() == 2.0);
}

TEST_CASE("clamped landscape rejects n > m and kink gradient is zero") {
  CHECK_THROWS_AS(mgda::ClampedNormLandscape(1, 2), std::invalid_argument);
  const auto p = mgda::MakeClampedNormLandscape(2, 2);
  CHECK(p->Grad(Vector{5.0, 0.0})[0][0] == 0.0);
  CHECK(p->Grad(Vector{-5.0, 0.0})[0][0] == 0.0);
}

TEST_CASE("clamped landscape has zero-gradient plateaus") {
  const auto p = mgda::MakeClampedNormLandscape(2, 2);
  for (double a = -4.9; a < 4.95; a += 0.35) {
    const auto g = p->Grad(Vector{a, 0.0});
    CHECK(mgda::Norm(g[0]) == 0.0);
    CHECK(p->Eval(Vector{a, 0.0})[0] == 0.0);
  }
}

TEST_CASE("quadratic pair") {
  for (std::size_t m : {1u, 2u, 5u}) {
    const auto p = mgda::MakeQuadraticPair(m);
    const Vector f = p->Eval(Vector(m, 1.0));
    CHECK(f[0] == 0.0);
    CHECK(f[1] == doctest::Approx(4.0 * static_cast<double>(m)));
    const auto g = p->Grad(Vector(m, 0.0));
    CHECK(g[0] == Vector(m, -2.0));
    CHECK(g[1] == Vector(m, 2.0));
    CHECK(mgda::MinNormElement(g).squared_norm == doctest::Approx(0.0));
  }
  const auto p = mgda::MakeQuadraticPair(2);
  const mgda::GridOracle oracle(*p, mgda::GridSpec::Cube(2, -2.0, 2.0, 201));
  CHECK(oracle.Classify(Vector{0.5, 0.5}, 1e-3).is_strong);
  CHECK(p->ParetoSetDistance(Vector{0.5, 0.5}) == 0.0);
  CHECK(p->ParetoSetDistance(Vector{3.0, 3.0}) == doctest::Approx(2.0 * std::sqrt(2.0)));
}

TEST_CASE("dummy objective") {
  const auto base = mgda::MakeQuadraticPair(2);
  const auto aug = mgda::WithDummy(base, 3.5);
  CHECK(aug->num_objectives() == 3);
  const Vector x{0.3, -1.2};
  const Vector f = aug->Eval(x), fb = base->Eval(x);
  CHECK(f == Vector{fb[0], fb[1], 3.5});
  const auto g = aug->Grad(x);
  CHECK(g[2] == Vector{0.0, 0.0});
  CHECK(mgda::MinNormElement(g).squared_norm == 0.0);

  const mgda::GridOracle oracle(*aug, mgda::GridSpec::Cube(2, -2.0, 2.0, 41));
  std::mt19937_64 rng(5);
  for (int i = 0; i < 100; ++i) CHECK(oracle.Classify(RandomPoint(rng, 2, 2.0), 1e-3).is_weak);
}

TEST_CASE("problem lookup by name") {
  CHECK(mgda::MakeProblemByName("quadratic_pair", 3)->dim() == 3);
  CHECK(mgda::MakeProblemByName("clamped_norm", 2)->num_objectives() == 2);
  CHECK(mgda::MakeProblemByName("clamped_norm+dummy", 2)->num_objectives() == 3);
  CHECK_THROWS_AS(mgda::MakeProblemByName("rosenbrock", 2), std::invalid_argument);
}

TEST_CASE("finite-difference check") {
  CHECK(mgda::FiniteDiffCheck(*mgda::MakeQuadraticPair(3), Vector{0.2, -0.7, 1.9}) < 1e-5);
  CHECK(mgda::FiniteDiffCheck(*mgda::MakeClampedNormLandscape(), Vector{7.0, 0.0}) < 1e-5);
  // Constant objective alone: the dummy's analytic gradient is exactly zero.
  const auto aug = mgda::WithDummy(mgda::MakeQuadraticPair(1), -2.0);
  const Vector x{0.4};
  const Vector up{0.4 + 1e-6}, down{0.4 - 1e-6};
  CHECK(std::abs((aug->Eval(up)[2] - aug->Eval(down)[2]) / 2e-6) <= 1e-9);
  CHECK_THROWS_AS(mgda::FiniteDiffCheck(*aug, x, 0.0), std::invalid_argument);
}

TEST_CASE("property: convexity and gradient checks on every synthetic problem") {
  const std::vector<mgda::ProblemPtr> problems{
      mgda::MakeClampedNormLandscape(2, 2), mgda::MakeClampedNormLandscape(4, 3),
      mgda::MakeQuadraticPair(1),           mgda::MakeQuadraticPair(2),
      mgda::MakeQuadraticPair(6),           mgda::WithDummy(mgda::MakeQuadraticPair(2), 1.0),
      mgda::WithDummy(mgda::MakeClampedNormLandscape(2, 2), -4.0)};
  for (const auto& p : problems) {
    INFO(p->name(), " m=", p->dim());
    std::mt19937_64 rng(21);
    CHECK(mgda::ConvexityViolation(*p, rng, 1000, 10.0) <= 1e-9);
    mgda::testing::ForAll(22, mgda::testing::kPropertyCases, [&](std::mt19937_64& r, int) {
      CHECK(mgda::FiniteDiffCheck(*p, RandomPoint(r, p->dim(), 10.0), 1e-6) < 1e-5);
    });
  }
}

TEST_CASE("property: quadratic pair declared set agrees with the grid front") {
  const auto p = mgda::MakeQuadraticPair(2);
  const mgda::GridSpec grid = mgda::GridSpec::Cube(2, -2.0, 2.0, 401);
  const mgda::GridOracle oracle(*p, grid);
  std::vector<bool> on_front(grid.size(), false);
  for (std::size_t idx : oracle.StrongFront()) on_front[idx] = true;
  const double spacing = 4.0 / 400.0;
  std::size_t counted = 0, agree = 0;
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    const Vector x = grid.Point(idx);
    const double dist = p->ParetoSetDistance(x);
    // Boundary cells: within one cell diagonal of the declared set.
    if (dist > 0.0 && dist <= spacing * std::sqrt(2.0)) continue;
    ++counted;
    if ((dist == 0.0) == on_front[idx]) ++agree;
  }
  CHECK(static_cast<double>(agree) >= 0.99 * static_cast<double>(counted));
}
