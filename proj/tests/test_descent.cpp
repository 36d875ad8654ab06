#include <cmath>
#include <sstream>

#include "doctest.h"
#include "mgda/descent.hpp"
#include "mgda/oracle.hpp"
#include "mgda/problems.hpp"
#include "property.hpp"

using mgda::Algorithm;
using mgda::DescentConfig;
using mgda::FilterThreshold;
using mgda::GradientSet;
using mgda::StepRule;
using mgda::Termination;
using mgda::Vector;

namespace {

double SumF(const Vector& f) {
  double s = 0.0;
  for (double v : f) s += v;
  return s;
}

double MinGradNorm(const mgda::Problem& p, const Vector& x) {
  double best = INFINITY;
  for (const auto& g : p.Grad(x)) best = std::min(best, mgda::Norm(g));
  return best;
}

}  // namespace

TEST_CASE("filter keeps norms strictly above the threshold") {
  const FilterThreshold eps(0.05);
  CHECK(mgda::FilterActive(GradientSet{{0.0, 0.0}, {3.0, 4.0}}, eps) == mgda::ActiveSet{1});
  CHECK(mgda::FilterActive(GradientSet{{0.03, 0.04}, {0.6, 0.8}}, eps) == mgda::ActiveSet{1});
  CHECK(mgda::FilterActive(GradientSet{{1.0, 0.0}, {0.0, 1.0}}, eps) == mgda::ActiveSet{0, 1});
  CHECK_THROWS_AS(FilterThreshold(0.0), std::invalid_argument);
  CHECK_THROWS_AS(FilterThreshold(-1.0), std::invalid_argument);
}

TEST_CASE("theorem-1 step") {
  CHECK(mgda::Theorem1Step(Vector{0.0, 0.0}, GradientSet{}, 2, 2, 1.0) == 0.0);
  CHECK(mgda::Theorem1Step(Vector{1.0, 2.0}, GradientSet{}, 3, 3, 4.0) == doctest::Approx(0.25));
  // numerator 1 * 1 + <(-2, 0), (1, 0)> = -1 -> clipped to 0
  CHECK(mgda::Theorem1Step(Vector{1.0, 0.0}, GradientSet{{-2.0, 0.0}}, 1, 2, 1.0) == 0.0);
  // numerator 1 + 0.5 = 1.5, denominator 2 * 1 * 1
  CHECK(mgda::Theorem1Step(Vector{1.0, 0.0}, GradientSet{{0.5, 0.3}}, 1, 2, 1.0) ==
        doctest::Approx(0.75));
}

TEST_CASE("epsilon from the target accuracy") {
  CHECK(mgda::EpsilonFor(0.02, 1.0).value() == doctest::Approx(0.2));
  CHECK(mgda::EpsilonFor(0.0625, 2.0).value() == doctest::Approx(0.5));
  CHECK_THROWS_AS(mgda::EpsilonFor(0.0, 1.0), std::invalid_argument);

  // Grid scan: small gradient norm on an objective bounds its suboptimality.
  const auto p = mgda::MakeQuadraticPair(2);
  const double varepsilon = 0.02;
  const double eps = mgda::EpsilonFor(varepsilon, p->smoothness()).value();
  int hits = 0;
  for (double a = -2.0; a <= 2.0; a += 0.005) {
    for (double b = -2.0; b <= 2.0; b += 0.005) {
      const Vector x{a, b};
      const auto g = p->Grad(x);
      const Vector f = p->Eval(x);
      for (std::size_t i = 0; i < 2; ++i) {
        if (mgda::Norm(g[i]) < eps) {
          ++hits;
          CHECK(f[i] <= varepsilon + 1e-12);
        }
      }
    }
  }
  CHECK(hits > 0);
}

TEST_CASE("mgda step") {
  const auto q = mgda::MakeQuadraticPair(3);
  const auto at_mid = mgda::MgdaStep(Vector(3, 0.0), *q, StepRule::Constant(0.5));
  CHECK(at_mid.stationary);
  CHECK(at_mid.x == Vector(3, 0.0));

  const auto dummy = mgda::WithDummy(mgda::MakeQuadraticPair(2), 1.0);
  const auto stuck = mgda::MgdaStep(Vector{2.5, -0.3}, *dummy, StepRule::Constant(0.5));
  CHECK(stuck.stationary);
  CHECK(stuck.x == Vector{2.5, -0.3});

  // x = (3, 3): gradients (4, 4) and (8, 8), min-norm weight 1 on the first?
  // No: they are parallel, so the min-norm element is the shorter one, (4, 4).
  const auto q2 = mgda::MakeQuadraticPair(2);
  const auto step = mgda::MgdaStep(Vector{3.0, 3.0}, *q2, StepRule::Constant(0.25));
  const auto g = q2->Grad(Vector{3.0, 3.0});
  const Vector d_oracle = mgda::MinNormPair(g[0], g[1]).direction;
  CHECK(step.direction[0] == doctest::Approx(d_oracle[0]));
  CHECK(step.x[0] == doctest::Approx(3.0 - 0.25 * d_oracle[0]));
  CHECK(step.x[0] == doctest::Approx(2.0));
  CHECK(step.x[1] == doctest::Approx(2.0));
}

TEST_CASE("mgda++ step") {
  const auto p = mgda::MakeClampedNormLandscape(2, 2);
  const auto g = p->Grad(Vector{0.0, 7.0});
  CHECK(g[0] == Vector{0.0, 14.0});
  CHECK(g[1] == Vector{0.0, 4.0});
  const auto out = mgda::MgdaPPStep(Vector{0.0, 7.0}, *p, FilterThreshold(0.05), StepRule::Theorem1());
  CHECK(out.active == mgda::ActiveSet{0, 1});
  CHECK(out.x[1] < 7.0);

  const auto q = mgda::MakeQuadraticPair(2);
  const auto small = mgda::MgdaPPStep(Vector{0.0, 0.0}, *q, FilterThreshold(10.0), StepRule::Theorem1());
  CHECK(small.all_small);
  CHECK(small.x == Vector{0.0, 0.0});

  // No gradient dropped: theorem-1 gives 1/L, i.e. constant-step MGDA.
  const Vector x{2.3, -0.4};
  const auto pp = mgda::MgdaPPStep(x, *q, FilterThreshold(0.05), StepRule::Theorem1());
  const auto plain = mgda::MgdaStep(x, *q, StepRule::Constant(1.0 / q->smoothness()));
  CHECK(pp.step == doctest::Approx(0.5));
  CHECK(mgda::MaxAbsDiff(pp.x, plain.x) <= 1e-12);
}

TEST_CASE("clamped landscape: mgda stalls on a plateau, mgda++ keeps going") {
  const auto p = mgda::MakeClampedNormLandscape(2, 2);
  const mgda::GridOracle oracle(*p, mgda::GridSpec::Cube(2, -10.0, 10.0, 401));
  const Vector x0{0.0, 7.0};

  DescentConfig mgda_cfg;
  mgda_cfg.algorithm = Algorithm::kMgda;
  const auto stalled = mgda::Run(*p, x0, mgda_cfg);
  CHECK(stalled.termination == Termination::kStationaryDirection);
  const auto v1 = oracle.Classify(stalled.final_point(), 1e-3);
  CHECK(v1.is_weak);
  CHECK_FALSE(v1.is_strong);

  DescentConfig pp_cfg;
  pp_cfg.epsilon = mgda::EpsilonFor(1e-3, p->smoothness()).value();
  const auto moved = mgda::Run(*p, x0, pp_cfg);
  CHECK(moved.termination == Termination::kAllGradientsSmall);
  const auto v2 = oracle.Classify(moved.final_point(), 1e-3);
  CHECK((v2.is_strong || v2.is_eps));
  CHECK(std::abs(moved.final_point()[1]) < 0.1);
}

TEST_CASE("run on the quadratic pair") {
  const auto q = mgda::MakeQuadraticPair(2);
  DescentConfig pp;
  pp.epsilon = 0.01;
  const auto trace = mgda::Run(*q, Vector{3.0, 3.0}, pp);
  const Vector& xf = trace.final_point();
  CHECK(q->ParetoSetDistance(xf) <= 1e-3);
  CHECK(MinGradNorm(*q, xf) > 0.005);

  DescentConfig plain;
  plain.algorithm = Algorithm::kMgda;
  const auto stop = mgda::Run(*q, Vector{2.0, 1.5}, plain);
  CHECK(stop.termination == Termination::kStationaryDirection);
  CHECK(MinGradNorm(*q, stop.final_point()) <= 1e-8);
  CHECK(stop.rows.size() == 2);

  DescentConfig none = pp;
  none.max_iters = 0;
  const auto only = mgda::Run(*q, Vector{3.0, 3.0}, none);
  CHECK(only.rows.size() == 1);
  CHECK(only.termination == Termination::kMaxIters);
  CHECK(only.rows[0].x == Vector{3.0, 3.0});
}

TEST_CASE("trace csv") {
  const auto q = mgda::MakeQuadraticPair(2);
  DescentConfig cfg;
  const auto trace = mgda::Run(*q, Vector{3.0, -1.0}, cfg);
  std::ostringstream out;
  mgda::WriteTraceCsv(out, trace);
  std::istringstream in(out.str());
  std::string header;
  std::getline(in, header);
  CHECK(header == "iter,x0,x1,f0,f1,active_mask,t,d_norm");
  std::size_t lines = 0;
  for (std::string line; std::getline(in, line);) ++lines;
  CHECK(lines == trace.rows.size());
  CHECK(out.str().find('\r') == std::string::npos);
}

namespace {

std::vector<mgda::ProblemPtr> SyntheticSuite() {
  return {mgda::MakeClampedNormLandscape(2, 2), mgda::MakeQuadraticPair(2),
          mgda::MakeQuadraticPair(5), mgda::WithDummy(mgda::MakeQuadraticPair(2), 1.0),
          mgda::WithDummy(mgda::MakeClampedNormLandscape(2, 2), 0.0),
          mgda::MakeClampedNormLandscape(4, 4)};
}

}  // namespace

TEST_CASE("property: theorem-1 steps never increase the objective sum") {
  const auto suite = SyntheticSuite();
  mgda::testing::ForAll(31, mgda::testing::kPropertyCases, [&](std::mt19937_64& rng, int c) {
    const auto& p = suite[static_cast<std::size_t>(c) % suite.size()];
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    Vector x0(p->dim());
    for (auto& v : x0) v = u(rng);
    for (Algorithm algo : {Algorithm::kMgda, Algorithm::kMgdaPP}) {
      DescentConfig cfg;
      cfg.algorithm = algo;
      cfg.epsilon = 0.05;
      cfg.max_iters = 2000;
      const auto trace = mgda::Run(*p, x0, cfg);
      for (std::size_t k = 1; k < trace.rows.size(); ++k)
        CHECK(SumF(trace.rows[k].f) <= SumF(trace.rows[k - 1].f) + 1e-9);
    }
  });
}

TEST_CASE("property: mgda++ traces obey the active-set, inequality and termination contracts") {
  const auto suite = SyntheticSuite();
  mgda::testing::ForAll(32, mgda::testing::kPropertyCases, [&](std::mt19937_64& rng, int c) {
    const auto& p = suite[static_cast<std::size_t>(c) % suite.size()];
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    Vector x0(p->dim());
    for (auto& v : x0) v = u(rng);
    DescentConfig cfg;
    cfg.epsilon = 0.05;
    cfg.max_iters = 2000;
    const auto trace = mgda::Run(*p, x0, cfg);
    for (const auto& row : trace.rows) {
      const auto grads = p->Grad(row.x);
      for (std::size_t i = 0; i < grads.size(); ++i) {
        const bool in_set = std::find(row.active.begin(), row.active.end(), i) != row.active.end();
        CHECK(in_set == (mgda::Norm(grads[i]) > cfg.epsilon));
      }
      if (row.active.empty()) continue;
      GradientSet sub;
      for (std::size_t i : row.active) sub.push_back(grads[i]);
      const auto sol = mgda::MinNormElement(sub);
      CHECK(std::abs(std::sqrt(sol.squared_norm) - row.d_norm) <= 1e-9);
      for (const auto& g : sub) CHECK(mgda::Dot(g, sol.direction) >= sol.squared_norm - 1e-10);
    }
    if (trace.termination == Termination::kAllGradientsSmall) {
      CHECK(trace.rows.back().active.empty());
      for (const auto& g : p->Grad(trace.final_point())) CHECK(mgda::Norm(g) <= cfg.epsilon);
    }
  });
}

TEST_CASE("property: a dummy objective freezes mgda and leaves mgda++ unchanged") {
  const std::vector<mgda::ProblemPtr> bases{mgda::MakeClampedNormLandscape(2, 2),
                                            mgda::MakeQuadraticPair(2), mgda::MakeQuadraticPair(4)};
  mgda::testing::ForAll(33, mgda::testing::kPropertyCases, [&](std::mt19937_64& rng, int c) {
    const auto& base = bases[static_cast<std::size_t>(c) % bases.size()];
    const auto aug = mgda::WithDummy(base, std::uniform_real_distribution<double>(-5, 5)(rng));
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    Vector x0(base->dim());
    for (auto& v : x0) v = u(rng);

    DescentConfig plain;
    plain.algorithm = Algorithm::kMgda;
    const auto frozen = mgda::Run(*aug, x0, plain);
    CHECK(frozen.rows.size() == 1);
    CHECK(frozen.final_point() == x0);

    DescentConfig pp;
    pp.step = StepRule::Constant(1.0 / base->smoothness());
    pp.epsilon = 0.05;
    const auto a = mgda::Run(*base, x0, pp);
    const auto b = mgda::Run(*aug, x0, pp);
    REQUIRE(a.rows.size() == b.rows.size());
    for (std::size_t k = 0; k < a.rows.size(); ++k) CHECK(a.rows[k].x == b.rows[k].x);
    CHECK(a.termination == b.termination);
  });
}

TEST_CASE("property: mgda++ stationary endpoints carry a strong-optimality certificate") {
  const auto q = mgda::MakeQuadraticPair(2);
  const mgda::GridOracle oracle(*q, mgda::GridSpec::Cube(2, -2.0, 2.0, 401));
  int certified = 0;
  mgda::testing::ForAll(34, mgda::testing::kPropertyCases, [&](std::mt19937_64& rng, int) {
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    const Vector x0{u(rng), u(rng)};
    DescentConfig cfg;
    cfg.epsilon = 0.01;
    const auto trace = mgda::Run(*q, x0, cfg);
    if (trace.termination != Termination::kStationaryDirection) return;
    ++certified;
    const Vector& xf = trace.final_point();
    CHECK(mgda::Lemma2Certificate(q->Grad(xf), FilterThreshold(cfg.epsilon), 1e-9));
    CHECK(oracle.Classify(xf, 1e-3).is_strong);
  });
  CHECK(certified > 0);
}
