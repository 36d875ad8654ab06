#ifndef MGDA_PROBLEMS_HPP_
#define MGDA_PROBLEMS_HPP_

#include <memory>
#include <random>
#include <string>

#include "mgda/problem.hpp"

namespace mgda {

/// Convex benchmark problem with a declared Pareto set used for
/// cross-checking the brute-force oracle.
class SyntheticProblem : public Problem {
 public:
  virtual std::string name() const = 0;

  /// Euclidean distance from x to the declared strong Pareto set.
  virtual double ParetoSetDistance(std::span<const double> x) const = 0;

  /// Optimal value of each objective taken on its own.
  virtual Vector IndividualMinima() const = 0;
};

using ProblemPtr = std::shared_ptr<const SyntheticProblem>;

/// F_i(x) = ||y||^2 with y^j = x^j for j != i and y^i = max(0, |x^i| - 5).
/// Each objective is flat along its own coordinate inside the slab |x^i| <= 5.
class ClampedNormLandscape final : public SyntheticProblem {
 public:
  static constexpr double kClamp = 5.0;

  /// Throws std::invalid_argument unless 1 <= n <= m.
  ClampedNormLandscape(std::size_t m, std::size_t n);

  std::size_t num_objectives() const override { return n_; }
  std::size_t dim() const override { return m_; }
  double smoothness() const override { return 2.0; }
  Vector Eval(std::span<const double> x) const override;
  GradientSet Grad(std::span<const double> x) const override;
  std::string name() const override { return "clamped_norm"; }
  double ParetoSetDistance(std::span<const double> x) const override;
  Vector IndividualMinima() const override { return Vector(n_, 0.0); }

 private:
  std::size_t m_;
  std::size_t n_;
};

/// F_1(x) = ||x - 1||^2, F_2(x) = ||x + 1||^2. Pareto set {a * 1 : a in [-1, 1]}.
class QuadraticPair final : public SyntheticProblem {
 public:
  explicit QuadraticPair(std::size_t m);

  std::size_t num_objectives() const override { return 2; }
  std::size_t dim() const override { return m_; }
  double smoothness() const override { return 2.0; }
  Vector Eval(std::span<const double> x) const override;
  GradientSet Grad(std::span<const double> x) const override;
  std::string name() const override { return "quadratic_pair"; }
  double ParetoSetDistance(std::span<const double> x) const override;
  Vector IndividualMinima() const override { return {0.0, 0.0}; }

 private:
  std::size_t m_;
};

/// Appends a constant objective F_{n+1}(x) = c with a zero gradient. Every
/// point of the augmented problem is weakly Pareto optimal.
class WithDummyObjective final : public SyntheticProblem {
 public:
  WithDummyObjective(ProblemPtr base, double c);

  std::size_t num_objectives() const override { return base_->num_objectives() + 1; }
  std::size_t dim() const override { return base_->dim(); }
  double smoothness() const override { return base_->smoothness(); }
  Vector Eval(std::span<const double> x) const override;
  GradientSet Grad(std::span<const double> x) const override;
  std::string name() const override { return base_->name() + "+dummy"; }
  double ParetoSetDistance(std::span<const double> x) const override {
    return base_->ParetoSetDistance(x);
  }
  Vector IndividualMinima() const override;

  const SyntheticProblem& base() const { return *base_; }

 private:
  ProblemPtr base_;
  double c_;
};

ProblemPtr MakeClampedNormLandscape(std::size_t m = 2, std::size_t n = 2);
ProblemPtr MakeQuadraticPair(std::size_t m);
ProblemPtr WithDummy(ProblemPtr base, double c);

/// Looks up "clamped_norm" / "quadratic_pair", optionally suffixed "+dummy".
/// Throws std::invalid_argument for unknown names.
ProblemPtr MakeProblemByName(const std::string& name, std::size_t m);

/// Max over objectives and coordinates of
/// |central difference - analytic| / max(1, |analytic|).
double FiniteDiffCheck(const Problem& p, std::span<const double> x, double h = 1e-6);

/// Largest violation of F_i(t x + (1-t) y) <= t F_i(x) + (1-t) F_i(y) over
/// `samples` random triples drawn from the box [-radius, radius]^m.
double ConvexityViolation(const Problem& p, std::mt19937_64& rng, int samples, double radius);

}  // namespace mgda

#endif  // MGDA_PROBLEMS_HPP_
