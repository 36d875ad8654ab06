#ifndef MGDA_MIN_NORM_HPP_
#define MGDA_MIN_NORM_HPP_

#include <span>
#include <vector>

#include "mgda/linalg.hpp"

namespace mgda {

/// A set of k gradient vectors sharing one dimension m.
using GradientSet = std::vector<Vector>;

inline constexpr double kSyntheticTol = 1e-10;
inline constexpr double kRlTol = 1e-8;
inline constexpr int kDefaultMinNormIters = 500;

/// Minimum-norm element of the convex hull of a gradient set.
///
/// `weights` lies on the probability simplex and `direction` is the weighted
/// sum of the inputs. `gap` is the Frank-Wolfe duality gap at exit,
/// ||d||^2 - min_i <g_i, d>, so every input satisfies <g_i, d> >= ||d||^2 - gap.
struct MinNormSolution {
  Vector weights;
  Vector direction;
  double squared_norm = 0.0;
  double gap = 0.0;
  int iterations = 0;
};

/// Throws std::invalid_argument on an empty set, mixed dimensions or
/// non-finite components.
void ValidateGradientSet(std::span<const Vector> grads);

/// Pairwise Frank-Wolfe over the simplex, exact line search, uniform warm
/// start. Stops once the duality gap is <= tol or after max_iter steps.
MinNormSolution MinNormElement(std::span<const Vector> grads, double tol = kSyntheticTol,
                               int max_iter = kDefaultMinNormIters);

/// Closed form for two vectors. Identical inputs return uniform weights.
MinNormSolution MinNormPair(std::span<const double> g1, std::span<const double> g2);

/// Common steepest-descent direction, the negated min-norm element.
Vector SteepestDirection(std::span<const Vector> grads, double tol = kSyntheticTol);

}  // namespace mgda

#endif  // MGDA_MIN_NORM_HPP_
