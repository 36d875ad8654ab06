#ifndef MGDA_PROBLEM_HPP_
#define MGDA_PROBLEM_HPP_

#include <cstddef>
#include <span>

#include "mgda/linalg.hpp"
#include "mgda/min_norm.hpp"

namespace mgda {

/// Vector-valued objective F: R^m -> R^n with analytic gradients and a
/// common Lipschitz constant L for every gradient.
class Problem {
 public:
  virtual ~Problem() = default;

  virtual std::size_t num_objectives() const = 0;
  virtual std::size_t dim() const = 0;
  virtual double smoothness() const = 0;

  virtual Vector Eval(std::span<const double> x) const = 0;
  virtual GradientSet Grad(std::span<const double> x) const = 0;
};

}  // namespace mgda

#endif  // MGDA_PROBLEM_HPP_
