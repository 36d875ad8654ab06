#ifndef MGDA_DESCENT_HPP_
#define MGDA_DESCENT_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mgda/min_norm.hpp"
#include "mgda/problem.hpp"

namespace mgda {

/// Gradient-norm threshold below which an objective counts as converged.
class FilterThreshold {
 public:
  /// Throws std::invalid_argument unless eps > 0.
  explicit FilterThreshold(double eps);
  double value() const { return eps_; }

 private:
  double eps_;
};

/// Zero-based indices of the objectives kept in the min-norm subproblem.
using ActiveSet = std::vector<std::size_t>;

ActiveSet FilterActive(std::span<const Vector> grads, FilterThreshold eps);

/// Largest threshold guaranteeing that ||grad F_i|| < eps implies
/// F_i <= F_i^* + varepsilon for convex L-smooth objectives: sqrt(2 L varepsilon).
FilterThreshold EpsilonFor(double varepsilon, double smoothness);

/// Step that keeps sum_i F_i non-increasing for convex L-smooth objectives:
/// max((|S| ||d||^2 + <sum of dropped gradients, d>) / (n L ||d||^2), 0), or 0
/// when d = 0.
double Theorem1Step(std::span<const double> d, std::span<const Vector> dropped_grads,
                    std::size_t active_count, std::size_t n, double smoothness);

enum class Algorithm { kMgda, kMgdaPP };
enum class Termination { kAllGradientsSmall, kStationaryDirection, kMaxIters };

std::string ToString(Algorithm a);
std::string ToString(Termination t);
std::optional<Algorithm> ParseAlgorithm(const std::string& s);

struct StepRule {
  enum class Kind { kConstant, kTheorem1 };
  Kind kind = Kind::kTheorem1;
  double constant = 0.0;

  static StepRule Constant(double t);
  static StepRule Theorem1() { return {}; }
};

struct StepOptions {
  double stall_tol = 1e-9;
  double min_norm_tol = kSyntheticTol;
  /// Rescale every non-zero gradient to unit norm before the min-norm solve.
  /// Only honoured by plain MGDA.
  bool normalize_gradients = false;
};

struct StepOutcome {
  Vector x;  // next point; equals the input when stationary or terminated
  ActiveSet active;
  Vector weights;  // over `active`
  Vector direction;
  double step = 0.0;
  bool stationary = false;       // ||d|| <= stall_tol
  bool all_small = false;        // empty active set (MGDA++ only)
};

/// One MGDA iteration over all n gradients.
StepOutcome MgdaStep(std::span<const double> x, const Problem& prob, const StepRule& rule,
                     const StepOptions& opts = {});

/// One MGDA++ iteration: min-norm over the gradients whose norm exceeds eps.
StepOutcome MgdaPPStep(std::span<const double> x, const Problem& prob, FilterThreshold eps,
                       const StepRule& rule, const StepOptions& opts = {});

struct DescentConfig {
  Algorithm algorithm = Algorithm::kMgdaPP;
  StepRule step = StepRule::Theorem1();
  int max_iters = 10000;
  double epsilon = 0.05;
  StepOptions options;
};

/// One iterate: the point, its objective vector and the decision taken there.
/// The final row records the diagnostics at the last point with t = 0.
struct TraceRow {
  int iter = 0;
  Vector x;
  Vector f;
  ActiveSet active;
  double step = 0.0;
  double d_norm = 0.0;
};

struct DescentTrace {
  std::vector<TraceRow> rows;
  Termination termination = Termination::kMaxIters;

  const Vector& final_point() const { return rows.back().x; }
};

/// Runs MGDA or MGDA++ from x0 until a termination condition fires.
DescentTrace Run(const Problem& prob, std::span<const double> x0, const DescentConfig& config);

std::uint64_t ActiveMask(const ActiveSet& active);

/// Columns: iter, x0..x{m-1}, f0..f{n-1}, active_mask, t, d_norm.
void WriteTraceCsv(std::ostream& out, const DescentTrace& trace);

/// Several runs in one table, prefixed by a zero-based start column.
void WriteTraceCsv(std::ostream& out, std::span<const DescentTrace> traces);

}  // namespace mgda

#endif  // MGDA_DESCENT_HPP_
