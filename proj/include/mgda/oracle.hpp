#ifndef MGDA_ORACLE_HPP_
#define MGDA_ORACLE_HPP_

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mgda/descent.hpp"
#include "mgda/problem.hpp"

namespace mgda {

inline constexpr std::size_t kMaxGridPoints = 10'000'000;
/// Componentwise slack used by every dominance comparison.
inline constexpr double kDominanceSlack = 1e-9;

/// Axis-aligned tensor grid.
struct GridSpec {
  Vector lower;
  Vector upper;
  int points_per_axis = 401;

  static GridSpec Cube(std::size_t m, double lo, double hi, int points_per_axis);

  /// Throws std::invalid_argument on bad bounds, fewer than 2 points per
  /// axis, or more than kMaxGridPoints points in total.
  void Validate() const;
  std::size_t size() const;
  Vector Point(std::size_t index) const;
};

/// F(y) <= F(x) componentwise (with slack) and F(y) != F(x).
bool Dominates(std::span<const double> fy, std::span<const double> fx);
/// F(y) < F(x) in every component by more than the slack.
bool StrictlyDominates(std::span<const double> fy, std::span<const double> fx);

struct ParetoVerdict {
  Vector f;
  bool is_weak = false;
  bool is_strong = false;
  bool is_eps = false;
  double stationarity_residual = 0.0;
  std::optional<Vector> weak_witness;    // strictly dominating grid point
  std::optional<Vector> strong_witness;  // dominating grid point
};

/// Brute-force Pareto classification against a dense grid. The objective
/// values of every grid point are evaluated once at construction; the
/// grid's non-dominated front is computed on first use and cached.
class GridOracle {
 public:
  GridOracle(const Problem& prob, GridSpec grid);

  ParetoVerdict Classify(std::span<const double> x, double varepsilon) const;

  /// Indices of grid points no other grid point dominates.
  const std::vector<std::size_t>& StrongFront() const;

  const GridSpec& grid() const { return grid_; }
  std::span<const double> ValuesAt(std::size_t index) const;

 private:
  const Problem& prob_;
  GridSpec grid_;
  std::size_t n_;
  std::vector<double> values_;  // row-major, n_ per grid point
  mutable std::optional<std::vector<std::size_t>> front_;
};

ParetoVerdict Classify(std::span<const double> x, const Problem& prob, const GridSpec& grid,
                       double varepsilon);

/// Norm of the min-norm element of all gradients at x; zero iff x is
/// Pareto stationary.
double StationarityResidual(std::span<const double> x, const Problem& prob,
                            double tol = kSyntheticTol);

/// Sufficient condition for strong optimality under convexity: the
/// gradients with norm > eps admit a convex combination of norm <= tol.
/// False when no gradient exceeds eps.
bool Lemma2Certificate(std::span<const Vector> grads, FilterThreshold eps, double tol);

struct VerdictRow {
  std::string label;
  Vector x;
  ParetoVerdict verdict;
};

/// Columns: label, x0.., f0.., is_weak, is_strong, is_eps, residual,
/// witness0.. (strong witness, empty when strong).
void WriteVerdictCsv(std::ostream& out, const std::vector<VerdictRow>& rows);

}  // namespace mgda

#endif  // MGDA_ORACLE_HPP_
