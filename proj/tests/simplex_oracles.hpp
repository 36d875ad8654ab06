#ifndef MGDA_TESTS_SIMPLEX_ORACLES_HPP_
#define MGDA_TESTS_SIMPLEX_ORACLES_HPP_

// Independent reference solvers for the min-norm problem. They share no code
// with the library solver.

#include <Eigen/Dense>
#include <algorithm>
#include <limits>
#include <random>
#include <vector>

namespace mgda::testing {

inline double HullSquaredNorm(const std::vector<std::vector<double>>& g, const std::vector<double>& w) {
  const std::size_t m = g.front().size();
  double s = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    double v = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) v += w[i] * g[i][j];
    s += v * v;
  }
  return s;
}

// Minimum of ||sum w_i g_i||^2 over `samples` points drawn uniformly from the
// simplex (normalized exponentials), plus the k vertices.
inline double SampledSimplexMin(const std::vector<std::vector<double>>& g, int samples,
                                std::mt19937_64& rng) {
  const std::size_t k = g.size();
  std::exponential_distribution<double> expo(1.0);
  double best = std::numeric_limits<double>::infinity();
  std::vector<double> w(k);
  for (std::size_t v = 0; v < k; ++v) {
    std::fill(w.begin(), w.end(), 0.0);
    w[v] = 1.0;
    best = std::min(best, HullSquaredNorm(g, w));
  }
  for (int s = 0; s < samples; ++s) {
    double total = 0.0;
    for (auto& x : w) total += (x = expo(rng));
    for (auto& x : w) x /= total;
    best = std::min(best, HullSquaredNorm(g, w));
  }
  return best;
}

// Exact minimum by enumerating every face of the simplex: for each non-empty
// subset solve the equality-constrained KKT system and keep feasible points.
inline double FaceEnumerationMin(const std::vector<std::vector<double>>& g) {
  const std::size_t k = g.size();
  const std::size_t m = g.front().size();
  double best = std::numeric_limits<double>::infinity();
  for (unsigned mask = 1; mask < (1u << k); ++mask) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < k; ++i)
      if (mask & (1u << i)) idx.push_back(i);
    const auto r = static_cast<Eigen::Index>(idx.size());
    Eigen::MatrixXd G(static_cast<Eigen::Index>(m), r);
    for (Eigen::Index c = 0; c < r; ++c)
      for (std::size_t j = 0; j < m; ++j) G(static_cast<Eigen::Index>(j), c) = g[idx[c]][j];
    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(r + 1, r + 1);
    kkt.topLeftCorner(r, r) = G.transpose() * G;
    kkt.block(0, r, r, 1).setOnes();
    kkt.block(r, 0, 1, r).setOnes();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(r + 1);
    rhs(r) = 1.0;
    const Eigen::VectorXd sol = kkt.completeOrthogonalDecomposition().solve(rhs);
    const Eigen::VectorXd lam = sol.head(r);
    if (std::abs(lam.sum() - 1.0) > 1e-9 || lam.minCoeff() < -1e-12) continue;
    best = std::min(best, (G * lam).squaredNorm());
  }
  return best;
}

}  // namespace mgda::testing

#endif  // MGDA_TESTS_SIMPLEX_ORACLES_HPP_
