#include "mgda/min_norm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mgda {
namespace {

Vector Combine(std::span<const Vector> grads, const Vector& weights) {
  Vector d(grads.front().size(), 0.0);
  for (std::size_t i = 0; i < grads.size(); ++i) {
    if (weights[i] != 0.0) Axpy(weights[i], grads[i], d);
  }
  return d;
}

// Minimum-norm point of the affine hull of grads[support], expressed as
// (possibly negative) weights over all k inputs. Affinely dependent vertices
// get weight zero. Returns false when the support is a single point.
bool AffineMinimizer(std::span<const Vector> grads, const std::vector<std::size_t>& support,
                     Vector& mu) {
  if (support.size() < 2) return false;
  const Vector& base = grads[support[0]];
  // Orthonormal basis of span{g_i - g_0} by modified Gram-Schmidt; columns
  // with a negligible residual are dependent and dropped.
  std::vector<Vector> q;
  std::vector<std::size_t> kept;
  std::vector<Vector> cols;
  double scale = 0.0;
  for (std::size_t c = 1; c < support.size(); ++c)
    scale = std::max(scale, Norm(Sub(grads[support[c]], base)));
  if (scale == 0.0) return false;
  for (std::size_t c = 1; c < support.size(); ++c) {
    Vector col = Sub(grads[support[c]], base);
    Vector res = col;
    for (const auto& b : q) Axpy(-Dot(b, res), b, res);
    const double rn = Norm(res);
    if (rn <= 1e-9 * scale) continue;
    q.push_back(Scaled(res, 1.0 / rn));
    kept.push_back(support[c]);
    cols.push_back(std::move(col));
  }
  if (kept.empty()) return false;

  // Normal equations on the independent columns: (C^T C) y = -C^T g0.
  const std::size_t r = kept.size();
  std::vector<Vector> a(r, Vector(r + 1));
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < r; ++j) a[i][j] = Dot(cols[i], cols[j]);
    a[i][r] = -Dot(cols[i], base);
  }
  for (std::size_t c = 0; c < r; ++c) {
    std::size_t piv = c;
    for (std::size_t i = c + 1; i < r; ++i)
      if (std::abs(a[i][c]) > std::abs(a[piv][c])) piv = i;
    if (a[piv][c] == 0.0) return false;
    std::swap(a[c], a[piv]);
    for (std::size_t i = c + 1; i < r; ++i) {
      const double f = a[i][c] / a[c][c];
      for (std::size_t j = c; j <= r; ++j) a[i][j] -= f * a[c][j];
    }
  }
  Vector y(r);
  for (std::size_t c = r; c-- > 0;) {
    double v = a[c][r];
    for (std::size_t j = c + 1; j < r; ++j) v -= a[c][j] * y[j];
    y[c] = v / a[c][c];
  }
  mu.assign(grads.size(), 0.0);
  double head = 1.0;
  for (std::size_t c = 0; c < r; ++c) {
    mu[kept[c]] = y[c];
    head -= y[c];
  }
  mu[support[0]] = head;
  return true;
}

// Wolfe-style minor cycle: walk from the current weights toward the affine
// minimizer of the support, dropping vertices whose weight reaches zero.
void CorrectOnSupport(std::span<const Vector> grads, Vector& weights) {
  const std::size_t k = grads.size();
  for (std::size_t round = 0; round < k; ++round) {
    std::vector<std::size_t> support;
    for (std::size_t i = 0; i < k; ++i)
      if (weights[i] > 0.0) support.push_back(i);
    Vector mu;
    if (!AffineMinimizer(grads, support, mu)) return;

    double theta = 1.0;
    std::size_t blocking = k;
    for (std::size_t i : support) {
      if (mu[i] < 0.0) {
        const double t = weights[i] / (weights[i] - mu[i]);
        if (t < theta) {
          theta = t;
          blocking = i;
        }
      }
    }
    const double before = SquaredNorm(Combine(grads, weights));
    Vector next(k, 0.0);
    for (std::size_t i : support) next[i] = std::max(0.0, weights[i] + theta * (mu[i] - weights[i]));
    if (blocking < k) next[blocking] = 0.0;
    double total = 0.0;
    for (double w : next) total += w;
    for (double& w : next) w /= total;
    if (SquaredNorm(Combine(grads, next)) > before) return;
    weights = std::move(next);
    if (blocking == k) return;
  }
}

}  // namespace

void ValidateGradientSet(std::span<const Vector> grads) {
  if (grads.empty()) throw std::invalid_argument("gradient set is empty");
  const std::size_t m = grads.front().size();
  for (const auto& g : grads) {
    if (g.size() != m) throw std::invalid_argument("gradient set has mixed dimensions");
    if (!AllFinite(g)) throw std::invalid_argument("gradient set has non-finite components");
  }
}

MinNormSolution MinNormElement(std::span<const Vector> grads, double tol, int max_iter) {
  ValidateGradientSet(grads);
  if (!(tol > 0.0)) throw std::invalid_argument("min-norm tolerance must be positive");
  const std::size_t k = grads.size();

  MinNormSolution sol;
  sol.weights.assign(k, 1.0 / static_cast<double>(k));
  std::vector<double> scores(k);

  for (int it = 0;; ++it) {
    sol.direction = Combine(grads, sol.weights);
    sol.squared_norm = SquaredNorm(sol.direction);
    for (std::size_t i = 0; i < k; ++i) scores[i] = Dot(grads[i], sol.direction);

    // Frank-Wolfe vertex: smallest score; away vertex: largest score on the
    // support. Strict comparisons keep the lowest index on ties.
    std::size_t fw = 0;
    for (std::size_t i = 1; i < k; ++i)
      if (scores[i] < scores[fw]) fw = i;
    sol.gap = sol.squared_norm - scores[fw];
    sol.iterations = it;
    if (sol.gap <= tol || it >= max_iter) break;

    std::size_t away = k;
    for (std::size_t i = 0; i < k; ++i) {
      if (sol.weights[i] <= 0.0) continue;
      if (away == k || scores[i] > scores[away]) away = i;
    }
    if (away == fw) break;

    // Shift mass from `away` to `fw`: d(g) = d + g (g_fw - g_away), g in [0, w_away].
    const Vector diff = Sub(grads[fw], grads[away]);
    const double diff_sq = SquaredNorm(diff);
    if (diff_sq == 0.0) break;
    double step = -(scores[fw] - scores[away]) / diff_sq;
    step = std::clamp(step, 0.0, sol.weights[away]);
    if (step == 0.0) break;
    sol.weights[fw] += step;
    sol.weights[away] -= step;
    if (sol.weights[away] < 1e-16) {
      sol.weights[fw] += sol.weights[away];
      sol.weights[away] = 0.0;
    }
    CorrectOnSupport(grads, sol.weights);
  }
  return sol;
}

MinNormSolution MinNormPair(std::span<const double> g1, std::span<const double> g2) {
  if (g1.size() != g2.size()) throw std::invalid_argument("MinNormPair: dimension mismatch");
  const Vector diff = Sub(g1, g2);
  const double diff_sq = SquaredNorm(diff);
  double w1 = 0.5;
  if (diff_sq > 0.0) {
    // minimize ||g2 + w (g1 - g2)||^2 over w in [0, 1]
    w1 = std::clamp(-Dot(g2, diff) / diff_sq, 0.0, 1.0);
  }
  MinNormSolution sol;
  sol.weights = {w1, 1.0 - w1};
  sol.direction.resize(g1.size());
  for (std::size_t i = 0; i < g1.size(); ++i) sol.direction[i] = w1 * g1[i] + (1.0 - w1) * g2[i];
  sol.squared_norm = SquaredNorm(sol.direction);
  sol.gap = sol.squared_norm - std::min(Dot(g1, sol.direction), Dot(g2, sol.direction));
  return sol;
}

Vector SteepestDirection(std::span<const Vector> grads, double tol) {
  return Scaled(MinNormElement(grads, tol).direction, -1.0);
}

}  // namespace mgda
