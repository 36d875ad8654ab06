#ifndef MGDA_LINALG_HPP_
#define MGDA_LINALG_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace mgda {

using Vector = std::vector<double>;

inline double Dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("Dot: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double SquaredNorm(std::span<const double> a) { return Dot(a, a); }

inline double Norm(std::span<const double> a) { return std::sqrt(SquaredNorm(a)); }

// y += alpha * x
inline void Axpy(double alpha, std::span<const double> x, std::span<double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("Axpy: dimension mismatch");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

inline Vector Scaled(std::span<const double> x, double alpha) {
  Vector out(x.begin(), x.end());
  for (double& v : out) v *= alpha;
  return out;
}

inline Vector Sub(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("Sub: dimension mismatch");
  Vector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

inline bool AllFinite(std::span<const double> a) {
  for (double v : a)
    if (!std::isfinite(v)) return false;
  return true;
}

inline double MaxAbsDiff(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("MaxAbsDiff: dimension mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace mgda

#endif  // MGDA_LINALG_HPP_
