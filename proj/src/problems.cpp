#include "mgda/problems.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string_view>

namespace mgda {
namespace {

double Clamp(double v) { return std::max(0.0, std::abs(v) - ClampedNormLandscape::kClamp); }

// Derivative of Clamp(v)^2. At the kink |v| = 5 this is 0.
double ClampGrad(double v) {
  const double c = Clamp(v);
  if (c == 0.0) return 0.0;
  return v > 0.0 ? 2.0 * c : -2.0 * c;
}

void CheckDim(std::span<const double> x, std::size_t m) {
  if (x.size() != m) throw std::invalid_argument("point has wrong dimension");
}

}  // namespace

ClampedNormLandscape::ClampedNormLandscape(std::size_t m, std::size_t n) : m_(m), n_(n) {
  if (n == 0 || m == 0) throw std::invalid_argument("clamped landscape needs n >= 1 and m >= 1");
  if (n > m) throw std::invalid_argument("clamped landscape needs n <= m");
}

Vector ClampedNormLandscape::Eval(std::span<const double> x) const {
  CheckDim(x, m_);
  const double total = SquaredNorm(x);
  Vector f(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    const double c = Clamp(x[i]);
    f[i] = total - x[i] * x[i] + c * c;
  }
  return f;
}

GradientSet ClampedNormLandscape::Grad(std::span<const double> x) const {
  CheckDim(x, m_);
  GradientSet g(n_, Vector(m_));
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < m_; ++j) g[i][j] = 2.0 * x[j];
    g[i][i] = ClampGrad(x[i]);
  }
  return g;
}

double ClampedNormLandscape::ParetoSetDistance(std::span<const double> x) const {
  CheckDim(x, m_);
  if (n_ >= 2) return Norm(x);
  // Single objective: minimizers are |x^0| <= 5 with the remaining coordinates 0.
  double s = Clamp(x[0]) * Clamp(x[0]);
  for (std::size_t j = 1; j < m_; ++j) s += x[j] * x[j];
  return std::sqrt(s);
}

QuadraticPair::QuadraticPair(std::size_t m) : m_(m) {
  if (m == 0) throw std::invalid_argument("quadratic pair needs m >= 1");
}

Vector QuadraticPair::Eval(std::span<const double> x) const {
  CheckDim(x, m_);
  double a = 0.0, b = 0.0;
  for (double v : x) {
    a += (v - 1.0) * (v - 1.0);
    b += (v + 1.0) * (v + 1.0);
  }
  return {a, b};
}

GradientSet QuadraticPair::Grad(std::span<const double> x) const {
  CheckDim(x, m_);
  GradientSet g(2, Vector(m_));
  for (std::size_t j = 0; j < m_; ++j) {
    g[0][j] = 2.0 * (x[j] - 1.0);
    g[1][j] = 2.0 * (x[j] + 1.0);
  }
  return g;
}

double QuadraticPair::ParetoSetDistance(std::span<const double> x) const {
  CheckDim(x, m_);
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(m_);
  const double a = std::clamp(mean, -1.0, 1.0);
  double s = 0.0;
  for (double v : x) s += (v - a) * (v - a);
  return std::sqrt(s);
}

WithDummyObjective::WithDummyObjective(ProblemPtr base, double c) : base_(std::move(base)), c_(c) {
  if (!base_) throw std::invalid_argument("dummy objective needs a base problem");
}

Vector WithDummyObjective::Eval(std::span<const double> x) const {
  Vector f = base_->Eval(x);
  f.push_back(c_);
  return f;
}

GradientSet WithDummyObjective::Grad(std::span<const double> x) const {
  GradientSet g = base_->Grad(x);
  g.emplace_back(base_->dim(), 0.0);
  return g;
}

Vector WithDummyObjective::IndividualMinima() const {
  Vector v = base_->IndividualMinima();
  v.push_back(c_);
  return v;
}

ProblemPtr MakeClampedNormLandscape(std::size_t m, std::size_t n) {
  return std::make_shared<ClampedNormLandscape>(m, n);
}

ProblemPtr MakeQuadraticPair(std::size_t m) { return std::make_shared<QuadraticPair>(m); }

ProblemPtr WithDummy(ProblemPtr base, double c) {
  return std::make_shared<WithDummyObjective>(std::move(base), c);
}

ProblemPtr MakeProblemByName(const std::string& name, std::size_t m) {
  constexpr std::string_view kSuffix = "+dummy";
  if (name.size() > kSuffix.size() && name.ends_with(kSuffix)) {
    return WithDummy(MakeProblemByName(name.substr(0, name.size() - kSuffix.size()), m), 1.0);
  }
  if (name == "clamped_norm") return MakeClampedNormLandscape(m, 2);
  if (name == "quadratic_pair") return MakeQuadraticPair(m);
  throw std::invalid_argument("unknown problem: " + name);
}

double FiniteDiffCheck(const Problem& p, std::span<const double> x, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("finite difference step must be positive");
  const GradientSet g = p.Grad(x);
  Vector probe(x.begin(), x.end());
  double worst = 0.0;
  for (std::size_t j = 0; j < p.dim(); ++j) {
    probe[j] = x[j] + h;
    const Vector up = p.Eval(probe);
    probe[j] = x[j] - h;
    const Vector down = p.Eval(probe);
    probe[j] = x[j];
    for (std::size_t i = 0; i < p.num_objectives(); ++i) {
      const double fd = (up[i] - down[i]) / (2.0 * h);
      worst = std::max(worst, std::abs(fd - g[i][j]) / std::max(1.0, std::abs(g[i][j])));
    }
  }
  return worst;
}

double ConvexityViolation(const Problem& p, std::mt19937_64& rng, int samples, double radius) {
  std::uniform_real_distribution<double> coord(-radius, radius);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::size_t m = p.dim();
  Vector x(m), y(m), z(m);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    for (std::size_t j = 0; j < m; ++j) {
      x[j] = coord(rng);
      y[j] = coord(rng);
    }
    const double t = unit(rng);
    for (std::size_t j = 0; j < m; ++j) z[j] = t * x[j] + (1.0 - t) * y[j];
    const Vector fx = p.Eval(x), fy = p.Eval(y), fz = p.Eval(z);
    for (std::size_t i = 0; i < fz.size(); ++i)
      worst = std::max(worst, fz[i] - (t * fx[i] + (1.0 - t) * fy[i]));
  }
  return worst;
}

}  // namespace mgda
