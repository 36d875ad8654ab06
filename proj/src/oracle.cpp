#include "mgda/oracle.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "mgda/csv.hpp"

namespace mgda {

GridSpec GridSpec::Cube(std::size_t m, double lo, double hi, int points_per_axis) {
  return {Vector(m, lo), Vector(m, hi), points_per_axis};
}

void GridSpec::Validate() const {
  if (lower.empty() || lower.size() != upper.size())
    throw std::invalid_argument("grid bounds must be non-empty and equal length");
  if (points_per_axis < 2) throw std::invalid_argument("grid needs >= 2 points per axis");
  for (std::size_t j = 0; j < lower.size(); ++j) {
    if (!std::isfinite(lower[j]) || !std::isfinite(upper[j]) || !(lower[j] < upper[j]))
      throw std::invalid_argument("grid bounds must be finite with lower < upper");
  }
  double total = 1.0;
  for (std::size_t j = 0; j < lower.size(); ++j) total *= points_per_axis;
  if (total > static_cast<double>(kMaxGridPoints))
    throw std::invalid_argument("grid exceeds " + std::to_string(kMaxGridPoints) + " points");
}

std::size_t GridSpec::size() const {
  std::size_t total = 1;
  for (std::size_t j = 0; j < lower.size(); ++j) total *= static_cast<std::size_t>(points_per_axis);
  return total;
}

Vector GridSpec::Point(std::size_t index) const {
  Vector p(lower.size());
  const auto ppa = static_cast<std::size_t>(points_per_axis);
  for (std::size_t j = 0; j < lower.size(); ++j) {
    const std::size_t k = index % ppa;
    index /= ppa;
    p[j] = lower[j] + (upper[j] - lower[j]) * static_cast<double>(k) / static_cast<double>(ppa - 1);
  }
  return p;
}

bool Dominates(std::span<const double> fy, std::span<const double> fx) {
  bool differs = false;
  for (std::size_t i = 0; i < fx.size(); ++i) {
    if (fy[i] > fx[i] + kDominanceSlack) return false;
    if (std::abs(fy[i] - fx[i]) > kDominanceSlack) differs = true;
  }
  return differs;
}

bool StrictlyDominates(std::span<const double> fy, std::span<const double> fx) {
  for (std::size_t i = 0; i < fx.size(); ++i)
    if (!(fy[i] < fx[i] - kDominanceSlack)) return false;
  return true;
}

GridOracle::GridOracle(const Problem& prob, GridSpec grid)
    : prob_(prob), grid_(std::move(grid)), n_(prob.num_objectives()) {
  grid_.Validate();
  if (grid_.lower.size() != prob.dim()) throw std::invalid_argument("grid dimension mismatch");
  const std::size_t total = grid_.size();
  values_.resize(total * n_);
  for (std::size_t idx = 0; idx < total; ++idx) {
    const Vector f = prob.Eval(grid_.Point(idx));
    std::copy(f.begin(), f.end(), values_.begin() + static_cast<std::ptrdiff_t>(idx * n_));
  }
}

std::span<const double> GridOracle::ValuesAt(std::size_t index) const {
  return {values_.data() + index * n_, n_};
}

const std::vector<std::size_t>& GridOracle::StrongFront() const {
  if (front_) return *front_;
  std::vector<std::size_t> front;
  const std::size_t total = grid_.size();
  for (std::size_t idx = 0; idx < total; ++idx) {
    const auto f = ValuesAt(idx);
    bool dominated = false;
    for (std::size_t member : front) {
      if (Dominates(ValuesAt(member), f)) {
        dominated = true;
        break;
      }
    }
    if (dominated) continue;
    std::erase_if(front, [&](std::size_t member) { return Dominates(f, ValuesAt(member)); });
    front.push_back(idx);
  }
  front_ = std::move(front);
  return *front_;
}

ParetoVerdict GridOracle::Classify(std::span<const double> x, double varepsilon) const {
  ParetoVerdict v;
  v.f = prob_.Eval(x);
  v.stationarity_residual = StationarityResidual(x, prob_);
  const std::size_t total = grid_.size();
  for (std::size_t idx = 0; idx < total; ++idx) {
    const auto fy = ValuesAt(idx);
    if (!v.strong_witness && Dominates(fy, v.f)) v.strong_witness = grid_.Point(idx);
    if (!v.weak_witness && StrictlyDominates(fy, v.f)) v.weak_witness = grid_.Point(idx);
    if (v.strong_witness && v.weak_witness) break;
  }
  v.is_strong = !v.strong_witness;
  v.is_weak = !v.weak_witness;
  v.is_eps = v.is_strong;
  if (!v.is_eps) {
    for (std::size_t member : StrongFront()) {
      const auto fy = ValuesAt(member);
      bool within = true;
      for (std::size_t i = 0; i < n_; ++i) {
        if (v.f[i] > fy[i] + varepsilon + kDominanceSlack) {
          within = false;
          break;
        }
      }
      if (within) {
        v.is_eps = true;
        break;
      }
    }
  }
  return v;
}

ParetoVerdict Classify(std::span<const double> x, const Problem& prob, const GridSpec& grid,
                       double varepsilon) {
  return GridOracle(prob, grid).Classify(x, varepsilon);
}

double StationarityResidual(std::span<const double> x, const Problem& prob, double tol) {
  return std::sqrt(MinNormElement(prob.Grad(x), tol).squared_norm);
}

bool Lemma2Certificate(std::span<const Vector> grads, FilterThreshold eps, double tol) {
  const ActiveSet active = FilterActive(grads, eps);
  if (active.empty()) return false;
  GradientSet subset;
  for (std::size_t i : active) subset.push_back(grads[i]);
  return std::sqrt(MinNormElement(subset).squared_norm) <= tol;
}

void WriteVerdictCsv(std::ostream& out, const std::vector<VerdictRow>& rows) {
  if (rows.empty()) throw std::invalid_argument("no verdict rows");
  const std::size_t m = rows.front().x.size();
  const std::size_t n = rows.front().verdict.f.size();
  std::vector<std::string> header{"label"};
  for (std::size_t j = 0; j < m; ++j) header.push_back("x" + std::to_string(j));
  for (std::size_t i = 0; i < n; ++i) header.push_back("f" + std::to_string(i));
  header.insert(header.end(), {"is_weak", "is_strong", "is_eps", "residual"});
  for (std::size_t j = 0; j < m; ++j) header.push_back("witness" + std::to_string(j));
  out << csv::JoinRow(header) << '\n';
  for (const auto& r : rows) {
    std::vector<std::string> cells{r.label};
    for (double v : r.x) cells.push_back(csv::FormatDouble(v));
    for (double v : r.verdict.f) cells.push_back(csv::FormatDouble(v));
    cells.push_back(r.verdict.is_weak ? "1" : "0");
    cells.push_back(r.verdict.is_strong ? "1" : "0");
    cells.push_back(r.verdict.is_eps ? "1" : "0");
    cells.push_back(csv::FormatDouble(r.verdict.stationarity_residual));
    for (std::size_t j = 0; j < m; ++j)
      cells.push_back(r.verdict.strong_witness ? csv::FormatDouble((*r.verdict.strong_witness)[j])
                                               : std::string());
    out << csv::JoinRow(cells) << '\n';
  }
}

}  // namespace mgda
