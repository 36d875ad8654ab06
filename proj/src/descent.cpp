#include "mgda/descent.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "mgda/csv.hpp"

namespace mgda {

FilterThreshold::FilterThreshold(double eps) : eps_(eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw std::invalid_argument("filter threshold must be > 0");
}

ActiveSet FilterActive(std::span<const Vector> grads, FilterThreshold eps) {
  ActiveSet active;
  for (std::size_t i = 0; i < grads.size(); ++i)
    if (Norm(grads[i]) > eps.value()) active.push_back(i);
  return active;
}

FilterThreshold EpsilonFor(double varepsilon, double smoothness) {
  if (!(varepsilon > 0.0)) throw std::invalid_argument("varepsilon must be > 0");
  if (!(smoothness > 0.0)) throw std::invalid_argument("smoothness must be > 0");
  return FilterThreshold(std::sqrt(2.0 * smoothness * varepsilon));
}

double Theorem1Step(std::span<const double> d, std::span<const Vector> dropped_grads,
                    std::size_t active_count, std::size_t n, double smoothness) {
  if (!(smoothness > 0.0)) throw std::invalid_argument("smoothness must be > 0");
  const double dd = SquaredNorm(d);
  if (dd == 0.0) return 0.0;
  double coupling = 0.0;
  for (const auto& g : dropped_grads) coupling += Dot(g, d);
  const double t = (static_cast<double>(active_count) * dd + coupling) /
                   (static_cast<double>(n) * smoothness * dd);
  return std::max(t, 0.0);
}

std::string ToString(Algorithm a) { return a == Algorithm::kMgda ? "mgda" : "mgda_pp"; }

std::string ToString(Termination t) {
  switch (t) {
    case Termination::kAllGradientsSmall:
      return "AllGradientsSmall";
    case Termination::kStationaryDirection:
      return "StationaryDirection";
    case Termination::kMaxIters:
      return "MaxIters";
  }
  return "?";
}

std::optional<Algorithm> ParseAlgorithm(const std::string& s) {
  if (s == "mgda") return Algorithm::kMgda;
  if (s == "mgda_pp" || s == "mgda++") return Algorithm::kMgdaPP;
  return std::nullopt;
}

StepRule StepRule::Constant(double t) {
  if (!(t > 0.0)) throw std::invalid_argument("constant step must be > 0");
  return {Kind::kConstant, t};
}

namespace {

GradientSet CheckedGrad(const Problem& prob, std::span<const double> x) {
  if (!AllFinite(x)) throw std::invalid_argument("non-finite iterate");
  GradientSet g = prob.Grad(x);
  for (const auto& gi : g)
    if (!AllFinite(gi)) throw std::runtime_error("non-finite gradient");
  return g;
}

// Shared tail of both algorithms: solve on `active`, choose t, move.
StepOutcome Advance(std::span<const double> x, const Problem& prob, const GradientSet& grads,
                    ActiveSet active, const GradientSet& solve_on, const StepRule& rule,
                    const StepOptions& opts) {
  StepOutcome out;
  out.x.assign(x.begin(), x.end());
  out.active = std::move(active);
  const MinNormSolution sol = MinNormElement(solve_on, opts.min_norm_tol);
  out.weights = sol.weights;
  out.direction = sol.direction;
  if (std::sqrt(sol.squared_norm) <= opts.stall_tol) {
    out.stationary = true;
    return out;
  }
  if (rule.kind == StepRule::Kind::kConstant) {
    out.step = rule.constant;
  } else {
    GradientSet dropped;
    std::size_t next = 0;
    for (std::size_t i = 0; i < grads.size(); ++i) {
      if (next < out.active.size() && out.active[next] == i) {
        ++next;
        continue;
      }
      dropped.push_back(grads[i]);
    }
    out.step = Theorem1Step(out.direction, dropped, out.active.size(), grads.size(),
                            prob.smoothness());
  }
  Axpy(-out.step, out.direction, out.x);
  return out;
}

}  // namespace

StepOutcome MgdaStep(std::span<const double> x, const Problem& prob, const StepRule& rule,
                     const StepOptions& opts) {
  const GradientSet grads = CheckedGrad(prob, x);
  ActiveSet all(grads.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  if (!opts.normalize_gradients) return Advance(x, prob, grads, std::move(all), grads, rule, opts);
  GradientSet unit = grads;
  for (auto& g : unit) {
    const double n = Norm(g);
    if (n > 0.0) g = Scaled(g, 1.0 / n);
  }
  return Advance(x, prob, grads, std::move(all), unit, rule, opts);
}

StepOutcome MgdaPPStep(std::span<const double> x, const Problem& prob, FilterThreshold eps,
                       const StepRule& rule, const StepOptions& opts) {
  const GradientSet grads = CheckedGrad(prob, x);
  ActiveSet active = FilterActive(grads, eps);
  if (active.empty()) {
    StepOutcome out;
    out.x.assign(x.begin(), x.end());
    out.direction.assign(x.size(), 0.0);
    out.all_small = true;
    return out;
  }
  GradientSet subset;
  subset.reserve(active.size());
  for (std::size_t i : active) subset.push_back(grads[i]);
  return Advance(x, prob, grads, std::move(active), subset, rule, opts);
}

DescentTrace Run(const Problem& prob, std::span<const double> x0, const DescentConfig& config) {
  if (x0.size() != prob.dim()) throw std::invalid_argument("x0 has wrong dimension");
  if (config.max_iters < 0) throw std::invalid_argument("max_iters must be >= 0");
  const std::optional<FilterThreshold> eps =
      config.algorithm == Algorithm::kMgdaPP ? std::optional(FilterThreshold(config.epsilon))
                                             : std::nullopt;
  DescentTrace trace;
  Vector x(x0.begin(), x0.end());
  for (int k = 0;; ++k) {
    StepOutcome out = eps ? MgdaPPStep(x, prob, *eps, config.step, config.options)
                          : MgdaStep(x, prob, config.step, config.options);
    TraceRow row{k, x, prob.Eval(x), out.active, out.step, Norm(out.direction)};
    std::optional<Termination> stop;
    if (k >= config.max_iters) {
      stop = Termination::kMaxIters;
    } else if (out.all_small) {
      stop = Termination::kAllGradientsSmall;
    } else if (out.stationary) {
      stop = Termination::kStationaryDirection;
    }
    if (stop) {
      row.step = 0.0;
      trace.rows.push_back(std::move(row));
      trace.termination = *stop;
      return trace;
    }
    trace.rows.push_back(std::move(row));
    x = std::move(out.x);
  }
}

std::uint64_t ActiveMask(const ActiveSet& active) {
  std::uint64_t mask = 0;
  for (std::size_t i : active) {
    if (i >= 64) throw std::out_of_range("active-set bitmask supports at most 64 objectives");
    mask |= std::uint64_t{1} << i;
  }
  return mask;
}

namespace {

void WriteTraceTable(std::ostream& out, std::span<const DescentTrace> traces, bool with_start) {
  if (traces.empty() || traces.front().rows.empty()) throw std::invalid_argument("empty trace");
  const std::size_t m = traces.front().rows.front().x.size();
  const std::size_t n = traces.front().rows.front().f.size();
  std::vector<std::string> header;
  if (with_start) header.push_back("start");
  header.push_back("iter");
  for (std::size_t j = 0; j < m; ++j) header.push_back("x" + std::to_string(j));
  for (std::size_t i = 0; i < n; ++i) header.push_back("f" + std::to_string(i));
  header.insert(header.end(), {"active_mask", "t", "d_norm"});
  out << csv::JoinRow(header) << '\n';
  for (std::size_t s = 0; s < traces.size(); ++s) {
    if (traces[s].rows.empty()) throw std::invalid_argument("empty trace");
    for (const auto& r : traces[s].rows) {
      std::vector<std::string> cells;
      if (with_start) cells.push_back(std::to_string(s));
      cells.push_back(std::to_string(r.iter));
      for (double v : r.x) cells.push_back(csv::FormatDouble(v));
      for (double v : r.f) cells.push_back(csv::FormatDouble(v));
      cells.push_back(std::to_string(ActiveMask(r.active)));
      cells.push_back(csv::FormatDouble(r.step));
      cells.push_back(csv::FormatDouble(r.d_norm));
      out << csv::JoinRow(cells) << '\n';
    }
  }
}

}  // namespace

void WriteTraceCsv(std::ostream& out, const DescentTrace& trace) {
  WriteTraceTable(out, std::span(&trace, 1), false);
}

void WriteTraceCsv(std::ostream& out, std::span<const DescentTrace> traces) {
  WriteTraceTable(out, traces, true);
}

}  // namespace mgda
