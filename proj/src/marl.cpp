#include "mgda/marl.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "mgda/csv.hpp"
#include "mgda/min_norm.hpp"

namespace mgda {
namespace {

std::uint64_t MixSeed(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  std::uint32_t words[2];
  seq.generate(words, words + 2);
  return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

std::vector<std::size_t> AllRows(const RolloutBatch& batch, std::span<const std::size_t> rows) {
  if (!rows.empty()) return {rows.begin(), rows.end()};
  std::vector<std::size_t> all(batch.steps.size());
  std::iota(all.begin(), all.end(), 0);
  return all;
}

std::size_t RowOf(const std::vector<std::uint64_t>& states, std::uint64_t s) {
  return static_cast<std::size_t>(std::lower_bound(states.begin(), states.end(), s) - states.begin());
}

}  // namespace

Vector Softmax(std::span<const double> logits) {
  double hi = *std::max_element(logits.begin(), logits.end());
  Vector p(logits.size());
  double total = 0.0;
  for (std::size_t k = 0; k < logits.size(); ++k) {
    p[k] = std::exp(logits[k] - hi);
    total += p[k];
  }
  for (double& v : p) v /= total;
  return p;
}

PolicyTable::PolicyTable(int num_actions) : PolicyTable(num_actions, Vector(std::max(num_actions, 0), 0.0)) {}

PolicyTable::PolicyTable(int num_actions, Vector initial)
    : num_actions_(num_actions), initial_(std::move(initial)) {
  if (num_actions <= 0) throw std::invalid_argument("policy needs at least one action");
  if (initial_.size() != static_cast<std::size_t>(num_actions) || !AllFinite(initial_)) {
    throw std::invalid_argument("initial logits must be finite, one per action");
  }
}

const Vector& PolicyTable::Logits(std::uint64_t state) const {
  auto it = logits_.find(state);
  return it == logits_.end() ? initial_ : it->second;
}

Vector& PolicyTable::MutableLogits(std::uint64_t state) {
  return logits_.try_emplace(state, initial_).first->second;
}

Vector PolicyTable::Probs(std::uint64_t state) const { return Softmax(Logits(state)); }

int PolicyTable::Sample(std::uint64_t state, std::mt19937_64& rng) const {
  Vector p = Probs(state);
  double u = std::generate_canonical<double, 53>(rng);
  for (int k = 0; k < num_actions_; ++k) {
    u -= p[k];
    if (u < 0.0) return k;
  }
  return num_actions_ - 1;
}

int PolicyTable::Greedy(std::uint64_t state) const {
  const Vector& z = Logits(state);
  return static_cast<int>(std::max_element(z.begin(), z.end()) - z.begin());
}

MultiHeadValueTable::MultiHeadValueTable(int heads) : heads_(heads), zeros_(heads, 0.0) {
  if (heads <= 0) throw std::invalid_argument("value table needs at least one head");
}

const Vector& MultiHeadValueTable::Values(std::uint64_t state) const {
  auto it = values_.find(state);
  return it == values_.end() ? zeros_ : it->second;
}

Vector& MultiHeadValueTable::MutableValues(std::uint64_t state) {
  return values_.try_emplace(state, zeros_).first->second;
}

RolloutBatch Collect(MultiAgentEnv& env, std::span<const PolicyTable> policies, int episodes,
                     std::uint64_t seed) {
  if (episodes <= 0) throw std::invalid_argument("collect: episode count must be positive");
  const int n = env.num_agents();
  if (policies.size() != static_cast<std::size_t>(n)) {
    throw std::invalid_argument("collect: one policy per agent required");
  }
  std::mt19937_64 rng(seed);
  RolloutBatch batch;
  batch.num_agents = n;
  batch.episodes = episodes;
  std::vector<int> actions(n);
  for (int e = 0; e < episodes; ++e) {
    Vector ret(n, 0.0);
    std::uint64_t s = env.Reset();
    for (bool done = false; !done;) {
      Transition t;
      t.state = s;
      t.old_prob.resize(n);
      for (int i = 0; i < n; ++i) {
        actions[i] = policies[i].Sample(s, rng);
        t.old_prob[i] = policies[i].Probs(s)[actions[i]];
      }
      MultiAgentEnv::Step st = env.Act(actions);
      t.actions = actions;
      t.rewards = st.rewards;
      t.next_state = st.state;
      t.done = st.done;
      for (int i = 0; i < n; ++i) ret[i] += st.rewards[i];
      batch.steps.push_back(std::move(t));
      s = st.state;
      done = st.done;
    }
    batch.episode_returns.push_back(std::move(ret));
  }
  return batch;
}

void EstimateAdvantages(RolloutBatch& batch, MultiHeadValueTable& values, double gamma,
                        double lambda, double value_lr) {
  const std::size_t T = batch.steps.size();
  const int heads = values.heads();
  batch.advantages.assign(heads, Vector(T, 0.0));
  for (int j = 0; j < heads; ++j) {
    double running = 0.0;
    for (std::size_t k = T; k-- > 0;) {
      const Transition& t = batch.steps[k];
      double next_v = t.done ? 0.0 : values.Values(t.next_state)[j];
      if (t.done) running = 0.0;
      double delta = t.rewards[j] + gamma * next_v - values.Values(t.state)[j];
      running = delta + gamma * lambda * running;
      batch.advantages[j][k] = running;
    }
  }
  if (value_lr <= 0.0) return;
  std::vector<Vector> targets(T, Vector(heads));
  for (std::size_t k = 0; k < T; ++k) {
    const Vector& v = values.Values(batch.steps[k].state);
    for (int j = 0; j < heads; ++j) targets[k][j] = batch.advantages[j][k] + v[j];
  }
  for (std::size_t k = 0; k < T; ++k) {
    Vector& v = values.MutableValues(batch.steps[k].state);
    for (int j = 0; j < heads; ++j) v[j] += value_lr * (targets[k][j] - v[j]);
  }
}

std::vector<std::uint64_t> VisitedStates(const RolloutBatch& batch, std::span<const std::size_t> rows) {
  std::vector<std::uint64_t> states;
  for (std::size_t r : AllRows(batch, rows)) states.push_back(batch.steps[r].state);
  std::sort(states.begin(), states.end());
  states.erase(std::unique(states.begin(), states.end()), states.end());
  return states;
}

LogitGradient SurrogateGradient(const RolloutBatch& batch, std::span<const double> advantages,
                                int agent, const PolicyTable& policy, double clip_eps,
                                std::span<const std::size_t> rows) {
  const std::vector<std::size_t> use = AllRows(batch, rows);
  const int A = policy.num_actions();
  LogitGradient g{VisitedStates(batch, use), {}};
  g.values.assign(g.states.size() * A, 0.0);
  if (use.empty()) return g;
  const double scale = 1.0 / static_cast<double>(use.size());
  for (std::size_t r : use) {
    const Transition& t = batch.steps[r];
    const double adv = advantages[r];
    const int a = t.actions[agent];
    Vector p = policy.Probs(t.state);
    double ratio = p[a] / t.old_prob[agent];
    if ((adv > 0.0 && ratio > 1.0 + clip_eps) || (adv < 0.0 && ratio < 1.0 - clip_eps)) continue;
    double* row = &g.values[RowOf(g.states, t.state) * A];
    double c = scale * adv * ratio;
    for (int k = 0; k < A; ++k) row[k] += c * ((k == a ? 1.0 : 0.0) - p[k]);
  }
  return g;
}

LogitGradient EntropyGradient(const RolloutBatch& batch, const PolicyTable& policy,
                              std::span<const std::size_t> rows) {
  const std::vector<std::size_t> use = AllRows(batch, rows);
  const int A = policy.num_actions();
  LogitGradient g{VisitedStates(batch, use), {}};
  g.values.assign(g.states.size() * A, 0.0);
  if (use.empty()) return g;
  const double scale = 1.0 / static_cast<double>(use.size());
  for (std::size_t r : use) {
    const Transition& t = batch.steps[r];
    Vector p = policy.Probs(t.state);
    double h = 0.0;
    for (double q : p) {
      if (q > 0.0) h -= q * std::log(q);
    }
    double* row = &g.values[RowOf(g.states, t.state) * A];
    for (int k = 0; k < A; ++k) {
      if (p[k] > 0.0) row[k] -= scale * p[k] * (std::log(p[k]) + h);
    }
  }
  return g;
}

std::string ToString(Trainer t) {
  switch (t) {
    case Trainer::kIndependent:
      return "independent";
    case Trainer::kMgpo:
      return "mgpo";
    case Trainer::kMgpoPP:
      return "mgpo_pp";
  }
  return "?";
}

std::optional<Trainer> ParseTrainer(const std::string& s) {
  if (s == "independent") return Trainer::kIndependent;
  if (s == "mgpo") return Trainer::kMgpo;
  if (s == "mgpo_pp" || s == "mgpo++") return Trainer::kMgpoPP;
  return std::nullopt;
}

void TrainConfig::Validate() const {
  auto need = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("train config: ") + what);
  };
  need(total_steps >= 0, "total_steps must be >= 0");
  need(episodes_per_batch > 0, "episodes_per_batch must be positive");
  need(minibatches > 0, "minibatches must be positive");
  need(clip_eps > 0.0, "clip_eps must be positive");
  need(learning_rate > 0.0 && std::isfinite(learning_rate), "learning_rate must be positive");
  need(value_lr >= 0.0 && value_lr <= 1.0, "value_lr must lie in [0, 1]");
  need(gamma > 0.0 && gamma <= 1.0, "gamma must lie in (0, 1]");
  need(gae_lambda >= 0.0 && gae_lambda <= 1.0, "gae_lambda must lie in [0, 1]");
  need(entropy_coef >= 0.0, "entropy_coef must be >= 0");
  need(filter_eps > 0.0, "filter_eps must be positive");
  need(std::isfinite(stay_bias), "stay_bias must be finite");
  need(eval_interval > 0, "eval_interval must be positive");
  need(eval_episodes > 0, "eval_episodes must be positive");
}

EvalPoint EvaluateGreedy(const MultiAgentEnv& env, std::span<const PolicyTable> policies,
                         int episodes) {
  auto local = env.Clone();
  const int n = local->num_agents();
  std::vector<Vector> returns;
  std::vector<int> actions(n);
  for (int e = 0; e < episodes; ++e) {
    Vector ret(n, 0.0);
    std::uint64_t s = local->Reset();
    for (bool done = false; !done;) {
      for (int i = 0; i < n; ++i) actions[i] = policies[i].Greedy(s);
      auto st = local->Act(actions);
      for (int i = 0; i < n; ++i) ret[i] += st.rewards[i];
      s = st.state;
      done = st.done;
    }
    returns.push_back(std::move(ret));
  }
  EvalPoint ev;
  ev.mean_return.assign(n, 0.0);
  ev.std_return.assign(n, 0.0);
  for (const Vector& r : returns) {
    for (int i = 0; i < n; ++i) ev.mean_return[i] += r[i] / episodes;
  }
  for (const Vector& r : returns) {
    for (int i = 0; i < n; ++i) {
      double d = r[i] - ev.mean_return[i];
      ev.std_return[i] += d * d / episodes;
    }
  }
  for (double& s : ev.std_return) s = std::sqrt(s);
  return ev;
}

TrainingTrace Train(const MultiAgentEnv& env, Trainer trainer, const TrainConfig& config,
                    std::vector<PolicyTable> init, const UpdateObserver& observer) {
  config.Validate();
  auto local = env.Clone();
  const int n = local->num_agents();
  TrainingTrace trace;
  trace.trainer = trainer;
  trace.policies = std::move(init);
  if (trace.policies.empty()) {
    Vector initial(local->num_actions(), 0.0);
    initial[0] = config.stay_bias;
    trace.policies.assign(n, PolicyTable(local->num_actions(), initial));
  }
  if (trace.policies.size() != static_cast<std::size_t>(n)) {
    throw std::invalid_argument("train: one initial policy per agent required");
  }
  MultiHeadValueTable values(n);
  std::mt19937_64 shuffle_rng(MixSeed(config.seed, ~std::uint64_t{0}));
  const FilterThreshold eps(config.filter_eps);

  auto evaluate = [&](std::int64_t step) {
    EvalPoint ev = EvaluateGreedy(*local, trace.policies, config.eval_episodes);
    ev.step = step;
    trace.evals.push_back(std::move(ev));
  };
  evaluate(0);

  std::int64_t steps = 0;
  std::int64_t next_eval = config.eval_interval;
  for (std::uint64_t iter = 0; steps < config.total_steps; ++iter) {
    RolloutBatch batch = Collect(*local, trace.policies, config.episodes_per_batch,
                                 MixSeed(config.seed, iter));
    steps += static_cast<std::int64_t>(batch.steps.size());
    EstimateAdvantages(batch, values, config.gamma, config.gae_lambda, config.value_lr);

    std::vector<std::size_t> order(batch.steps.size());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    const std::size_t parts = std::min<std::size_t>(config.minibatches, order.size());
    for (std::size_t m = 0; m < parts; ++m) {
      std::size_t lo = order.size() * m / parts;
      std::size_t hi = order.size() * (m + 1) / parts;
      std::vector<std::size_t> rows(order.begin() + lo, order.begin() + hi);
      std::sort(rows.begin(), rows.end());
      for (int i = 0; i < n; ++i) {
        PolicyTable& pol = trace.policies[i];
        UpdateRecord rec;
        rec.agent = i;
        std::vector<std::uint64_t> states;
        for (int j = 0; j < n; ++j) {
          LogitGradient g = SurrogateGradient(batch, batch.advantages[j], i, pol, config.clip_eps, rows);
          states = std::move(g.states);
          rec.head_grads.push_back(std::move(g.values));
        }
        switch (trainer) {
          case Trainer::kIndependent:
            rec.active = {static_cast<std::size_t>(i)};
            break;
          case Trainer::kMgpo:
            rec.active.resize(n);
            std::iota(rec.active.begin(), rec.active.end(), 0);
            break;
          case Trainer::kMgpoPP:
            rec.active = FilterActive(rec.head_grads, eps);
            break;
        }
        if (rec.active.empty()) {
          if (observer) observer(rec);
          continue;
        }
        GradientSet active;
        for (std::size_t j : rec.active) active.push_back(rec.head_grads[j]);
        rec.direction = MinNormElement(active, kRlTol).direction;
        Vector step = rec.direction;
        if (config.entropy_coef > 0.0) {
          Axpy(config.entropy_coef, EntropyGradient(batch, pol, rows).values, step);
        }
        const int A = pol.num_actions();
        for (std::size_t r = 0; r < states.size(); ++r) {
          Vector& z = pol.MutableLogits(states[r]);
          for (int k = 0; k < A; ++k) z[k] += config.learning_rate * step[r * A + k];
        }
        if (observer) observer(rec);
      }
    }
    while (steps >= next_eval && next_eval <= config.total_steps) {
      evaluate(next_eval);
      next_eval += config.eval_interval;
    }
  }
  if (trace.evals.back().step != steps) evaluate(steps);
  return trace;
}

void WriteTrainingCsv(std::ostream& out, const TrainingTrace& trace) {
  out << "step,agent,mean_return,std_return\n";
  for (const EvalPoint& ev : trace.evals) {
    for (std::size_t i = 0; i < ev.mean_return.size(); ++i) {
      out << csv::JoinRow({std::to_string(ev.step), std::to_string(i + 1),
                           csv::FormatDouble(ev.mean_return[i]), csv::FormatDouble(ev.std_return[i])})
          << '\n';
    }
  }
}

std::vector<std::vector<Vector>> MatrixGameLogitGradients(std::span<const double> logits1,
                                                          std::span<const double> logits2) {
  const Vector p[2] = {Softmax(logits1), Softmax(logits2)};
  std::vector<std::vector<Vector>> out(2, std::vector<Vector>(2, Vector(2, 0.0)));
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      // Q[k]: expected reward j when agent i plays k
      double q[2];
      for (int k = 0; k < 2; ++k) {
        q[k] = 0.0;
        for (int o = 0; o < 2; ++o) {
          Vector r = i == 0 ? MatrixGame::Payoff(k, o) : MatrixGame::Payoff(o, k);
          q[k] += p[1 - i][o] * r[j];
        }
      }
      for (int k = 0; k < 2; ++k) {
        double adv = 0.0;
        for (int l = 0; l < 2; ++l) adv += p[i][l] * (q[k] - q[l]);
        out[i][j][k] = p[i][k] * adv;
      }
    }
  }
  return out;
}

ZeroGradientReport ZeroGradientDiagnostic(std::span<const double> probs1, std::span<const double> probs2) {
  std::span<const double> p[2] = {probs1, probs2};
  for (auto pi : p) {
    if (pi.size() != 2) throw std::invalid_argument("matrix game policies have two actions");
    for (double v : pi) {
      if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("probabilities must lie in [0, 1]");
    }
  }
  ZeroGradientReport rep{Vector(2), Vector(2)};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      double q[2];
      for (int k = 0; k < 2; ++k) {
        q[k] = 0.0;
        for (int o = 0; o < 2; ++o) {
          Vector r = i == 0 ? MatrixGame::Payoff(k, o) : MatrixGame::Payoff(o, k);
          q[k] += p[1 - i][o] * r[j];
        }
      }
      // tangent to the simplex: (q0 - q1)/2 * (1, -1)
      double norm = std::abs(q[0] - q[1]) / std::sqrt(2.0);
      (i == j ? rep.own : rep.cross)[i] = norm;
    }
  }
  return rep;
}

}  // namespace mgda
