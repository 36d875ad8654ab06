#ifndef MGDA_MARL_HPP_
#define MGDA_MARL_HPP_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "mgda/descent.hpp"
#include "mgda/gridworld.hpp"
#include "mgda/linalg.hpp"

namespace mgda {

/// Softmax policy over a lazily grown table of logits; unseen states start
/// from `initial` (all zeros by default).
class PolicyTable {
 public:
  explicit PolicyTable(int num_actions);
  PolicyTable(int num_actions, Vector initial);

  int num_actions() const { return num_actions_; }
  std::size_t size() const { return logits_.size(); }

  const Vector& Logits(std::uint64_t state) const;
  Vector& MutableLogits(std::uint64_t state);
  Vector Probs(std::uint64_t state) const;
  int Sample(std::uint64_t state, std::mt19937_64& rng) const;
  /// Argmax with ties broken toward the lowest action index.
  int Greedy(std::uint64_t state) const;

 private:
  int num_actions_;
  Vector initial_;
  std::unordered_map<std::uint64_t, Vector> logits_;
};

Vector Softmax(std::span<const double> logits);

/// One value estimate per reward head (one head per agent).
class MultiHeadValueTable {
 public:
  explicit MultiHeadValueTable(int heads);

  int heads() const { return heads_; }
  const Vector& Values(std::uint64_t state) const;
  Vector& MutableValues(std::uint64_t state);

 private:
  int heads_;
  Vector zeros_;
  std::unordered_map<std::uint64_t, Vector> values_;
};

struct Transition {
  std::uint64_t state = 0;
  std::uint64_t next_state = 0;
  std::vector<int> actions;
  Vector rewards;
  bool done = false;
  /// Behaviour probability of each agent's sampled action, frozen at
  /// collection time so every update in the batch uses the same ratios.
  Vector old_prob;
};

struct RolloutBatch {
  int num_agents = 0;
  int episodes = 0;
  std::vector<Transition> steps;
  std::vector<Vector> episode_returns;  // undiscounted, [episode][agent]
  std::vector<Vector> advantages;       // [head][transition]; filled by EstimateAdvantages
};

/// Samples whole episodes on-policy; deterministic given the seed. Throws
/// std::invalid_argument when episodes <= 0 or the policy count is wrong.
RolloutBatch Collect(MultiAgentEnv& env, std::span<const PolicyTable> policies, int episodes,
                     std::uint64_t seed);

/// GAE(gamma, lambda) per head, stored into batch.advantages. Episode ends
/// (including horizon cut-offs) are terminal. Afterwards every visited value
/// moves value_lr of the way toward its lambda-return target.
void EstimateAdvantages(RolloutBatch& batch, MultiHeadValueTable& values, double gamma,
                        double lambda, double value_lr);

/// Gradient restricted to a set of states: `values` is row-major with
/// num_actions entries per state in `states`.
struct LogitGradient {
  std::vector<std::uint64_t> states;
  Vector values;
};

/// Sorted distinct states of `rows` (all transitions when empty).
std::vector<std::uint64_t> VisitedStates(const RolloutBatch& batch, std::span<const std::size_t> rows = {});

/// Gradient (ascent convention) of the clipped surrogate
/// mean_t min(r_t A_t, clip(r_t, 1-eps, 1+eps) A_t) with respect to agent's
/// logits, r_t = pi(a_t|s_t) / old_prob.
LogitGradient SurrogateGradient(const RolloutBatch& batch, std::span<const double> advantages,
                                int agent, const PolicyTable& policy, double clip_eps,
                                std::span<const std::size_t> rows = {});

/// Gradient of the mean policy entropy over the same transitions.
LogitGradient EntropyGradient(const RolloutBatch& batch, const PolicyTable& policy,
                              std::span<const std::size_t> rows = {});

enum class Trainer { kIndependent, kMgpo, kMgpoPP };

std::string ToString(Trainer t);
std::optional<Trainer> ParseTrainer(const std::string& s);

struct TrainConfig {
  std::int64_t total_steps = 100000;
  int episodes_per_batch = 8;
  int minibatches = 6;
  double clip_eps = 0.2;
  double learning_rate = 1.0;
  double value_lr = 0.5;
  double gamma = 0.99;
  double gae_lambda = 0.95;
  double entropy_coef = 0.01;
  double filter_eps = 0.05;
  /// Initial logit of action 0 in every state; the others start at 0.
  double stay_bias = 1.0;
  std::int64_t eval_interval = 5000;
  int eval_episodes = 16;
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument on non-positive sizes or rates.
  void Validate() const;
};

/// Per-agent update as applied, for diagnostics.
struct UpdateRecord {
  int agent = 0;
  std::vector<Vector> head_grads;  // ascent gradients, one per head
  ActiveSet active;                // heads entering the min-norm problem
  Vector direction;                // min-norm element over the active heads
};
using UpdateObserver = std::function<void(const UpdateRecord&)>;

struct EvalPoint {
  std::int64_t step = 0;
  Vector mean_return;
  Vector std_return;
};

struct TrainingTrace {
  Trainer trainer = Trainer::kMgpoPP;
  std::vector<EvalPoint> evals;
  std::vector<PolicyTable> policies;

  const EvalPoint& final_eval() const { return evals.back(); }
};

/// Greedy-policy returns over `episodes` runs of a private copy of env.
EvalPoint EvaluateGreedy(const MultiAgentEnv& env, std::span<const PolicyTable> policies,
                         int episodes);

/// Each agent ascends along the min-norm element of its per-head surrogate
/// gradients plus the entropy bonus: independent uses its own head only,
/// mgpo all heads, mgpo_pp the heads with norm > filter_eps (no update when
/// none remain). `init` overrides the starting logits (stay_bias on action
/// 0, zero elsewhere).
TrainingTrace Train(const MultiAgentEnv& env, Trainer trainer, const TrainConfig& config,
                    std::vector<PolicyTable> init = {}, const UpdateObserver& observer = {});

/// Columns step,agent,mean_return,std_return; agents are 1-based.
void WriteTrainingCsv(std::ostream& out, const TrainingTrace& trace);

/// Exact expected-return gradients for the matrix game with softmax
/// policies: result[i][j] = d J_j / d logits of agent i.
std::vector<std::vector<Vector>> MatrixGameLogitGradients(std::span<const double> logits1,
                                                          std::span<const double> logits2);

struct ZeroGradientReport {
  Vector own;    // ||grad_{pi^i} J_i||
  Vector cross;  // ||grad_{pi^i} J_j||, j != i
};

/// Exact matrix-game policy gradients in the direct (probability)
/// parametrisation, projected onto the simplex tangent space. Valid at
/// deterministic policies too.
ZeroGradientReport ZeroGradientDiagnostic(std::span<const double> probs1,
                                          std::span<const double> probs2);

}  // namespace mgda

#endif  // MGDA_MARL_HPP_
