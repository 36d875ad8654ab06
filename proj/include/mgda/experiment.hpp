#ifndef MGDA_EXPERIMENT_HPP_
#define MGDA_EXPERIMENT_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "mgda/descent.hpp"
#include "mgda/gridworld.hpp"
#include "mgda/marl.hpp"
#include "mgda/oracle.hpp"
#include "mgda/problems.hpp"

namespace mgda {

enum class ExperimentKind { kSynthetic, kMarl, kVerify };

std::string ToString(ExperimentKind k);

/// Invalid or inconsistent experiment configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Problem and oracle grid shared by run-synthetic and verify.
struct ProblemSettings {
  std::string problem = "clamped_norm";
  std::size_t dim = 2;
  std::size_t objectives = 2;  // clamped_norm only
  double varepsilon = 1e-3;
  int grid_points = 401;
  std::optional<double> grid_lo;  // defaults to the start box
  std::optional<double> grid_hi;
};

struct SyntheticSettings {
  Algorithm algorithm = Algorithm::kMgdaPP;
  std::optional<double> epsilon;  // sqrt(2 L varepsilon) when unset
  StepRule step = StepRule::Theorem1();
  int max_iters = 10000;
  int starts = 20;
  double box_lo = -10.0;
  double box_hi = 10.0;
};

struct MarlSettings {
  std::string scenario = "door";
  Trainer trainer = Trainer::kMgpoPP;
  std::optional<double> epsilon;  // 0.1 on dead_end, 0.05 elsewhere
  int horizon = kDefaultHorizon;
  TrainConfig train;
  std::vector<Vector> init_logits;  // one row per agent, optional
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::kSynthetic;
  std::string name;  // derived from problem/scenario and algorithm when empty
  std::vector<std::uint64_t> seeds{0};
  std::filesystem::path out_dir = "results";
  ProblemSettings problem;
  SyntheticSettings synthetic;
  MarlSettings marl;
  std::vector<std::filesystem::path> traces;  // verify inputs

  /// Throws ConfigError on unknown names, empty seeds or bad ranges.
  void Validate() const;
  std::string ResolvedName() const;
  double ResolvedSyntheticEpsilon() const;
  double ResolvedMarlEpsilon() const;
};

/// Fills a config from JSON. Unknown keys and wrong types are errors.
ExperimentConfig ParseConfig(const nlohmann::json& j, ExperimentKind kind);
ExperimentConfig LoadConfig(const std::filesystem::path& path, ExperimentKind kind);
nlohmann::ordered_json ToJson(const ExperimentConfig& c);

ProblemPtr MakeProblem(const ProblemSettings& p);
GridSpec OracleGrid(const ProblemSettings& p, double box_lo, double box_hi);

struct SyntheticRun {
  Vector start;
  DescentTrace trace;
  ParetoVerdict verdict;
  double min_grad_norm = 0.0;     // smallest objective gradient at the endpoint
  double max_sum_increase = 0.0;  // largest one-step rise of sum_i F_i
};

struct SyntheticSeedResult {
  std::uint64_t seed = 0;
  std::vector<SyntheticRun> runs;
};

/// Starts are uniform in the box, drawn from a generator seeded by the seed.
std::vector<Vector> SyntheticStarts(const ExperimentConfig& c, std::uint64_t seed);

/// Every seed runs on its own thread; results come back in seed order.
std::vector<SyntheticSeedResult> RunSynthetic(const ExperimentConfig& c);

struct MarlSeedResult {
  std::uint64_t seed = 0;
  TrainingTrace trace;
};

std::unique_ptr<MultiAgentEnv> MakeEnvironment(const MarlSettings& m);
std::vector<MarlSeedResult> RunMarl(const ExperimentConfig& c);

nlohmann::ordered_json SyntheticSummary(const ExperimentConfig& c,
                                        const std::vector<SyntheticSeedResult>& results);
/// Per-agent mean and population std of the final greedy returns.
nlohmann::ordered_json MarlSummary(const ExperimentConfig& c,
                                   const std::vector<MarlSeedResult>& results);

/// Writes <out>/<name>/<seed>/{trace.csv,verdicts.csv} and summary.json.
/// Output is staged and moved into place only when complete.
std::filesystem::path WriteSynthetic(const ExperimentConfig& c,
                                     const std::vector<SyntheticSeedResult>& results);
/// Writes <out>/<name>/<seed>/trace.csv and summary.json.
std::filesystem::path WriteMarl(const ExperimentConfig& c,
                                const std::vector<MarlSeedResult>& results);

struct Endpoint {
  std::string label;
  Vector x;
};

/// Final point of every start in a descent trace CSV. Throws
/// csv::ParseError on malformed content, std::runtime_error when the file
/// cannot be read.
std::vector<Endpoint> ReadEndpoints(const std::filesystem::path& path, std::size_t dim);

std::vector<VerdictRow> RunVerify(const ExperimentConfig& c);
/// Writes <out>/<name>/verdicts.csv.
std::filesystem::path WriteVerify(const ExperimentConfig& c, const std::vector<VerdictRow>& rows);

}  // namespace mgda

#endif  // MGDA_EXPERIMENT_HPP_
