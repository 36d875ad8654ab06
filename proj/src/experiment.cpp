#include "mgda/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "mgda/csv.hpp"

namespace mgda {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

std::string ToString(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::kSynthetic: return "synthetic";
    case ExperimentKind::kMarl: return "marl";
    case ExperimentKind::kVerify: return "verify";
  }
  return "?";
}

namespace {

bool IsSyntheticProblem(const std::string& name) {
  std::string base = name;
  if (base.ends_with("+dummy")) base.resize(base.size() - 6);
  return base == "clamped_norm" || base == "quadratic_pair";
}

bool IsScenario(const std::string& name) {
  if (name == "matrix_game") return true;
  const auto names = ScenarioNames();
  return std::find(names.begin(), names.end(), name) != names.end();
}

// Tracks which keys of an object were consumed so leftovers can be reported.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) throw ConfigError(where_ + ": expected an object");
  }

  template <typename T>
  void Get(const char* key, T& out) {
    auto it = j_.find(key);
    if (it == j_.end()) return;
    used_.insert(key);
    try {
      out = it->template get<T>();
    } catch (const json::exception&) {
      throw ConfigError(where_ + "." + key + ": wrong type");
    }
  }

  template <typename T>
  void Get(const char* key, std::optional<T>& out) {
    if (!j_.contains(key)) return;
    T v{};
    Get(key, v);
    out = v;
  }

  const json* Sub(const char* key) {
    auto it = j_.find(key);
    if (it == j_.end()) return nullptr;
    used_.insert(key);
    return &*it;
  }

  void Finish() const {
    for (const auto& [k, v] : j_.items()) {
      if (!used_.count(k)) throw ConfigError(where_ + ": unknown key '" + k + "'");
    }
  }

 private:
  const json& j_;
  std::string where_;
  std::set<std::string> used_;
};

void ReadBox(ObjectReader& r, const char* key, double& lo, double& hi) {
  std::optional<std::vector<double>> box;
  r.Get(key, box);
  if (!box) return;
  if (box->size() != 2) throw ConfigError(std::string(key) + ": expected [lo, hi]");
  lo = (*box)[0];
  hi = (*box)[1];
}

void ReadProblem(ObjectReader& r, ProblemSettings& p) {
  r.Get("problem", p.problem);
  r.Get("dim", p.dim);
  r.Get("objectives", p.objectives);
  r.Get("varepsilon", p.varepsilon);
  r.Get("grid_points", p.grid_points);
  if (const json* g = r.Sub("grid_box")) {
    std::vector<double> box;
    try {
      box = g->get<std::vector<double>>();
    } catch (const json::exception&) {
      throw ConfigError("grid_box: wrong type");
    }
    if (box.size() != 2) throw ConfigError("grid_box: expected [lo, hi]");
    p.grid_lo = box[0];
    p.grid_hi = box[1];
  }
}

void ReadTrain(const json& j, TrainConfig& t) {
  ObjectReader r(j, "train");
  r.Get("total_steps", t.total_steps);
  r.Get("episodes_per_batch", t.episodes_per_batch);
  r.Get("minibatches", t.minibatches);
  r.Get("clip_eps", t.clip_eps);
  r.Get("learning_rate", t.learning_rate);
  r.Get("value_lr", t.value_lr);
  r.Get("gamma", t.gamma);
  r.Get("gae_lambda", t.gae_lambda);
  r.Get("entropy_coef", t.entropy_coef);
  r.Get("stay_bias", t.stay_bias);
  r.Get("eval_interval", t.eval_interval);
  r.Get("eval_episodes", t.eval_episodes);
  r.Finish();
}

std::string StepName(const StepRule& s) {
  return s.kind == StepRule::Kind::kTheorem1 ? "theorem1" : csv::FormatDouble(s.constant);
}

double SumOf(const Vector& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

void WriteFile(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  out.close();
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

std::string DumpJson(const ordered_json& j) { return j.dump(2) + "\n"; }

// Builds the experiment directory next to its final location and swaps it
// in once every file is written; a failed run leaves nothing behind.
class StagedDir {
 public:
  explicit StagedDir(fs::path final_dir) : final_(std::move(final_dir)) {
    fs::create_directories(final_.parent_path().empty() ? fs::path(".") : final_.parent_path());
    staging_ = final_;
    staging_ += ".partial";
    fs::remove_all(staging_);
    fs::create_directories(staging_);
  }
  ~StagedDir() {
    if (!committed_) {
      std::error_code ec;
      fs::remove_all(staging_, ec);
    }
  }
  StagedDir(const StagedDir&) = delete;
  StagedDir& operator=(const StagedDir&) = delete;

  const fs::path& path() const { return staging_; }

  fs::path Commit() {
    fs::remove_all(final_);
    fs::rename(staging_, final_);
    committed_ = true;
    return final_;
  }

 private:
  fs::path final_;
  fs::path staging_;
  bool committed_ = false;
};

template <typename Result, typename Fn>
std::vector<Result> ForEachSeed(const std::vector<std::uint64_t>& seeds, Fn fn) {
  std::vector<std::future<Result>> jobs;
  jobs.reserve(seeds.size());
  for (std::uint64_t s : seeds) jobs.push_back(std::async(std::launch::async, fn, s));
  std::vector<Result> out;
  out.reserve(seeds.size());
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

double MeanOf(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double PopulationStd(const std::vector<double>& v) {
  const double m = MeanOf(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size()));
}

}  // namespace

void ExperimentConfig::Validate() const {
  if (seeds.empty()) throw ConfigError("at least one seed is required");
  if (std::set<std::uint64_t>(seeds.begin(), seeds.end()).size() != seeds.size()) {
    throw ConfigError("seeds must be distinct");
  }
  if (kind != ExperimentKind::kMarl) {
    if (!IsSyntheticProblem(problem.problem)) {
      throw ConfigError("unknown problem '" + problem.problem + "'");
    }
    if (problem.dim < 1) throw ConfigError("dim must be >= 1");
    if (!(problem.varepsilon > 0.0)) throw ConfigError("varepsilon must be > 0");
    if (problem.grid_points < 2) throw ConfigError("grid_points must be >= 2");
  }
  if (kind == ExperimentKind::kSynthetic) {
    if (synthetic.epsilon && !(*synthetic.epsilon > 0.0)) throw ConfigError("epsilon must be > 0");
    if (synthetic.starts < 1) throw ConfigError("starts must be >= 1");
    if (synthetic.max_iters < 1) throw ConfigError("max_iters must be >= 1");
    if (!(synthetic.box_lo < synthetic.box_hi)) throw ConfigError("box must satisfy lo < hi");
  }
  if (kind == ExperimentKind::kMarl) {
    if (!IsScenario(marl.scenario)) throw ConfigError("unknown scenario '" + marl.scenario + "'");
    if (marl.epsilon && !(*marl.epsilon > 0.0)) throw ConfigError("epsilon must be > 0");
    if (marl.horizon < 1) throw ConfigError("horizon must be >= 1");
    try {
      marl.train.Validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  if (kind == ExperimentKind::kVerify && traces.empty()) {
    throw ConfigError("verify needs at least one trace file");
  }
}

std::string ExperimentConfig::ResolvedName() const {
  if (!name.empty()) return name;
  switch (kind) {
    case ExperimentKind::kSynthetic:
      return problem.problem + "_" + ToString(synthetic.algorithm);
    case ExperimentKind::kMarl:
      return marl.scenario + "_" + ToString(marl.trainer);
    case ExperimentKind::kVerify:
      return problem.problem + "_verify";
  }
  return "experiment";
}

double ExperimentConfig::ResolvedSyntheticEpsilon() const {
  if (synthetic.epsilon) return *synthetic.epsilon;
  return EpsilonFor(problem.varepsilon, MakeProblem(problem)->smoothness()).value();
}

double ExperimentConfig::ResolvedMarlEpsilon() const {
  if (marl.epsilon) return *marl.epsilon;
  return marl.scenario == "dead_end" ? 0.1 : 0.05;
}

ExperimentConfig ParseConfig(const json& j, ExperimentKind kind) {
  ExperimentConfig c;
  c.kind = kind;
  ObjectReader r(j, "config");
  std::string kind_name = ToString(kind);
  r.Get("kind", kind_name);
  if (kind_name != ToString(kind)) {
    throw ConfigError("config is for '" + kind_name + "', not '" + ToString(kind) + "'");
  }
  r.Get("name", c.name);
  r.Get("seeds", c.seeds);
  std::string out = c.out_dir.string();
  r.Get("out", out);
  c.out_dir = out;

  if (kind != ExperimentKind::kMarl) ReadProblem(r, c.problem);
  if (kind == ExperimentKind::kSynthetic) {
    std::optional<std::string> algo;
    r.Get("algorithm", algo);
    if (algo) {
      auto a = ParseAlgorithm(*algo);
      if (!a) throw ConfigError("unknown algorithm '" + *algo + "'");
      c.synthetic.algorithm = *a;
    }
    r.Get("epsilon", c.synthetic.epsilon);
    if (const json* s = r.Sub("step")) {
      if (s->is_string() && s->get<std::string>() == "theorem1") {
        c.synthetic.step = StepRule::Theorem1();
      } else if (s->is_number() && s->get<double>() > 0.0) {
        c.synthetic.step = StepRule::Constant(s->get<double>());
      } else {
        throw ConfigError("step: expected \"theorem1\" or a positive number");
      }
    }
    r.Get("max_iters", c.synthetic.max_iters);
    r.Get("starts", c.synthetic.starts);
    ReadBox(r, "box", c.synthetic.box_lo, c.synthetic.box_hi);
  }
  if (kind == ExperimentKind::kMarl) {
    r.Get("scenario", c.marl.scenario);
    std::optional<std::string> algo;
    r.Get("algorithm", algo);
    if (algo) {
      auto t = ParseTrainer(*algo);
      if (!t) throw ConfigError("unknown algorithm '" + *algo + "'");
      c.marl.trainer = *t;
    }
    r.Get("epsilon", c.marl.epsilon);
    r.Get("horizon", c.marl.horizon);
    if (const json* t = r.Sub("train")) ReadTrain(*t, c.marl.train);
    r.Get("init_logits", c.marl.init_logits);
  }
  if (kind == ExperimentKind::kVerify) {
    std::vector<std::string> traces;
    r.Get("traces", traces);
    for (auto& t : traces) c.traces.emplace_back(t);
  }
  r.Finish();
  return c;
}

ExperimentConfig LoadConfig(const fs::path& path, ExperimentKind kind) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return ParseConfig(j, kind);
}

ordered_json ToJson(const ExperimentConfig& c) {
  ordered_json j;
  j["kind"] = ToString(c.kind);
  j["name"] = c.ResolvedName();
  j["seeds"] = c.seeds;
  if (c.kind != ExperimentKind::kMarl) {
    j["problem"] = c.problem.problem;
    j["dim"] = c.problem.dim;
    j["objectives"] = c.problem.objectives;
    j["varepsilon"] = c.problem.varepsilon;
    j["grid_points"] = c.problem.grid_points;
  }
  if (c.kind == ExperimentKind::kSynthetic) {
    const GridSpec g = OracleGrid(c.problem, c.synthetic.box_lo, c.synthetic.box_hi);
    j["grid_box"] = {g.lower.front(), g.upper.front()};
    j["algorithm"] = ToString(c.synthetic.algorithm);
    j["epsilon"] = c.ResolvedSyntheticEpsilon();
    j["step"] = StepName(c.synthetic.step);
    j["max_iters"] = c.synthetic.max_iters;
    j["starts"] = c.synthetic.starts;
    j["box"] = {c.synthetic.box_lo, c.synthetic.box_hi};
  }
  if (c.kind == ExperimentKind::kMarl) {
    const TrainConfig& t = c.marl.train;
    j["scenario"] = c.marl.scenario;
    j["algorithm"] = ToString(c.marl.trainer);
    j["epsilon"] = c.ResolvedMarlEpsilon();
    j["horizon"] = c.marl.horizon;
    j["train"] = {{"total_steps", t.total_steps},
                  {"episodes_per_batch", t.episodes_per_batch},
                  {"minibatches", t.minibatches},
                  {"clip_eps", t.clip_eps},
                  {"learning_rate", t.learning_rate},
                  {"value_lr", t.value_lr},
                  {"gamma", t.gamma},
                  {"gae_lambda", t.gae_lambda},
                  {"entropy_coef", t.entropy_coef},
                  {"stay_bias", t.stay_bias},
                  {"eval_interval", t.eval_interval},
                  {"eval_episodes", t.eval_episodes}};
    if (!c.marl.init_logits.empty()) j["init_logits"] = c.marl.init_logits;
  }
  if (c.kind == ExperimentKind::kVerify) {
    std::vector<std::string> traces;
    for (const auto& t : c.traces) traces.push_back(t.string());
    j["traces"] = traces;
  }
  return j;
}

ProblemPtr MakeProblem(const ProblemSettings& p) {
  std::string base = p.problem;
  const bool dummy = base.ends_with("+dummy");
  if (dummy) base.resize(base.size() - 6);
  ProblemPtr prob;
  try {
    if (base == "clamped_norm") {
      prob = MakeClampedNormLandscape(p.dim, p.objectives);
    } else {
      prob = MakeProblemByName(base, p.dim);
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return dummy ? WithDummy(prob, 1.0) : prob;
}

GridSpec OracleGrid(const ProblemSettings& p, double box_lo, double box_hi) {
  GridSpec g = GridSpec::Cube(p.dim, p.grid_lo.value_or(box_lo), p.grid_hi.value_or(box_hi),
                              p.grid_points);
  try {
    g.Validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return g;
}

std::vector<Vector> SyntheticStarts(const ExperimentConfig& c, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(c.synthetic.box_lo, c.synthetic.box_hi);
  std::vector<Vector> starts(static_cast<std::size_t>(c.synthetic.starts), Vector(c.problem.dim));
  for (auto& x : starts)
    for (auto& v : x) v = u(rng);
  return starts;
}

std::vector<SyntheticSeedResult> RunSynthetic(const ExperimentConfig& c) {
  c.Validate();
  const ProblemPtr prob = MakeProblem(c.problem);
  const GridOracle oracle(*prob, OracleGrid(c.problem, c.synthetic.box_lo, c.synthetic.box_hi));
  DescentConfig dc;
  dc.algorithm = c.synthetic.algorithm;
  dc.step = c.synthetic.step;
  dc.max_iters = c.synthetic.max_iters;
  dc.epsilon = c.ResolvedSyntheticEpsilon();
  return ForEachSeed<SyntheticSeedResult>(c.seeds, [&](std::uint64_t seed) {
    SyntheticSeedResult res;
    res.seed = seed;
    for (const Vector& x0 : SyntheticStarts(c, seed)) {
      SyntheticRun run;
      run.start = x0;
      run.trace = Run(*prob, x0, dc);
      run.verdict = oracle.Classify(run.trace.final_point(), c.problem.varepsilon);
      run.min_grad_norm = std::numeric_limits<double>::infinity();
      for (const auto& g : prob->Grad(run.trace.final_point())) {
        run.min_grad_norm = std::min(run.min_grad_norm, Norm(g));
      }
      const auto& rows = run.trace.rows;
      for (std::size_t k = 1; k < rows.size(); ++k) {
        run.max_sum_increase =
            std::max(run.max_sum_increase, SumOf(rows[k].f) - SumOf(rows[k - 1].f));
      }
      res.runs.push_back(std::move(run));
    }
    return res;
  });
}

std::unique_ptr<MultiAgentEnv> MakeEnvironment(const MarlSettings& m) {
  if (m.scenario == "matrix_game") return std::make_unique<MatrixGame>();
  try {
    return std::make_unique<GridworldEnv>(MakeScenario(m.scenario), m.horizon);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

std::vector<MarlSeedResult> RunMarl(const ExperimentConfig& c) {
  c.Validate();
  const auto env = MakeEnvironment(c.marl);
  std::vector<PolicyTable> init;
  if (!c.marl.init_logits.empty()) {
    if (c.marl.init_logits.size() != static_cast<std::size_t>(env->num_agents())) {
      throw ConfigError("init_logits needs one row per agent");
    }
    for (const Vector& row : c.marl.init_logits) {
      try {
        init.emplace_back(env->num_actions(), row);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("init_logits: ") + e.what());
      }
    }
  }
  TrainConfig tc = c.marl.train;
  tc.filter_eps = c.ResolvedMarlEpsilon();
  return ForEachSeed<MarlSeedResult>(c.seeds, [&](std::uint64_t seed) {
    TrainConfig local = tc;
    local.seed = seed;
    return MarlSeedResult{seed, Train(*env, c.marl.trainer, local, init)};
  });
}

ordered_json SyntheticSummary(const ExperimentConfig& c,
                              const std::vector<SyntheticSeedResult>& results) {
  const double eps = c.ResolvedSyntheticEpsilon();
  ordered_json j = ToJson(c);
  int runs = 0, weak_only = 0, strong_or_eps = 0, stalls = 0;
  double max_rise = 0.0;
  ordered_json per_seed = ordered_json::array();
  for (const auto& r : results) {
    int w = 0, s = 0, st = 0;
    double rise = 0.0;
    for (const auto& run : r.runs) {
      const auto& v = run.verdict;
      w += v.is_weak && !v.is_strong;
      s += v.is_strong || v.is_eps;
      st += run.min_grad_norm <= eps / 2.0;
      rise = std::max(rise, run.max_sum_increase);
    }
    per_seed.push_back({{"seed", r.seed},
                        {"runs", r.runs.size()},
                        {"weak_not_strong", w},
                        {"strong_or_eps", s},
                        {"small_gradient_stalls", st},
                        {"max_sum_increase", rise}});
    runs += static_cast<int>(r.runs.size());
    weak_only += w;
    strong_or_eps += s;
    stalls += st;
    max_rise = std::max(max_rise, rise);
  }
  j["results"] = {{"runs", runs},
                  {"weak_not_strong", weak_only},
                  {"strong_or_eps", strong_or_eps},
                  {"weak_not_strong_fraction", static_cast<double>(weak_only) / runs},
                  {"strong_or_eps_fraction", static_cast<double>(strong_or_eps) / runs},
                  {"small_gradient_stalls", stalls},
                  {"max_sum_increase", max_rise}};
  j["per_seed"] = per_seed;
  return j;
}

ordered_json MarlSummary(const ExperimentConfig& c, const std::vector<MarlSeedResult>& results) {
  ordered_json j = ToJson(c);
  const std::size_t n = results.front().trace.final_eval().mean_return.size();
  ordered_json agents = ordered_json::array();
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> finals;
    for (const auto& r : results) finals.push_back(r.trace.final_eval().mean_return[i]);
    agents.push_back({{"agent", i + 1},
                      {"mean", MeanOf(finals)},
                      {"std", PopulationStd(finals)},
                      {"per_seed", finals}});
  }
  std::vector<std::int64_t> steps;
  for (const auto& r : results) steps.push_back(r.trace.final_eval().step);
  j["final_steps"] = steps;
  j["agents"] = agents;
  return j;
}

fs::path WriteSynthetic(const ExperimentConfig& c,
                        const std::vector<SyntheticSeedResult>& results) {
  StagedDir dir(c.out_dir / c.ResolvedName());
  for (const auto& r : results) {
    const fs::path seed_dir = dir.path() / std::to_string(r.seed);
    fs::create_directories(seed_dir);
    std::vector<DescentTrace> traces;
    std::vector<VerdictRow> verdicts;
    for (std::size_t k = 0; k < r.runs.size(); ++k) {
      if (r.runs[k].trace.rows.empty()) throw std::invalid_argument("empty trace");
      traces.push_back(r.runs[k].trace);
      verdicts.push_back({"start" + std::to_string(k), r.runs[k].trace.final_point(),
                          r.runs[k].verdict});
    }
    std::ostringstream t, v;
    WriteTraceCsv(t, traces);
    WriteVerdictCsv(v, verdicts);
    WriteFile(seed_dir / "trace.csv", t.str());
    WriteFile(seed_dir / "verdicts.csv", v.str());
  }
  WriteFile(dir.path() / "summary.json", DumpJson(SyntheticSummary(c, results)));
  return dir.Commit();
}

fs::path WriteMarl(const ExperimentConfig& c, const std::vector<MarlSeedResult>& results) {
  StagedDir dir(c.out_dir / c.ResolvedName());
  for (const auto& r : results) {
    const fs::path seed_dir = dir.path() / std::to_string(r.seed);
    fs::create_directories(seed_dir);
    std::ostringstream t;
    WriteTrainingCsv(t, r.trace);
    WriteFile(seed_dir / "trace.csv", t.str());
  }
  WriteFile(dir.path() / "summary.json", DumpJson(MarlSummary(c, results)));
  return dir.Commit();
}

std::vector<Endpoint> ReadEndpoints(const fs::path& path, std::size_t dim) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trace " + path.string());
  csv::Table t;
  try {
    t = csv::Read(in);
  } catch (const csv::ParseError& e) {
    const std::string what = e.what();
    throw csv::ParseError(e.line(), what.substr(what.find(": ") + 2) + " in " + path.string());
  }
  const int start_col = t.Column("start");
  std::vector<int> x_cols;
  for (std::size_t j = 0; j < dim; ++j) {
    const int col = t.Column("x" + std::to_string(j));
    if (col < 0) throw csv::ParseError(1, "missing column x" + std::to_string(j));
    x_cols.push_back(col);
  }
  if (t.rows.empty()) throw csv::ParseError(1, "no data rows");
  // last row of each start, in order of first appearance
  std::vector<std::string> order;
  std::map<std::string, std::size_t> last;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const std::string key = start_col < 0 ? "" : t.rows[r][static_cast<std::size_t>(start_col)];
    if (!last.count(key)) order.push_back(key);
    last[key] = r;
  }
  std::vector<Endpoint> out;
  for (const auto& key : order) {
    const std::size_t r = last[key];
    Endpoint e;
    e.label = path.string() + (key.empty() ? "" : "#" + key);
    for (int col : x_cols) {
      e.x.push_back(csv::ParseDouble(t.rows[r][static_cast<std::size_t>(col)], t.line_numbers[r]));
    }
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<VerdictRow> RunVerify(const ExperimentConfig& c) {
  c.Validate();
  const ProblemPtr prob = MakeProblem(c.problem);
  std::vector<Endpoint> points;
  for (const auto& path : c.traces) {
    auto e = ReadEndpoints(path, c.problem.dim);
    points.insert(points.end(), e.begin(), e.end());
  }
  const GridOracle oracle(*prob, OracleGrid(c.problem, -10.0, 10.0));
  std::vector<VerdictRow> rows;
  for (const auto& e : points) {
    rows.push_back({e.label, e.x, oracle.Classify(e.x, c.problem.varepsilon)});
  }
  return rows;
}

fs::path WriteVerify(const ExperimentConfig& c, const std::vector<VerdictRow>& rows) {
  StagedDir dir(c.out_dir / c.ResolvedName());
  std::ostringstream v;
  WriteVerdictCsv(v, rows);
  WriteFile(dir.path() / "verdicts.csv", v.str());
  return dir.Commit();
}

}  // namespace mgda
