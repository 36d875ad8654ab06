// mgda: run synthetic descent and multi-agent experiments, classify trace
// endpoints.
//
//   mgda run-synthetic --config cfg.json --seed 0 --seed 1 --out results
//   mgda run-marl --config door.json --algo mgpo_pp
//   mgda verify --config verify.json results/x/0/trace.csv

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "mgda/csv.hpp"
#include "mgda/experiment.hpp"

namespace {

struct Flags {
  std::string config;
  std::vector<std::uint64_t> seeds;
  std::string out;
  std::string algo;
  std::optional<double> epsilon;
  std::string name;
  std::string problem;
  std::string scenario;
  std::optional<std::int64_t> steps;
  std::vector<std::string> traces;
};

void AddCommon(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "JSON experiment config");
  cmd->add_option("--seed", f.seeds, "seed (repeatable); replaces the config list")
      ->take_all()
      ->allow_extra_args(false);
  cmd->add_option("--out", f.out, "output root directory");
  cmd->add_option("--name", f.name, "experiment name (output subdirectory)");
}

mgda::ExperimentConfig Resolve(mgda::ExperimentKind kind, const Flags& f) {
  mgda::ExperimentConfig c;
  c.kind = kind;
  if (!f.config.empty()) c = mgda::LoadConfig(f.config, kind);
  if (!f.seeds.empty()) c.seeds = f.seeds;
  if (!f.out.empty()) c.out_dir = f.out;
  if (!f.name.empty()) c.name = f.name;
  if (!f.problem.empty()) c.problem.problem = f.problem;
  if (!f.scenario.empty()) c.marl.scenario = f.scenario;
  if (kind == mgda::ExperimentKind::kSynthetic) {
    if (!f.algo.empty()) {
      auto a = mgda::ParseAlgorithm(f.algo);
      if (!a) throw mgda::ConfigError("unknown algorithm '" + f.algo + "'");
      c.synthetic.algorithm = *a;
    }
    if (f.epsilon) c.synthetic.epsilon = f.epsilon;
  }
  if (kind == mgda::ExperimentKind::kMarl) {
    if (!f.algo.empty()) {
      auto t = mgda::ParseTrainer(f.algo);
      if (!t) throw mgda::ConfigError("unknown algorithm '" + f.algo + "'");
      c.marl.trainer = *t;
    }
    if (f.epsilon) c.marl.epsilon = f.epsilon;
    if (f.steps) c.marl.train.total_steps = *f.steps;
  }
  for (const auto& t : f.traces) c.traces.emplace_back(t);
  c.Validate();
  return c;
}

int Execute(mgda::ExperimentKind kind, const mgda::ExperimentConfig& c) {
  std::filesystem::path dir;
  switch (kind) {
    case mgda::ExperimentKind::kSynthetic: {
      auto res = mgda::RunSynthetic(c);
      dir = mgda::WriteSynthetic(c, res);
      auto s = mgda::SyntheticSummary(c, res)["results"];
      std::printf("%s: %d runs, %d weak-not-strong, %d strong-or-eps\n", c.ResolvedName().c_str(),
                  s["runs"].get<int>(), s["weak_not_strong"].get<int>(),
                  s["strong_or_eps"].get<int>());
      break;
    }
    case mgda::ExperimentKind::kMarl: {
      auto res = mgda::RunMarl(c);
      dir = mgda::WriteMarl(c, res);
      auto s = mgda::MarlSummary(c, res);
      std::printf("%s\n", c.ResolvedName().c_str());
      for (const auto& a : s["agents"]) {
        std::printf("  agent %d: %.2f +- %.2f\n", a["agent"].get<int>(), a["mean"].get<double>(),
                    a["std"].get<double>());
      }
      break;
    }
    case mgda::ExperimentKind::kVerify: {
      auto rows = mgda::RunVerify(c);
      dir = mgda::WriteVerify(c, rows);
      int strong = 0;
      for (const auto& r : rows) strong += r.verdict.is_strong;
      std::printf("%zu endpoints, %d strong\n", rows.size(), strong);
      break;
    }
  }
  std::printf("wrote %s\n", dir.string().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-objective descent and multi-agent policy optimisation experiments"};
  app.require_subcommand(1);
  Flags f;

  auto* syn = app.add_subcommand("run-synthetic", "descent runs from random starts + oracle verdicts");
  AddCommon(syn, f);
  syn->add_option("--algo", f.algo, "mgda | mgda_pp");
  syn->add_option("--epsilon", f.epsilon, "gradient-norm filter threshold");
  syn->add_option("--problem", f.problem, "clamped_norm | quadratic_pair [+dummy]");

  auto* marl = app.add_subcommand("run-marl", "train agents on a gridworld or the matrix game");
  AddCommon(marl, f);
  marl->add_option("--algo", f.algo, "independent | mgpo | mgpo_pp");
  marl->add_option("--epsilon", f.epsilon, "head filter threshold");
  marl->add_option("--scenario", f.scenario, "door | dead_end | two_corridors | two_rooms | matrix_game");
  marl->add_option("--steps", f.steps, "total environment steps");

  auto* ver = app.add_subcommand("verify", "classify the endpoints of stored descent traces");
  AddCommon(ver, f);
  ver->add_option("--problem", f.problem, "problem the traces were produced on");
  ver->add_option("traces", f.traces, "trace.csv files (appended to the config list)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  mgda::ExperimentKind kind = mgda::ExperimentKind::kSynthetic;
  CLI::App* cmd = syn;
  if (marl->parsed()) kind = mgda::ExperimentKind::kMarl, cmd = marl;
  if (ver->parsed()) kind = mgda::ExperimentKind::kVerify, cmd = ver;

  mgda::ExperimentConfig config;
  try {
    config = Resolve(kind, f);
  } catch (const mgda::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << cmd->help();
    return 2;
  }
  try {
    return Execute(kind, config);
  } catch (const mgda::csv::ParseError& e) {
    std::cerr << "error: malformed csv, " << e.what() << "\n";
    return 1;
  } catch (const mgda::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << cmd->help();
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
