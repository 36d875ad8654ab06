#include "mgda/gridworld.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace mgda {
namespace {

constexpr std::string_view kDoorMap = R"(
# # # # # # #
# 1 . Da . G1 #
# # # # # # #
# 2 . . Ka # G2
# # # # # # #
)";

constexpr std::string_view kDeadEndMap = R"(
# # # # # # # # #
# 1 2 . 3 . 4 G1 #
# # . # . # . # #
# G2 # G3 # G4 # # #
)";

constexpr std::string_view kTwoCorridorsMap = R"(
# # # # # # # # # # #
# 1 . . . G1 # # # # #
# # # # # # # # # # #
# 2 . . . . . . . G2 #
# # # # # # # # # # #
)";

constexpr std::string_view kTwoRoomsMap = R"(
# # # # # # # # # # #
# . 1 # G1 # G2 # . 2 #
# . . Da . . . Db . . #
# Kb # # # Ka # # # # #
)";

struct Scenario {
  std::string_view name;
  std::string_view map;
};

constexpr Scenario kScenarios[] = {
    {"door", kDoorMap},
    {"dead_end", kDeadEndMap},
    {"two_corridors", kTwoCorridorsMap},
    {"two_rooms", kTwoRoomsMap},
};

constexpr Cell kDeltas[kNumGridActions] = {{0, 0}, {0, -1}, {0, 1}, {-1, 0}, {1, 0}};

[[noreturn]] void Fail(const std::string& msg) { throw std::invalid_argument("map: " + msg); }

bool IsAgentDigit(char c) { return c >= '1' && c <= '4'; }
bool IsColor(char c) { return c >= 'a' && c <= 'z'; }

}  // namespace

void GridLayout::Validate() const {
  if (width <= 0 || height <= 0) Fail("empty grid");
  if (walls.size() != static_cast<std::size_t>(width * height)) Fail("wall mask size mismatch");
  if (spawns.empty()) Fail("no agents");
  if (goals.size() != spawns.size()) Fail("each agent needs exactly one goal");
  if (spawns.size() > 4) Fail("at most 4 agents");
  auto check_cell = [&](Cell c, const char* what) {
    if (!InBounds(c)) Fail(std::string(what) + " out of bounds");
    if (IsWall(c)) Fail(std::string(what) + " on a wall");
  };
  for (std::size_t i = 0; i < spawns.size(); ++i) {
    check_cell(spawns[i], "spawn");
    check_cell(goals[i], "goal");
    for (std::size_t k = 0; k < i; ++k) {
      if (spawns[k] == spawns[i]) Fail("spawns collide");
    }
  }
  for (const Key& k : keys) check_cell(k.cell, "key");
  for (const Door& d : doors) {
    check_cell(d.cell, "door");
    bool has_key = std::any_of(keys.begin(), keys.end(),
                               [&](const Key& k) { return k.color == d.color; });
    if (!has_key) Fail(std::string("door color '") + d.color + "' has no key");
  }
}

GridLayout ParseMap(std::string_view text) {
  GridLayout g;
  std::map<int, Cell> spawns;
  std::map<int, Cell> goals;
  std::vector<std::vector<bool>> rows;
  std::size_t pos = 0;
  int y = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    std::vector<bool> row;
    for (std::size_t i = 0; i < line.size(); ++i) {
      char c = line[i];
      if (c == ' ' || c == '\t' || c == '\r') continue;
      Cell cell{static_cast<int>(row.size()), y};
      char next = i + 1 < line.size() ? line[i + 1] : '\0';
      if (c == '#') {
        row.push_back(true);
        continue;
      }
      row.push_back(false);
      if (c == '.') continue;
      if (IsAgentDigit(c)) {
        if (!spawns.emplace(c - '1', cell).second) Fail(std::string("duplicate spawn ") + c);
      } else if (c == 'G' && IsAgentDigit(next)) {
        if (!goals.emplace(next - '1', cell).second) Fail(std::string("duplicate goal G") + next);
        ++i;
      } else if (c == 'D' && IsColor(next)) {
        g.doors.push_back({cell, next});
        ++i;
      } else if (c == 'K' && IsColor(next)) {
        g.keys.push_back({cell, next});
        ++i;
      } else {
        Fail("bad token at row " + std::to_string(y + 1) + ": '" + std::string(1, c) + "'");
      }
    }
    if (row.empty()) continue;
    if (!rows.empty() && row.size() != rows.front().size()) {
      Fail("row " + std::to_string(y + 1) + " has width " + std::to_string(row.size()) +
           ", expected " + std::to_string(rows.front().size()));
    }
    rows.push_back(std::move(row));
    ++y;
  }
  if (rows.empty()) Fail("empty map");
  g.height = static_cast<int>(rows.size());
  g.width = static_cast<int>(rows.front().size());
  for (const auto& r : rows) g.walls.insert(g.walls.end(), r.begin(), r.end());
  for (int i = 0; i < static_cast<int>(spawns.size()); ++i) {
    auto s = spawns.find(i);
    if (s == spawns.end()) Fail("agent ids must be contiguous from 1");
    g.spawns.push_back(s->second);
    auto goal = goals.find(i);
    if (goal == goals.end()) Fail("agent " + std::to_string(i + 1) + " has no goal");
    g.goals.push_back(goal->second);
  }
  if (goals.size() != spawns.size()) Fail("goal without agent");
  g.Validate();
  return g;
}

GridLayout LoadMapFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open map file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseMap(ss.str());
}

std::vector<std::string> ScenarioNames() {
  std::vector<std::string> out;
  for (const Scenario& s : kScenarios) out.emplace_back(s.name);
  return out;
}

std::string_view ScenarioMap(const std::string& name) {
  for (const Scenario& s : kScenarios) {
    if (s.name == name) return s.map;
  }
  throw std::invalid_argument("unknown scenario: " + name);
}

GridLayout MakeScenario(const std::string& name) { return ParseMap(ScenarioMap(name)); }

Gridworld::Gridworld(GridLayout layout, int horizon) : layout_(std::move(layout)), horizon_(horizon) {
  layout_.Validate();
  if (horizon_ <= 0) throw std::invalid_argument("horizon must be positive");
  if (layout_.width * layout_.height > 256) throw std::invalid_argument("grid too large for state keys");
}

EnvState Gridworld::Reset(std::uint64_t) const {
  EnvState s;
  s.positions = layout_.spawns;
  s.reached.assign(layout_.spawns.size(), false);
  s.step = 0;
  return s;
}

bool Gridworld::DoorOpen(const EnvState& state, std::size_t door) const {
  char color = layout_.doors[door].color;
  for (const auto& k : layout_.keys) {
    if (k.color != color) continue;
    for (Cell p : state.positions) {
      if (p == k.cell) return true;
    }
  }
  return false;
}

JointStep Gridworld::Step(EnvState& state, std::span<const Action> actions) const {
  const std::size_t n = state.positions.size();
  if (actions.size() != n) throw std::invalid_argument("one action per agent required");
  JointStep out;
  out.actions.assign(actions.begin(), actions.end());
  out.rewards.assign(n, 0.0);

  std::vector<bool> closed(layout_.width * layout_.height, false);
  for (std::size_t d = 0; d < layout_.doors.size(); ++d) {
    if (!DoorOpen(state, d)) closed[layout_.CellIndex(layout_.doors[d].cell)] = true;
  }

  std::vector<Cell> target(n);
  std::vector<bool> moving(n, false);
  std::vector<bool> rejected(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    int a = static_cast<int>(actions[i]);
    if (a < 0 || a >= kNumGridActions) throw std::invalid_argument("invalid action");
    Cell p = state.positions[i];
    target[i] = p;
    if (a == static_cast<int>(Action::kStay)) continue;
    Cell t{p.x + kDeltas[a].x, p.y + kDeltas[a].y};
    if (!layout_.InBounds(t) || layout_.IsWall(t) || closed[layout_.CellIndex(t)]) {
      rejected[i] = true;
      continue;
    }
    target[i] = t;
    moving[i] = true;
  }

  auto reject = [&](std::size_t i) {
    moving[i] = false;
    rejected[i] = true;
    target[i] = state.positions[i];
  };
  for (bool changed = true; changed;) {
    std::vector<bool> bad(n, false);
    for (std::size_t i = 0; i < n; ++i) {
      if (!moving[i]) continue;
      for (std::size_t k = 0; k < n && !bad[i]; ++k) {
        if (k == i) continue;
        if (!moving[k] && state.positions[k] == target[i]) bad[i] = true;
        if (moving[k] && target[k] == target[i]) bad[i] = true;
        if (moving[k] && target[k] == state.positions[i] && target[i] == state.positions[k]) bad[i] = true;
      }
    }
    changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (bad[i]) {
        reject(i);
        changed = true;
      }
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    state.positions[i] = target[i];
    if (rejected[i]) out.rewards[i] += kCollisionPenalty;
    if (!state.reached[i] && state.positions[i] == layout_.goals[i]) {
      state.reached[i] = true;
      out.rewards[i] += kGoalReward;
    }
  }
  ++state.step;
  bool all = std::all_of(state.reached.begin(), state.reached.end(), [](bool b) { return b; });
  out.done = all || state.step >= horizon_;
  return out;
}

std::uint64_t Gridworld::StateKey(const EnvState& state) const {
  std::uint64_t key = 0;
  for (std::size_t i = 0; i < state.positions.size(); ++i) {
    key |= static_cast<std::uint64_t>(layout_.CellIndex(state.positions[i])) << (8 * i);
    if (state.reached[i]) key |= std::uint64_t{1} << (32 + i);
  }
  return key;
}

std::string Gridworld::Render(const EnvState& state) const {
  std::string out;
  for (int y = 0; y < layout_.height; ++y) {
    for (int x = 0; x < layout_.width; ++x) {
      Cell c{x, y};
      char ch = layout_.IsWall(c) ? '#' : '.';
      for (const auto& k : layout_.keys) {
        if (k.cell == c) ch = 'k';
      }
      for (std::size_t d = 0; d < layout_.doors.size(); ++d) {
        if (layout_.doors[d].cell == c) ch = DoorOpen(state, d) ? '_' : 'D';
      }
      for (std::size_t i = 0; i < layout_.goals.size(); ++i) {
        if (layout_.goals[i] == c) ch = 'g';
      }
      for (std::size_t i = 0; i < state.positions.size(); ++i) {
        if (state.positions[i] == c) ch = static_cast<char>('1' + i);
      }
      out += ch;
    }
    out += '\n';
  }
  return out;
}

GridworldEnv::GridworldEnv(GridLayout layout, int horizon)
    : world_(std::move(layout), horizon), state_(world_.Reset()) {}

std::uint64_t GridworldEnv::Reset() {
  state_ = world_.Reset();
  return world_.StateKey(state_);
}

MultiAgentEnv::Step GridworldEnv::Act(std::span<const int> actions) {
  std::vector<Action> acts;
  acts.reserve(actions.size());
  for (int a : actions) acts.push_back(static_cast<Action>(a));
  JointStep js = world_.Step(state_, acts);
  return {world_.StateKey(state_), std::move(js.rewards), js.done};
}

std::unique_ptr<MultiAgentEnv> GridworldEnv::Clone() const {
  return std::make_unique<GridworldEnv>(*this);
}

Vector MatrixGame::Payoff(int a1, int a2) {
  if (a1 < 0 || a1 > 1 || a2 < 0 || a2 > 1) throw std::invalid_argument("matrix game action must be 0 or 1");
  return {a2 == 0 ? 1.0 : 0.0, a1 == 0 ? 2.0 : 0.0};
}

MultiAgentEnv::Step MatrixGame::Act(std::span<const int> actions) {
  if (actions.size() != 2) throw std::invalid_argument("matrix game needs two actions");
  return {0, Payoff(actions[0], actions[1]), true};
}

}  // namespace mgda
