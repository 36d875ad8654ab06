#ifndef MGDA_GRIDWORLD_HPP_
#define MGDA_GRIDWORLD_HPP_

#include <compare>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mgda/linalg.hpp"

namespace mgda {

/// Episodic multi-agent environment with per-agent rewards. States are
/// exposed as opaque 64-bit keys for tabular learners.
class MultiAgentEnv {
 public:
  struct Step {
    std::uint64_t state = 0;
    Vector rewards;
    bool done = false;
  };

  virtual ~MultiAgentEnv() = default;

  virtual int num_agents() const = 0;
  virtual int num_actions() const = 0;
  virtual std::uint64_t Reset() = 0;
  virtual Step Act(std::span<const int> actions) = 0;
  virtual std::unique_ptr<MultiAgentEnv> Clone() const = 0;
};

struct Cell {
  int x = 0;
  int y = 0;
  auto operator<=>(const Cell&) const = default;
};

/// Stay comes first so that greedy tie-breaking (lowest index) never walks
/// into a wall from an unvisited state.
enum class Action : int { kStay = 0, kUp, kDown, kLeft, kRight };
inline constexpr int kNumGridActions = 5;

inline constexpr double kGoalReward = 10.0;
inline constexpr double kCollisionPenalty = -0.1;
inline constexpr int kDefaultHorizon = 64;

struct GridLayout {
  struct Door {
    Cell cell;
    char color = 'a';
    bool operator==(const Door&) const = default;
  };
  struct Key {
    Cell cell;
    char color = 'a';
    bool operator==(const Key&) const = default;
  };

  int width = 0;
  int height = 0;
  std::vector<bool> walls;  // row-major
  std::vector<Door> doors;
  std::vector<Key> keys;
  std::vector<Cell> goals;   // goals[i] belongs to agent i
  std::vector<Cell> spawns;  // spawns[i] belongs to agent i

  int num_agents() const { return static_cast<int>(spawns.size()); }
  bool InBounds(Cell c) const { return c.x >= 0 && c.y >= 0 && c.x < width && c.y < height; }
  bool IsWall(Cell c) const { return walls[static_cast<std::size_t>(c.y * width + c.x)]; }
  int CellIndex(Cell c) const { return c.y * width + c.x; }

  /// Throws std::invalid_argument when a referenced cell is out of bounds or
  /// a wall, spawns collide, an agent lacks exactly one goal, or a door
  /// color has no key.
  void Validate() const;

  bool operator==(const GridLayout&) const = default;
};

/// Parses the ASCII map format: `#` wall, `.` floor, `1`-`4` spawn of agent
/// i, `G1`-`G4` goal of agent i, `Da` door of color a, `Ka` key of color a.
/// Whitespace between tokens is ignored; every row must have the same width.
GridLayout ParseMap(std::string_view text);
GridLayout LoadMapFile(const std::string& path);

std::vector<std::string> ScenarioNames();
/// ASCII source of a built-in scenario; throws std::invalid_argument for
/// unknown names.
std::string_view ScenarioMap(const std::string& name);
GridLayout MakeScenario(const std::string& name);

struct EnvState {
  std::vector<Cell> positions;
  std::vector<bool> reached;
  int step = 0;

  bool operator==(const EnvState&) const = default;
};

struct JointStep {
  std::vector<Action> actions;
  Vector rewards;
  bool done = false;
};

/// Deterministic gridworld dynamics. A door is passable during a step iff
/// some agent stood on a key of the same color when the step began.
/// Simultaneous moves: a move is rejected (agent stays, -0.1) when it hits
/// a wall, the border or a closed door, targets a cell held by an agent that
/// does not move, targets the same cell as another mover, or swaps with
/// another mover. Rejections propagate until the joint move is consistent.
class Gridworld {
 public:
  explicit Gridworld(GridLayout layout, int horizon = kDefaultHorizon);

  const GridLayout& layout() const { return layout_; }
  int horizon() const { return horizon_; }

  /// Spawn positions, cleared goal flags, step 0. The seed is unused: the
  /// layout fixes the initial state.
  EnvState Reset(std::uint64_t seed = 0) const;
  JointStep Step(EnvState& state, std::span<const Action> actions) const;

  bool DoorOpen(const EnvState& state, std::size_t door) const;
  std::uint64_t StateKey(const EnvState& state) const;
  std::string Render(const EnvState& state) const;

 private:
  GridLayout layout_;
  int horizon_;
};

/// Stateful adapter around Gridworld.
class GridworldEnv final : public MultiAgentEnv {
 public:
  explicit GridworldEnv(GridLayout layout, int horizon = kDefaultHorizon);

  int num_agents() const override { return world_.layout().num_agents(); }
  int num_actions() const override { return kNumGridActions; }
  std::uint64_t Reset() override;
  Step Act(std::span<const int> actions) override;
  std::unique_ptr<MultiAgentEnv> Clone() const override;

  const Gridworld& world() const { return world_; }
  const EnvState& state() const { return state_; }

 private:
  Gridworld world_;
  EnvState state_;
};

/// One-shot 2x2 game; action 0 is A, 1 is B. Payoffs (agent 1, agent 2):
/// (A,A) -> (1,2), (A,B) -> (0,2), (B,A) -> (1,0), (B,B) -> (0,0).
/// Each agent's reward depends only on the other agent's action.
class MatrixGame final : public MultiAgentEnv {
 public:
  static Vector Payoff(int a1, int a2);

  int num_agents() const override { return 2; }
  int num_actions() const override { return 2; }
  std::uint64_t Reset() override { return 0; }
  Step Act(std::span<const int> actions) override;
  std::unique_ptr<MultiAgentEnv> Clone() const override {
    return std::make_unique<MatrixGame>();
  }
};

}  // namespace mgda

#endif  // MGDA_GRIDWORLD_HPP_
