#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace fpgames {

// One action index per player, ordered by player index.
using JointAction = std::vector<int>;

// Tolerance for probability-vector normalization checks.
inline constexpr double kStrategyTolerance = 1e-9;

// Probability distribution over one player's actions. Every construction path
// validates: entries finite and nonnegative, sum within kStrategyTolerance of
// one. A default-constructed instance is empty and acts as a placeholder for
// "no distribution" (e.g. a player's own slot in an opponent profile).
class MixedStrategy {
 public:
  MixedStrategy() = default;
  explicit MixedStrategy(std::vector<double> probs);

  static MixedStrategy uniform(int num_actions);
  static MixedStrategy point_mass(int num_actions, int action);

  int size() const { return static_cast<int>(probs_.size()); }
  bool empty() const { return probs_.empty(); }
  double operator[](int action) const { return probs_[action]; }
  const std::vector<double>& probs() const { return probs_; }

 private:
  std::vector<double> probs_;
};

// Finite n-player game in strategic form. Payoffs are supplied by a callback
// so large games (e.g. 30 players) never materialize a tensor; small games
// can wrap a table in the callback.
class StrategicFormGame {
 public:
  StrategicFormGame(std::vector<int> action_counts,
                    std::function<double(int, const JointAction&)> utility);

  int num_players() const { return static_cast<int>(action_counts_.size()); }
  int num_actions(int player) const;
  const std::vector<int>& action_counts() const { return action_counts_; }

  // Payoff to `player` under the joint action; range-checks both.
  double utility(int player, const JointAction& joint) const;

 private:
  std::vector<int> action_counts_;
  std::function<double(int, const JointAction&)> utility_;
};

// Expected payoff to `player` for playing `own_action` while every other
// player randomizes independently. `opponent_strategies` holds one entry per
// player; the player's own slot is ignored (may be empty). Exact enumeration
// over all opponent joint actions, so only suitable for small games.
double expected_utility(const StrategicFormGame& game, int player,
                        int own_action,
                        const std::vector<MixedStrategy>& opponent_strategies);

// Wonderful-life utility shaped from a global objective: each player's payoff
// is the global score minus the score with that player's action replaced by a
// fixed per-player reference action. Unilateral payoff differences then equal
// global-objective differences exactly, so the global objective is an exact
// potential for the induced game.
class WluGame {
 public:
  WluGame(std::vector<int> action_counts,
          std::function<double(const JointAction&)> global_utility,
          std::vector<int> reference_actions);

  int num_players() const { return static_cast<int>(action_counts_.size()); }
  int num_actions(int player) const;
  const std::vector<int>& action_counts() const { return action_counts_; }
  const std::vector<int>& reference_actions() const { return reference_actions_; }

  double global_utility(const JointAction& joint) const;

  // u_g(joint) - u_g(joint with player's action set to its reference action).
  // Identically zero whenever the player already plays the reference action.
  double payoff(int player, const JointAction& joint) const;

  // View of this game as a StrategicFormGame with WLU payoffs.
  StrategicFormGame induced_game() const;

 private:
  std::vector<int> action_counts_;
  std::function<double(const JointAction&)> global_utility_;
  std::vector<int> reference_actions_;
};

struct PotentialCheckResult {
  bool holds = false;
  double max_violation = 0.0;
};

// Samples unilateral deviations and compares payoff differences against
// potential differences. `holds` iff the largest observed mismatch is within
// tolerance. Sampling is seeded and deterministic.
PotentialCheckResult check_potential_identity(
    const StrategicFormGame& game,
    const std::function<double(const JointAction&)>& potential, int samples,
    std::uint64_t seed, double tolerance = 1e-9);

// Visits every joint action of a small game: calls fn(joint) for each joint
// in lexicographic order (last player's index varies fastest).
void for_each_joint(const std::vector<int>& action_counts,
                    const std::function<void(const JointAction&)>& fn);

}  // namespace fpgames
