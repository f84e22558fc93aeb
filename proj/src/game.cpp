#include "fpgames/game.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "fpgames/rng.hpp"

namespace fpgames {

namespace {

void validate_action_counts(const std::vector<int>& counts) {
  if (counts.empty())
    throw std::invalid_argument("game needs at least one player");
  for (int c : counts)
    if (c <= 0) throw std::invalid_argument("every player needs an action");
}

void check_joint(const std::vector<int>& counts, const JointAction& joint) {
  if (joint.size() != counts.size())
    throw std::out_of_range("joint action has wrong number of players");
  for (std::size_t i = 0; i < counts.size(); ++i)
    if (joint[i] < 0 || joint[i] >= counts[i])
      throw std::out_of_range("action index out of range");
}

}  // namespace

MixedStrategy::MixedStrategy(std::vector<double> probs)
    : probs_(std::move(probs)) {
  if (probs_.empty())
    throw std::invalid_argument("mixed strategy needs at least one action");
  double sum = 0.0;
  for (double p : probs_) {
    if (!std::isfinite(p) || p < 0.0)
      throw std::invalid_argument("mixed strategy entries must be finite and nonnegative");
    sum += p;
  }
  if (std::abs(sum - 1.0) > kStrategyTolerance)
    throw std::invalid_argument("mixed strategy must sum to one");
}

MixedStrategy MixedStrategy::uniform(int num_actions) {
  if (num_actions <= 0)
    throw std::invalid_argument("uniform strategy needs at least one action");
  return MixedStrategy(
      std::vector<double>(num_actions, 1.0 / static_cast<double>(num_actions)));
}

MixedStrategy MixedStrategy::point_mass(int num_actions, int action) {
  if (action < 0 || action >= num_actions)
    throw std::invalid_argument("point mass action out of range");
  std::vector<double> p(num_actions, 0.0);
  p[action] = 1.0;
  return MixedStrategy(std::move(p));
}

StrategicFormGame::StrategicFormGame(
    std::vector<int> action_counts,
    std::function<double(int, const JointAction&)> utility)
    : action_counts_(std::move(action_counts)), utility_(std::move(utility)) {
  validate_action_counts(action_counts_);
  if (!utility_) throw std::invalid_argument("utility callback required");
}

int StrategicFormGame::num_actions(int player) const {
  if (player < 0 || player >= num_players())
    throw std::out_of_range("player index out of range");
  return action_counts_[player];
}

double StrategicFormGame::utility(int player, const JointAction& joint) const {
  if (player < 0 || player >= num_players())
    throw std::out_of_range("player index out of range");
  check_joint(action_counts_, joint);
  return utility_(player, joint);
}

double expected_utility(const StrategicFormGame& game, int player,
                        int own_action,
                        const std::vector<MixedStrategy>& opponent_strategies) {
  const int n = game.num_players();
  if (player < 0 || player >= n)
    throw std::out_of_range("player index out of range");
  if (own_action < 0 || own_action >= game.num_actions(player))
    throw std::out_of_range("action index out of range");
  if (static_cast<int>(opponent_strategies.size()) != n)
    throw std::invalid_argument("opponent profile needs one slot per player");
  for (int k = 0; k < n; ++k) {
    if (k == player) continue;
    if (opponent_strategies[k].size() != game.num_actions(k))
      throw std::invalid_argument("opponent strategy has wrong action count");
  }

  JointAction joint(n, 0);
  joint[player] = own_action;
  double total = 0.0;
  // Odometer over opponents' actions; the player's own coordinate stays put.
  while (true) {
    double prob = 1.0;
    for (int k = 0; k < n; ++k)
      if (k != player) prob *= opponent_strategies[k][joint[k]];
    if (prob > 0.0) total += prob * game.utility(player, joint);
    int k = n - 1;
    for (; k >= 0; --k) {
      if (k == player) continue;
      if (++joint[k] < game.num_actions(k)) break;
      joint[k] = 0;
    }
    if (k < 0) break;
  }
  return total;
}

WluGame::WluGame(std::vector<int> action_counts,
                 std::function<double(const JointAction&)> global_utility,
                 std::vector<int> reference_actions)
    : action_counts_(std::move(action_counts)),
      global_utility_(std::move(global_utility)),
      reference_actions_(std::move(reference_actions)) {
  validate_action_counts(action_counts_);
  if (!global_utility_) throw std::invalid_argument("global utility required");
  check_joint(action_counts_, reference_actions_);
}

int WluGame::num_actions(int player) const {
  if (player < 0 || player >= num_players())
    throw std::out_of_range("player index out of range");
  return action_counts_[player];
}

double WluGame::global_utility(const JointAction& joint) const {
  check_joint(action_counts_, joint);
  return global_utility_(joint);
}

double WluGame::payoff(int player, const JointAction& joint) const {
  if (player < 0 || player >= num_players())
    throw std::out_of_range("player index out of range");
  check_joint(action_counts_, joint);
  JointAction reference = joint;
  reference[player] = reference_actions_[player];
  return global_utility_(joint) - global_utility_(reference);
}

StrategicFormGame WluGame::induced_game() const {
  // Copy what the payoff needs so the view outlives this object.
  auto global = global_utility_;
  auto refs = reference_actions_;
  return StrategicFormGame(
      action_counts_, [global, refs](int player, const JointAction& joint) {
        JointAction reference = joint;
        reference[player] = refs[player];
        return global(joint) - global(reference);
      });
}

PotentialCheckResult check_potential_identity(
    const StrategicFormGame& game,
    const std::function<double(const JointAction&)>& potential, int samples,
    std::uint64_t seed, double tolerance) {
  if (!potential) throw std::invalid_argument("potential callback required");
  if (samples <= 0) throw std::invalid_argument("samples must be positive");

  Rng rng(stream_key({seed, 0x706f74ULL}));  // "pot"
  const int n = game.num_players();
  PotentialCheckResult result;
  result.holds = true;
  for (int s = 0; s < samples; ++s) {
    JointAction joint(n);
    for (int k = 0; k < n; ++k) joint[k] = rng.next_below(game.num_actions(k));
    const int player = rng.next_below(n);
    JointAction deviated = joint;
    deviated[player] = rng.next_below(game.num_actions(player));

    const double payoff_diff =
        game.utility(player, deviated) - game.utility(player, joint);
    const double potential_diff = potential(deviated) - potential(joint);
    const double violation = std::abs(payoff_diff - potential_diff);
    if (violation > result.max_violation) result.max_violation = violation;
  }
  result.holds = result.max_violation <= tolerance;
  return result;
}

void for_each_joint(const std::vector<int>& action_counts,
                    const std::function<void(const JointAction&)>& fn) {
  validate_action_counts(action_counts);
  const int n = static_cast<int>(action_counts.size());
  JointAction joint(n, 0);
  while (true) {
    fn(joint);
    int k = n - 1;
    while (k >= 0 && ++joint[k] == action_counts[k]) joint[k--] = 0;
    if (k < 0) break;
  }
}

}  // namespace fpgames
