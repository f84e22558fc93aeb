#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "fpgames/beliefs.hpp"
#include "fpgames/game.hpp"

namespace fpgames {

enum class Algorithm { kClassic, kStochastic, kGeometric, kAfffp };

std::string algorithm_name(Algorithm algorithm);
Algorithm parse_algorithm(const std::string& name);

// Expected payoffs an agent needs to pick an action. Implementations may
// enumerate a payoff table or evaluate a closed form; either way the contract
// is the same: fill `out[a]` with the expected payoff of own action `a` given
// independent beliefs about the other players (the player's own slot in
// `beliefs` is ignored).
class UtilityModel {
 public:
  virtual ~UtilityModel() = default;

  virtual int num_players() const = 0;
  virtual int num_actions(int player) const = 0;
  virtual void expected_utilities(int player,
                                  const std::vector<MixedStrategy>& beliefs,
                                  std::vector<double>& out) const = 0;
  virtual double global_utility(const JointAction& joint) const = 0;
};

// UtilityModel over an explicit strategic-form game plus a global objective;
// expected payoffs are computed by exact enumeration, so this is for small
// games only.
class MatrixGameModel : public UtilityModel {
 public:
  MatrixGameModel(StrategicFormGame game,
                  std::function<double(const JointAction&)> global_utility);
  // WLU view: per-player payoffs are the shaped utilities, the global
  // objective is the game's own.
  explicit MatrixGameModel(const WluGame& game);

  int num_players() const override { return game_.num_players(); }
  int num_actions(int player) const override {
    return game_.num_actions(player);
  }
  void expected_utilities(int player,
                          const std::vector<MixedStrategy>& beliefs,
                          std::vector<double>& out) const override;
  double global_utility(const JointAction& joint) const override;

 private:
  StrategicFormGame game_;
  std::function<double(const JointAction&)> global_utility_;
};

struct RunConfig {
  Algorithm algorithm = Algorithm::kAfffp;
  int steps = 1000;
  // Logit temperature for the smooth decision rules (stochastic, geometric,
  // AFFFP); classic plays exact best responses and ignores it.
  double temperature = 1.0;
  // Geometric belief step size.
  double geometric_step = 0.1;
  // AFFFP parameters.
  double learning_rate = 1e-4;
  double initial_lambda = 0.8;
  LambdaBounds lambda_bounds{};
  std::uint64_t seed = 0;
  // Record the per-pair forgetting factors each step (AFFFP only).
  bool record_lambdas = false;
  // When nonempty, record the probability the players' decision
  // distributions jointly assign to this joint action at every step.
  JointAction tracked_joint;
};

// Everything one negotiation episode produced. Vectors indexed by step
// (0-based storage for steps 1..steps).
struct NegotiationTrace {
  std::vector<JointAction> joint_actions;
  std::vector<double> global_utilities;
  // steps x (num_players * (num_players - 1)) when recorded: observer-major,
  // opponents in increasing index order with the observer skipped.
  std::vector<std::vector<double>> lambdas;
  // Probability of RunConfig::tracked_joint under each step's decision
  // distributions (empty unless tracking was requested).
  std::vector<double> tracked_probability;
  JointAction final_joint;
  double mean_global_utility = 0.0;
};

// Runs one episode: every player keeps one belief per opponent, picks actions
// simultaneously from expected utilities under those beliefs, then all
// beliefs are updated with the observed actions. Bitwise deterministic given
// (config, seed). Failures surface as RunError tagged with the step index.
NegotiationTrace run_episode(const UtilityModel& model,
                             const RunConfig& config);

struct ReplicationSummary {
  std::vector<double> mean_payoffs;  // per replication
  double overall_mean = 0.0;
  double overall_stddev = 0.0;  // sample standard deviation across replications
};

using ModelFactory =
    std::function<std::unique_ptr<UtilityModel>(int replication)>;

// Runs independent replications; replication r uses seed config.seed ^ r.
// Work may be split across threads; results are keyed by replication index,
// so the summary does not depend on the thread count.
ReplicationSummary run_replications(const UtilityModel& model,
                                    const RunConfig& config, int replications,
                                    int threads = 1);
ReplicationSummary run_replications(const ModelFactory& factory,
                                    const RunConfig& config, int replications,
                                    int threads = 1);

}  // namespace fpgames
