#include "fpgames/negotiation.hpp"

#include <cmath>
#include <stdexcept>
#include <thread>
#include <utility>
#include <variant>

#include "fpgames/decision.hpp"
#include "fpgames/errors.hpp"
#include "fpgames/rng.hpp"

namespace fpgames {

namespace {

// Stream tag for per-step per-player action draws.
constexpr std::uint64_t kActionTag = 0x616374;  // "act"

using OpponentBelief =
    std::variant<ClassicFpBelief, GeometricFpBelief, AfffpBelief>;

OpponentBelief make_belief(const RunConfig& config, int num_actions) {
  switch (config.algorithm) {
    case Algorithm::kClassic:
    case Algorithm::kStochastic:
      return ClassicFpBelief(num_actions);
    case Algorithm::kGeometric:
      return GeometricFpBelief(num_actions, config.geometric_step);
    case Algorithm::kAfffp:
      return AfffpBelief(num_actions, config.learning_rate,
                         config.initial_lambda, config.lambda_bounds);
  }
  throw std::invalid_argument("unknown algorithm");
}

MixedStrategy belief_strategy(const OpponentBelief& belief) {
  return std::visit([](const auto& b) { return b.strategy(); }, belief);
}

void belief_update(OpponentBelief& belief, int observed) {
  std::visit([observed](auto& b) { b.update(observed); }, belief);
}

// Decision distribution for probability accounting: the smooth rules use
// their logit distribution, classic uses the uniform-over-ties distribution
// its tie-broken argmax samples from.
MixedStrategy tie_uniform_distribution(const std::vector<double>& values) {
  double best = values[0];
  for (double v : values)
    if (v > best) best = v;
  int num_tied = 0;
  for (double v : values)
    if (v >= best - kTieTolerance) ++num_tied;
  std::vector<double> probs(values.size(), 0.0);
  for (std::size_t a = 0; a < values.size(); ++a)
    if (values[a] >= best - kTieTolerance)
      probs[a] = 1.0 / static_cast<double>(num_tied);
  return MixedStrategy(std::move(probs));
}

}  // namespace

std::string algorithm_name(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kClassic: return "classic";
    case Algorithm::kStochastic: return "stochastic";
    case Algorithm::kGeometric: return "geometric";
    case Algorithm::kAfffp: return "afffp";
  }
  throw std::invalid_argument("unknown algorithm");
}

Algorithm parse_algorithm(const std::string& name) {
  if (name == "classic") return Algorithm::kClassic;
  if (name == "stochastic") return Algorithm::kStochastic;
  if (name == "geometric") return Algorithm::kGeometric;
  if (name == "afffp") return Algorithm::kAfffp;
  throw std::invalid_argument("unknown algorithm '" + name + "'");
}

MatrixGameModel::MatrixGameModel(
    StrategicFormGame game,
    std::function<double(const JointAction&)> global_utility)
    : game_(std::move(game)), global_utility_(std::move(global_utility)) {
  if (!global_utility_)
    throw std::invalid_argument("global utility callback required");
}

MatrixGameModel::MatrixGameModel(const WluGame& game)
    : game_(game.induced_game()),
      global_utility_([game](const JointAction& joint) {
        return game.global_utility(joint);
      }) {}

void MatrixGameModel::expected_utilities(
    int player, const std::vector<MixedStrategy>& beliefs,
    std::vector<double>& out) const {
  out.resize(game_.num_actions(player));
  for (int a = 0; a < game_.num_actions(player); ++a)
    out[a] = expected_utility(game_, player, a, beliefs);
}

double MatrixGameModel::global_utility(const JointAction& joint) const {
  return global_utility_(joint);
}

NegotiationTrace run_episode(const UtilityModel& model,
                             const RunConfig& config) {
  if (config.steps <= 0) throw std::invalid_argument("steps must be positive");
  const int n = model.num_players();
  if (!config.tracked_joint.empty() &&
      static_cast<int>(config.tracked_joint.size()) != n)
    throw std::invalid_argument("tracked joint action has wrong size");

  const bool track_lambdas =
      config.record_lambdas && config.algorithm == Algorithm::kAfffp;
  const bool smooth = config.algorithm != Algorithm::kClassic;

  // beliefs[i][k]: player i's belief about player k; the own slot exists but
  // is never touched, which keeps indexing uniform.
  std::vector<std::vector<OpponentBelief>> beliefs;
  beliefs.reserve(n);
  for (int i = 0; i < n; ++i) {
    std::vector<OpponentBelief> row;
    row.reserve(n);
    for (int k = 0; k < n; ++k)
      row.push_back(make_belief(config, model.num_actions(k)));
    beliefs.push_back(std::move(row));
  }

  NegotiationTrace trace;
  trace.joint_actions.reserve(config.steps);
  trace.global_utilities.reserve(config.steps);
  if (track_lambdas) trace.lambdas.reserve(config.steps);
  if (!config.tracked_joint.empty())
    trace.tracked_probability.reserve(config.steps);

  std::vector<MixedStrategy> profile(n);
  std::vector<double> values;
  JointAction joint(n);
  double utility_sum = 0.0;

  for (int t = 1; t <= config.steps; ++t) {
    try {
      double tracked_prob = 1.0;
      // Simultaneous selection: all picks use the beliefs from step t - 1.
      for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k)
          profile[k] = (k == i) ? MixedStrategy()
                                : belief_strategy(beliefs[i][k]);
        model.expected_utilities(i, profile, values);
        Rng rng(stream_key({config.seed, kActionTag,
                            static_cast<std::uint64_t>(t),
                            static_cast<std::uint64_t>(i)}));
        if (smooth) {
          MixedStrategy dist = logit_distribution(values, config.temperature);
          joint[i] = sample_index(dist, rng);
          if (!config.tracked_joint.empty())
            tracked_prob *= dist[config.tracked_joint[i]];
        } else {
          if (!config.tracked_joint.empty()) {
            MixedStrategy dist = tie_uniform_distribution(values);
            tracked_prob *= dist[config.tracked_joint[i]];
          }
          joint[i] = argmax_uniform_ties(values, rng);
        }
      }

      trace.joint_actions.push_back(joint);
      const double u = model.global_utility(joint);
      utility_sum += u;
      trace.global_utilities.push_back(u);
      if (!config.tracked_joint.empty())
        trace.tracked_probability.push_back(tracked_prob);

      // Everyone observes the realized joint action.
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k)
          if (k != i) belief_update(beliefs[i][k], joint[k]);

      if (track_lambdas) {
        std::vector<double> row;
        row.reserve(static_cast<std::size_t>(n) * (n - 1));
        for (int i = 0; i < n; ++i)
          for (int k = 0; k < n; ++k)
            if (k != i)
              row.push_back(std::get<AfffpBelief>(beliefs[i][k])
                                .forgetting_factor());
        trace.lambdas.push_back(std::move(row));
      }
    } catch (const NumericalError& e) {
      throw RunError("step " + std::to_string(t) + ": " + e.what());
    }
  }

  trace.final_joint = trace.joint_actions.back();
  trace.mean_global_utility = utility_sum / config.steps;
  return trace;
}

namespace {

// Backs both public overloads: `shared` non-null means the factory is
// ignored and every replication runs the same const model.
ReplicationSummary run_replications_impl(const ModelFactory& factory,
                                         const RunConfig& config,
                                         int replications, int threads,
                                         const UtilityModel* shared) {
  if (replications <= 0)
    throw std::invalid_argument("replications must be positive");
  if (threads <= 0) threads = 1;

  ReplicationSummary summary;
  summary.mean_payoffs.assign(replications, 0.0);
  std::vector<std::string> failures(replications);

  auto run_range = [&](int begin, int end) {
    for (int r = begin; r < end; ++r) {
      try {
        RunConfig rep_config = config;
        rep_config.seed = config.seed ^ static_cast<std::uint64_t>(r);
        std::unique_ptr<UtilityModel> owned;
        const UtilityModel* m = shared;
        if (m == nullptr) {
          owned = factory(r);
          if (!owned) throw RunError("model factory returned null");
          m = owned.get();
        }
        summary.mean_payoffs[r] =
            run_episode(*m, rep_config).mean_global_utility;
      } catch (const std::exception& e) {
        failures[r] = e.what();
      }
    }
  };

  if (threads == 1 || replications == 1) {
    run_range(0, replications);
  } else {
    const int workers = std::min(threads, replications);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    // Contiguous blocks; results land in per-replication slots, so the
    // partition cannot affect the outcome.
    const int chunk = (replications + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const int begin = w * chunk;
      const int end = std::min(replications, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back(run_range, begin, end);
    }
    for (auto& th : pool) th.join();
  }

  for (int r = 0; r < replications; ++r)
    if (!failures[r].empty())
      throw RunError("replication " + std::to_string(r) + ": " + failures[r]);

  double sum = 0.0;
  for (double m : summary.mean_payoffs) sum += m;
  summary.overall_mean = sum / replications;
  double ss = 0.0;
  for (double m : summary.mean_payoffs) {
    const double d = m - summary.overall_mean;
    ss += d * d;
  }
  summary.overall_stddev =
      replications > 1 ? std::sqrt(ss / (replications - 1)) : 0.0;
  return summary;
}

}  // namespace

ReplicationSummary run_replications(const UtilityModel& model,
                                    const RunConfig& config, int replications,
                                    int threads) {
  return run_replications_impl(ModelFactory(), config, replications, threads,
                               &model);
}

ReplicationSummary run_replications(const ModelFactory& factory,
                                    const RunConfig& config, int replications,
                                    int threads) {
  if (!factory) throw std::invalid_argument("model factory required");
  return run_replications_impl(factory, config, replications, threads,
                               nullptr);
}

}  // namespace fpgames
