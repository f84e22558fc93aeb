#include "fpgames/tracking.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <thread>
#include <utility>
#include <variant>

#include "fpgames/rng.hpp"

namespace fpgames {

namespace {

constexpr std::uint64_t kOpponentTag = 0x6f7070;  // "opp"

}  // namespace

ScriptedOpponent::ScriptedOpponent(std::vector<Segment> segments,
                                   std::vector<double> custom, double period,
                                   int horizon)
    : segments_(std::move(segments)),
      custom_(std::move(custom)),
      period_(period),
      horizon_(horizon) {}

ScriptedOpponent ScriptedOpponent::drift(double period, int horizon) {
  if (!(period > 0.0)) throw std::invalid_argument("period must be positive");
  if (horizon <= 0) throw std::invalid_argument("horizon must be positive");
  return ScriptedOpponent({}, {}, period, horizon);
}

ScriptedOpponent ScriptedOpponent::jump(std::vector<Segment> segments,
                                        int horizon) {
  if (horizon <= 0) throw std::invalid_argument("horizon must be positive");
  if (segments.empty() || segments.front().start != 1)
    throw std::invalid_argument("schedule must start at step 1");
  for (std::size_t s = 0; s < segments.size(); ++s) {
    if (segments[s].prob < 0.0 || segments[s].prob > 1.0)
      throw std::invalid_argument("probabilities must lie in [0, 1]");
    if (s > 0 && segments[s].start <= segments[s - 1].start)
      throw std::invalid_argument("segment starts must be increasing");
  }
  return ScriptedOpponent(std::move(segments), {}, 0.0, horizon);
}

ScriptedOpponent ScriptedOpponent::custom(std::vector<double> probs) {
  if (probs.empty()) throw std::invalid_argument("schedule must be nonempty");
  for (double p : probs)
    if (p < 0.0 || p > 1.0)
      throw std::invalid_argument("probabilities must lie in [0, 1]");
  const int horizon = static_cast<int>(probs.size());
  return ScriptedOpponent({}, std::move(probs), 0.0, horizon);
}

double ScriptedOpponent::prob_action0(int step) const {
  if (step < 1 || step > horizon_)
    throw std::out_of_range("step out of range");
  if (!custom_.empty()) return custom_[step - 1];
  if (!segments_.empty()) {
    double prob = segments_.front().prob;
    for (const Segment& s : segments_)
      if (s.start <= step) prob = s.prob;
    return prob;
  }
  return (std::cos(2.0 * std::numbers::pi * step / period_) + 1.0) / 2.0;
}

int ScriptedOpponent::sample(int step, std::uint64_t seed, int rep) const {
  const double p = prob_action0(step);
  Rng rng(stream_key({seed, kOpponentTag, static_cast<std::uint64_t>(rep),
                      static_cast<std::uint64_t>(step)}));
  return rng.next_double() < p ? 0 : 1;
}

TrackingResult run_tracking_with(
    const ScriptedOpponent& opponent, std::uint64_t seed, int rep,
    const std::function<double(int step, int observed)>& estimate) {
  if (!estimate) throw std::invalid_argument("estimator callback required");
  TrackingResult result;
  const int horizon = opponent.horizon();
  result.true_probs.reserve(horizon);
  result.estimates.reserve(horizon);
  result.actions.reserve(horizon);
  double error_sum = 0.0;
  for (int t = 1; t <= horizon; ++t) {
    const double truth = opponent.prob_action0(t);
    const int action = opponent.sample(t, seed, rep);
    const double est = estimate(t, action);
    const double err = est - truth;
    error_sum += err * err;
    result.true_probs.push_back(truth);
    result.estimates.push_back(est);
    result.actions.push_back(action);
  }
  result.mse = error_sum / horizon;
  return result;
}

TrackingResult run_tracking(const ScriptedOpponent& opponent,
                            const EstimatorConfig& config, std::uint64_t seed,
                            int rep) {
  using Belief =
      std::variant<ClassicFpBelief, GeometricFpBelief, AfffpBelief>;
  Belief belief = [&]() -> Belief {
    switch (config.kind) {
      case EstimatorConfig::Kind::kClassic:
        return ClassicFpBelief(2);
      case EstimatorConfig::Kind::kGeometric:
        return GeometricFpBelief(2, config.geometric_step);
      case EstimatorConfig::Kind::kAfffp:
        return AfffpBelief(2, config.learning_rate, config.initial_lambda,
                           config.lambda_bounds);
    }
    throw std::invalid_argument("unknown estimator kind");
  }();

  std::vector<double> lambdas;
  const bool afffp = config.kind == EstimatorConfig::Kind::kAfffp;
  if (afffp) lambdas.reserve(opponent.horizon());

  TrackingResult result = run_tracking_with(
      opponent, seed, rep, [&](int, int observed) {
        return std::visit(
            [&](auto& b) {
              b.update(observed);
              if constexpr (std::is_same_v<std::decay_t<decltype(b)>,
                                           AfffpBelief>) {
                if (afffp) lambdas.push_back(b.forgetting_factor());
              }
              return b.strategy()[0];
            },
            belief);
      });
  result.lambdas = std::move(lambdas);
  return result;
}

SweepGrid SweepGrid::log_spaced(int num_rates, int num_lambdas,
                                int repetitions) {
  if (num_rates <= 1 || num_lambdas <= 1)
    throw std::invalid_argument("grid needs at least two points per axis");
  SweepGrid grid;
  grid.repetitions = repetitions;
  // Learning rates log-spaced over [1e-6, 1e-1], lambdas linear over [0.1, 1].
  for (int r = 0; r < num_rates; ++r) {
    const double exponent =
        -6.0 + 5.0 * static_cast<double>(r) / (num_rates - 1);
    grid.learning_rates.push_back(std::pow(10.0, exponent));
  }
  for (int l = 0; l < num_lambdas; ++l)
    grid.initial_lambdas.push_back(
        0.1 + 0.9 * static_cast<double>(l) / (num_lambdas - 1));
  return grid;
}

SweepResult run_sweep(const SweepGrid& grid, const ScriptedOpponent& opponent,
                      std::uint64_t seed, int threads) {
  if (grid.learning_rates.empty() || grid.initial_lambdas.empty())
    throw std::invalid_argument("grid must be nonempty");
  if (grid.repetitions <= 0)
    throw std::invalid_argument("repetitions must be positive");
  if (threads <= 0) threads = 1;

  const int num_rates = static_cast<int>(grid.learning_rates.size());
  const int num_lambdas = static_cast<int>(grid.initial_lambdas.size());
  SweepResult result;
  result.mse.assign(num_rates, std::vector<double>(num_lambdas, 0.0));

  auto run_cell = [&](int r, int l) {
    EstimatorConfig config;
    config.kind = EstimatorConfig::Kind::kAfffp;
    config.learning_rate = grid.learning_rates[r];
    config.initial_lambda = grid.initial_lambdas[l];
    double total = 0.0;
    for (int rep = 0; rep < grid.repetitions; ++rep)
      total += run_tracking(opponent, config, seed, rep).mse;
    result.mse[r][l] = total / grid.repetitions;
  };

  const int cells = num_rates * num_lambdas;
  auto run_range = [&](int begin, int end) {
    for (int c = begin; c < end; ++c) run_cell(c / num_lambdas, c % num_lambdas);
  };
  if (threads == 1 || cells == 1) {
    run_range(0, cells);
  } else {
    const int workers = std::min(threads, cells);
    const int chunk = (cells + workers - 1) / workers;
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      const int begin = w * chunk;
      const int end = std::min(cells, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back(run_range, begin, end);
    }
    for (auto& th : pool) th.join();
  }

  // Smallest MSE; ties resolve to the first cell in row-major order.
  for (int r = 0; r < num_rates; ++r) {
    for (int l = 0; l < num_lambdas; ++l) {
      if (result.mse[r][l] <
          result.mse[result.best_rate_index][result.best_lambda_index]) {
        result.best_rate_index = r;
        result.best_lambda_index = l;
      }
    }
  }
  return result;
}

}  // namespace fpgames
