#include "fpgames/decision.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "fpgames/errors.hpp"

namespace fpgames {

namespace {

void check_finite(std::span<const double> values) {
  if (values.empty())
    throw std::invalid_argument("need at least one payoff");
  for (double v : values)
    if (!std::isfinite(v))
      throw NumericalError("payoff vector contains a non-finite value");
}

std::vector<double> expected_utilities(
    const StrategicFormGame& game, int player,
    const std::vector<MixedStrategy>& opponent_strategies) {
  std::vector<double> values(game.num_actions(player));
  for (int a = 0; a < game.num_actions(player); ++a)
    values[a] = expected_utility(game, player, a, opponent_strategies);
  return values;
}

}  // namespace

int argmax_uniform_ties(std::span<const double> values, Rng& rng) {
  check_finite(values);
  double best = values[0];
  for (double v : values)
    if (v > best) best = v;
  int num_tied = 0;
  for (double v : values)
    if (v >= best - kTieTolerance) ++num_tied;
  int pick = rng.next_below(num_tied);
  for (std::size_t a = 0; a < values.size(); ++a) {
    if (values[a] >= best - kTieTolerance && pick-- == 0)
      return static_cast<int>(a);
  }
  throw std::logic_error("argmax_uniform_ties: unreachable");
}

MixedStrategy logit_distribution(std::span<const double> values,
                                 double temperature) {
  check_finite(values);
  if (!(temperature > 0.0) || !std::isfinite(temperature))
    throw NumericalError("logit temperature must be positive and finite");
  double best = values[0];
  for (double v : values)
    if (v > best) best = v;
  std::vector<double> probs(values.size());
  double sum = 0.0;
  for (std::size_t a = 0; a < values.size(); ++a) {
    // Shift by the maximum: the largest exponent is 0, so no overflow, and
    // underflow of hopeless actions is harmless.
    probs[a] = std::exp((values[a] - best) / temperature);
    sum += probs[a];
  }
  for (double& p : probs) p /= sum;
  return MixedStrategy(std::move(probs));
}

int sample_index(const MixedStrategy& distribution, Rng& rng) {
  if (distribution.empty())
    throw std::invalid_argument("cannot sample from an empty distribution");
  const double u = rng.next_double();
  double cumulative = 0.0;
  const int n = distribution.size();
  for (int a = 0; a < n; ++a) {
    cumulative += distribution[a];
    if (u < cumulative) return a;
  }
  // Roundoff can leave the cumulative sum a hair under one; the draw then
  // belongs to the last action with positive probability.
  for (int a = n - 1; a >= 0; --a)
    if (distribution[a] > 0.0) return a;
  throw std::logic_error("sample_index: distribution has no mass");
}

int best_response(const StrategicFormGame& game, int player,
                  const std::vector<MixedStrategy>& opponent_strategies,
                  Rng& rng) {
  const std::vector<double> values =
      expected_utilities(game, player, opponent_strategies);
  return argmax_uniform_ties(values, rng);
}

SmoothBestResponse smooth_best_response(
    const StrategicFormGame& game, int player,
    const std::vector<MixedStrategy>& opponent_strategies, double temperature,
    Rng& rng) {
  const std::vector<double> values =
      expected_utilities(game, player, opponent_strategies);
  SmoothBestResponse response;
  response.distribution = logit_distribution(values, temperature);
  response.action = sample_index(response.distribution, rng);
  return response;
}

}  // namespace fpgames
