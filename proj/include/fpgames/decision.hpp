#pragma once

#include <span>

#include "fpgames/game.hpp"
#include "fpgames/rng.hpp"

namespace fpgames {

// Payoffs closer than this are treated as tied by best response.
inline constexpr double kTieTolerance = 1e-9;

// Index of a maximal entry; ties within kTieTolerance of the maximum are
// broken uniformly at random. Throws NumericalError on non-finite input.
int argmax_uniform_ties(std::span<const double> values, Rng& rng);

// Logit (softmax) distribution exp(v / temperature) / sum, computed with the
// maximum subtracted so any payoff scale is safe. Adding a constant to all
// payoffs leaves the result unchanged up to roundoff. Throws NumericalError
// on non-finite input or a non-positive temperature.
MixedStrategy logit_distribution(std::span<const double> values,
                                 double temperature);

// Samples an index from the distribution by inverting the cumulative sum
// against one uniform draw.
int sample_index(const MixedStrategy& distribution, Rng& rng);

// Exact best response to independently randomizing opponents: maximizes
// expected utility by enumeration, ties broken uniformly. `opponent_strategies`
// has one slot per player with the player's own slot ignored.
int best_response(const StrategicFormGame& game, int player,
                  const std::vector<MixedStrategy>& opponent_strategies,
                  Rng& rng);

struct SmoothBestResponse {
  MixedStrategy distribution;
  int action = -1;
};

// Logit response to expected utilities: returns both the distribution (for
// probability accounting) and an action sampled from it.
SmoothBestResponse smooth_best_response(
    const StrategicFormGame& game, int player,
    const std::vector<MixedStrategy>& opponent_strategies, double temperature,
    Rng& rng);

}  // namespace fpgames
