#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "fpgames/beliefs.hpp"

namespace fpgames {

// A two-action opponent whose probability of playing action 0 follows a
// fixed schedule over the horizon. Steps are 1-based.
class ScriptedOpponent {
 public:
  struct Segment {
    int start = 1;     // first step the probability applies to
    double prob = 0.0; // probability of action 0 from that step on
  };

  // Sinusoidal drift: p_t = (cos(2 pi t / period) + 1) / 2.
  static ScriptedOpponent drift(double period, int horizon);
  // Piecewise-constant schedule; segments must start at 1 and be strictly
  // increasing.
  static ScriptedOpponent jump(std::vector<Segment> segments, int horizon);
  // Arbitrary per-step schedule.
  static ScriptedOpponent custom(std::vector<double> probs);

  int horizon() const { return horizon_; }
  double prob_action0(int step) const;

  // Samples the action at `step` for repetition `rep`. The draw depends only
  // on (seed, rep, step), so two estimator configurations replaying the same
  // (seed, rep) face the identical action sequence: common random numbers.
  int sample(int step, std::uint64_t seed, int rep) const;

 private:
  ScriptedOpponent(std::vector<Segment> segments, std::vector<double> custom,
                   double period, int horizon);

  std::vector<Segment> segments_;
  std::vector<double> custom_;
  double period_ = 0.0;
  int horizon_ = 0;
};

struct EstimatorConfig {
  enum class Kind { kClassic, kGeometric, kAfffp };
  Kind kind = Kind::kAfffp;
  double geometric_step = 0.1;
  double learning_rate = 1e-4;
  double initial_lambda = 0.8;
  LambdaBounds lambda_bounds{};
};

struct TrackingResult {
  double mse = 0.0;                    // mean over steps of (estimate - truth)^2
  std::vector<double> true_probs;      // scripted probability of action 0
  std::vector<double> estimates;       // estimator's probability of action 0
  std::vector<double> lambdas;         // per step (AFFFP only, else empty)
  std::vector<int> actions;            // sampled opponent actions
};

// One tracking run: at each step the opponent samples an action, the
// estimator updates on it, and the post-update estimate is scored against
// the scripted probability. Deterministic in (opponent, config, seed, rep).
TrackingResult run_tracking(const ScriptedOpponent& opponent,
                            const EstimatorConfig& config, std::uint64_t seed,
                            int rep = 0);

// Same loop with an arbitrary estimate sequence: `estimate` consumes the
// observed action at each step and returns the updated probability of action
// 0. Lets tests plug in reference estimators.
TrackingResult run_tracking_with(
    const ScriptedOpponent& opponent, std::uint64_t seed, int rep,
    const std::function<double(int step, int observed)>& estimate);

// Parameter grid for the AFFFP sweep. Axis values are free, but the
// intended ranges are learning rates in [1e-6, 1e-1] (log-spaced) and
// initial lambdas in [0.1, 1].
struct SweepGrid {
  std::vector<double> learning_rates;
  std::vector<double> initial_lambdas;
  int repetitions = 100;

  static SweepGrid log_spaced(int num_rates, int num_lambdas,
                              int repetitions);
};

struct SweepResult {
  // mse[r][l]: mean MSE over repetitions at learning_rates[r],
  // initial_lambdas[l].
  std::vector<std::vector<double>> mse;
  int best_rate_index = 0;
  int best_lambda_index = 0;
};

// Runs the full grid with common random numbers: repetition r sees the same
// opponent action sequence in every cell, so cells differ only through the
// estimator parameters. Cells with equal parameters give bitwise equal MSE.
SweepResult run_sweep(const SweepGrid& grid, const ScriptedOpponent& opponent,
                      std::uint64_t seed, int threads = 1);

}  // namespace fpgames
