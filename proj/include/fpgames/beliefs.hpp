#pragma once

#include <vector>

#include "fpgames/game.hpp"

namespace fpgames {

// Empirical-frequency belief over one opponent's actions. Weights start at
// one per action (uniform prior counts) unless custom nonnegative weights are
// given; each observation adds one to the observed action's weight.
class ClassicFpBelief {
 public:
  explicit ClassicFpBelief(int num_actions);
  explicit ClassicFpBelief(std::vector<double> weights);

  void update(int observed_action);
  MixedStrategy strategy() const;

  int num_actions() const { return static_cast<int>(weights_.size()); }
  const std::vector<double>& weights() const { return weights_; }

 private:
  std::vector<double> weights_;
};

// Exponentially smoothed belief: strategy <- (1 - z) * strategy + z * e_obs.
// The step size z in (0, 1] is fixed, so old observations are discounted
// geometrically and the estimate never stops moving.
//
// A prior given as unnormalized weights keeps its total mass: observations
// carry weight z against the decaying prior mass, so a mass above one damps
// the early updates and relaxes toward the plain recursion as the prior is
// forgotten. Strategy priors carry unit mass and reproduce the plain
// recursion from the first update.
class GeometricFpBelief {
 public:
  GeometricFpBelief(int num_actions, double step_size);
  GeometricFpBelief(MixedStrategy initial, double step_size);
  GeometricFpBelief(std::vector<double> weights, double step_size);

  void update(int observed_action);
  MixedStrategy strategy() const;

  int num_actions() const { return static_cast<int>(probs_.size()); }
  double step_size() const { return step_size_; }
  double prior_mass() const { return mass_; }

 private:
  std::vector<double> probs_;
  double mass_ = 1.0;
  double step_size_;
};

// Closed interval the adaptive forgetting factor is clamped to after every
// update (and on construction). Requires 0 < lo <= hi <= 1.
struct LambdaBounds {
  double lo = 0.001;
  double hi = 0.999;
};

// Adaptive forgetting factor fictitious play (AFFFP) belief.
//
// Discounted pseudo-counts kappa and their normalizer n evolve as
//
//   kappa_t(s) = lambda_{t-1} * kappa_{t-1}(s) + [s == s_t]
//   n_t        = lambda_{t-1} * n_{t-1} + 1
//
// and the strategy estimate is kappa_t / n_t. The forgetting factor lambda
// follows a stochastic-gradient ascent step on the one-step predictive
// log-likelihood log(kappa_{t-1}(s_t) / n_{t-1}); the sensitivity of kappa
// and n to lambda is tracked by the exact derivative recursions
//
//   dkappa_t(s) = kappa_{t-1}(s) + lambda_{t-1} * dkappa_{t-1}(s)
//   dn_t        = n_{t-1}        + lambda_{t-1} * dn_{t-1}
//
// One update applies, in order: (a) the gradient of the pre-observation
// log-likelihood, (b) the derivative recursions, (c) the weight and
// normalizer recursions, (d) the clamped lambda step. Derivatives start at
// zero; the initial lambda is clamped into bounds.
//
// Keeping lambda pinned at one (bounds {1, 1}) reproduces classic fictitious
// play exactly; a zero learning rate with weights kappa_0 = p / (1 - lambda)
// reproduces the geometrically smoothed estimate with step size 1 - lambda.
class AfffpBelief {
 public:
  AfffpBelief(int num_actions, double learning_rate, double initial_lambda,
              LambdaBounds bounds = {});
  // Custom nonnegative initial weights; the normalizer starts at their sum,
  // which must be positive.
  AfffpBelief(std::vector<double> weights, double learning_rate,
              double initial_lambda, LambdaBounds bounds = {});

  void update(int observed_action);
  MixedStrategy strategy() const;

  // d/dlambda of log(kappa(action) / n) at the current state, i.e. the
  // gradient the next update of lambda would use if `action` were observed.
  // Throws NumericalError when kappa(action) is zero, which only a zero
  // prior weight can produce: update() floors decayed positive weights so
  // they never underflow to zero.
  double likelihood_gradient(int action) const;

  int num_actions() const { return static_cast<int>(weights_.size()); }
  const std::vector<double>& weights() const { return weights_; }
  double normalizer() const { return normalizer_; }
  const std::vector<double>& weight_derivatives() const { return dweights_; }
  double normalizer_derivative() const { return dnormalizer_; }
  double forgetting_factor() const { return lambda_; }
  double learning_rate() const { return learning_rate_; }
  const LambdaBounds& bounds() const { return bounds_; }

 private:
  std::vector<double> weights_;    // kappa
  double normalizer_;              // n
  std::vector<double> dweights_;   // dkappa/dlambda
  double dnormalizer_;             // dn/dlambda
  double lambda_;
  double learning_rate_;           // gamma
  LambdaBounds bounds_;
};

}  // namespace fpgames
