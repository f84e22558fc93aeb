#include "fpgames/beliefs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "fpgames/errors.hpp"

namespace fpgames {

namespace {

// Smallest decayed weight kept: the smallest positive normal double. Stops
// positive weights from underflowing into denormals or exact zero.
constexpr double kWeightFloor = std::numeric_limits<double>::min();

std::vector<double> validated_weights(std::vector<double> weights) {
  if (weights.empty())
    throw std::invalid_argument("belief needs at least one action");
  double sum = 0.0;
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0)
      throw std::invalid_argument("belief weights must be finite and nonnegative");
    sum += w;
  }
  if (sum <= 0.0)
    throw std::invalid_argument("belief weights must have positive sum");
  return weights;
}

void check_action(int action, int num_actions) {
  if (action < 0 || action >= num_actions)
    throw std::out_of_range("observed action out of range");
}

std::vector<double> normalized(const std::vector<double>& weights, double sum) {
  std::vector<double> probs(weights.size());
  for (std::size_t a = 0; a < weights.size(); ++a) probs[a] = weights[a] / sum;
  return probs;
}

}  // namespace

// ---------------------------------------------------------------------------
// ClassicFpBelief

ClassicFpBelief::ClassicFpBelief(int num_actions)
    : weights_(num_actions > 0 ? num_actions : 0, 1.0) {
  if (num_actions <= 0)
    throw std::invalid_argument("belief needs at least one action");
}

ClassicFpBelief::ClassicFpBelief(std::vector<double> weights)
    : weights_(validated_weights(std::move(weights))) {}

void ClassicFpBelief::update(int observed_action) {
  check_action(observed_action, num_actions());
  weights_[observed_action] += 1.0;
}

MixedStrategy ClassicFpBelief::strategy() const {
  double sum = 0.0;
  for (double w : weights_) sum += w;
  return MixedStrategy(normalized(weights_, sum));
}

// ---------------------------------------------------------------------------
// GeometricFpBelief

GeometricFpBelief::GeometricFpBelief(int num_actions, double step_size)
    : GeometricFpBelief(MixedStrategy::uniform(num_actions), step_size) {}

GeometricFpBelief::GeometricFpBelief(MixedStrategy initial, double step_size)
    : probs_(initial.probs()), step_size_(step_size) {
  if (!(step_size > 0.0) || step_size > 1.0)
    throw std::invalid_argument("step size must lie in (0, 1]");
}

GeometricFpBelief::GeometricFpBelief(std::vector<double> weights,
                                     double step_size)
    : probs_(validated_weights(std::move(weights))), step_size_(step_size) {
  if (!(step_size > 0.0) || step_size > 1.0)
    throw std::invalid_argument("step size must lie in (0, 1]");
  mass_ = 0.0;
  for (double w : probs_) mass_ += w;
  for (double& p : probs_) p /= mass_;
}

void GeometricFpBelief::update(int observed_action) {
  check_action(observed_action, num_actions());
  if (mass_ == 1.0) {
    for (double& p : probs_) p *= 1.0 - step_size_;
    probs_[observed_action] += step_size_;
    return;
  }
  // Unnormalized form: kept prior mass plus one observation of weight z,
  // renormalized. Identical to the plain recursion once mass reaches one.
  const double kept = (1.0 - step_size_) * mass_;
  const double total = kept + step_size_;
  const double scale = kept / total;
  for (double& p : probs_) p *= scale;
  probs_[observed_action] += step_size_ / total;
  mass_ = total;
}

MixedStrategy GeometricFpBelief::strategy() const {
  return MixedStrategy(probs_);
}

// ---------------------------------------------------------------------------
// AfffpBelief

AfffpBelief::AfffpBelief(int num_actions, double learning_rate,
                         double initial_lambda, LambdaBounds bounds)
    : AfffpBelief(std::vector<double>(num_actions > 0 ? num_actions : 1, 1.0),
                  learning_rate, initial_lambda, bounds) {
  if (num_actions <= 0)
    throw std::invalid_argument("belief needs at least one action");
}

AfffpBelief::AfffpBelief(std::vector<double> weights, double learning_rate,
                         double initial_lambda, LambdaBounds bounds)
    : weights_(validated_weights(std::move(weights))),
      normalizer_(0.0),
      dweights_(weights_.size(), 0.0),
      dnormalizer_(0.0),
      lambda_(initial_lambda),
      learning_rate_(learning_rate),
      bounds_(bounds) {
  if (!(bounds_.lo > 0.0) || bounds_.lo > bounds_.hi || bounds_.hi > 1.0)
    throw std::invalid_argument("lambda bounds need 0 < lo <= hi <= 1");
  if (!std::isfinite(learning_rate_) || learning_rate_ < 0.0)
    throw std::invalid_argument("learning rate must be finite and nonnegative");
  if (!std::isfinite(lambda_))
    throw std::invalid_argument("initial lambda must be finite");
  lambda_ = std::clamp(lambda_, bounds_.lo, bounds_.hi);
  for (double w : weights_) normalizer_ += w;
}

double AfffpBelief::likelihood_gradient(int action) const {
  check_action(action, num_actions());
  if (weights_[action] <= 0.0)
    throw NumericalError(
        "cannot evaluate log-likelihood gradient: weight has vanished for the "
        "observed action");
  return dweights_[action] / weights_[action] - dnormalizer_ / normalizer_;
}

void AfffpBelief::update(int observed_action) {
  check_action(observed_action, num_actions());

  // (a) gradient of the pre-observation predictive log-likelihood
  const double gradient = likelihood_gradient(observed_action);

  // (b) derivative recursions, from pre-observation weights
  for (std::size_t a = 0; a < weights_.size(); ++a)
    dweights_[a] = weights_[a] + lambda_ * dweights_[a];
  dnormalizer_ = normalizer_ + lambda_ * dnormalizer_;

  // (c) weight and normalizer recursions. In exact arithmetic a positive
  // weight stays positive forever (kappa_0 * lambda^t > 0); the floor keeps
  // that true under floating point, where a long-unobserved action's weight
  // would otherwise underflow to zero at a small lambda and make the next
  // gradient evaluation undefined. Weights constructed as zero stay zero.
  for (double& w : weights_) {
    const bool positive = w > 0.0;
    w *= lambda_;
    if (positive && w < kWeightFloor) w = kWeightFloor;
  }
  weights_[observed_action] += 1.0;
  normalizer_ = lambda_ * normalizer_ + 1.0;

  // (d) clamped gradient-ascent step on lambda
  lambda_ = std::clamp(lambda_ + learning_rate_ * gradient, bounds_.lo,
                       bounds_.hi);
}

MixedStrategy AfffpBelief::strategy() const {
  return MixedStrategy(normalized(weights_, normalizer_));
}

}  // namespace fpgames
