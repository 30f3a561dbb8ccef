#include "rdv/exp3.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "rdv/error.h"

namespace rdv {
namespace {

void check_gamma(double gamma) {
  if (!(gamma > 0.0 && gamma <= 1.0)) {
    throw InvalidParameter("gamma must lie in (0, 1], got " +
                           std::to_string(gamma));
  }
}

}  // namespace

Exp3Learner::Exp3Learner(double gamma, std::size_t n)
    : gamma_(gamma), weights_(n, 1.0) {
  check_gamma(gamma);
  if (n < 2) throw InvalidParameter("Exp3 needs at least two channels");
}

Exp3Learner::Exp3Learner(double gamma, std::vector<double> weights)
    : gamma_(gamma), weights_(std::move(weights)) {
  check_gamma(gamma);
  if (weights_.size() < 2) {
    throw InvalidParameter("Exp3 needs at least two channels");
  }
  for (double w : weights_) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw InvalidParameter("Exp3 weights must be positive and finite");
    }
  }
}

double Exp3Learner::weight_sum() const noexcept {
  double sum = 0.0;
  for (double w : weights_) sum += w;
  return sum;
}

double Exp3Learner::probability(std::size_t i) const {
  const double n = static_cast<double>(weights_.size());
  return (1.0 - gamma_) * weights_.at(i) / weight_sum() + gamma_ / n;
}

ProbabilityVector Exp3Learner::distribution() const {
  const double n = static_cast<double>(weights_.size());
  const double total = weight_sum();
  std::vector<double> p(weights_.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] = (1.0 - gamma_) * weights_[i] / total + gamma_ / n;
  }
  return ProbabilityVector(std::move(p));
}

std::size_t Exp3Learner::select(Rng& rng) const {
  const double n = static_cast<double>(weights_.size());
  const double total = weight_sum();
  const double u = uniform01(rng);
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < weights_.size(); ++i) {
    acc += (1.0 - gamma_) * weights_[i] / total + gamma_ / n;
    if (u < acc) return i;
  }
  return weights_.size() - 1;
}

void Exp3Learner::update(const RewardEvent& event) {
  if (event.chosen >= weights_.size()) {
    throw InvalidParameter("reward event names channel " +
                           std::to_string(event.chosen + 1) + " of " +
                           std::to_string(weights_.size()));
  }
  if (event.reward != 0 && event.reward != 1) {
    throw InvalidParameter("reward must be 0 or 1");
  }
  if (event.reward == 0) return;
  const double n = static_cast<double>(weights_.size());
  const double estimate = 1.0 / probability(event.chosen);
  weights_[event.chosen] *= std::exp(gamma_ * estimate / n);
}

void Exp3Learner::renormalize() {
  const double top = *std::max_element(weights_.begin(), weights_.end());
  for (double& w : weights_) w = std::max(w / top, kMinWeight);
}

}  // namespace rdv
