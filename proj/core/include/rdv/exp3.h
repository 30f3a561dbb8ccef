#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rdv/policy.h"
#include "rdv/random.h"

namespace rdv {

inline constexpr double kDefaultGamma = 0.02;

struct RewardEvent {
  std::size_t chosen;  // 0-based channel index
  int reward;          // 0 or 1
};

// Exponential-weight learner for exploration and exploitation over N
// channels. Selection probabilities mix the normalised weights with a
// uniform exploration mass gamma:
//
//   p_i = (1 - gamma) * w_i / sum_j w_j + gamma / N
//
// and a reward z on the chosen channel i multiplies w_i by
// exp(gamma * (z / p_i) / N). Failed attempts carry no penalty.
class Exp3Learner {
 public:
  // Throws InvalidParameter unless gamma in (0, 1] and n >= 2.
  Exp3Learner(double gamma, std::size_t n);

  // Starts from explicit positive weights instead of all ones.
  Exp3Learner(double gamma, std::vector<double> weights);

  double gamma() const noexcept { return gamma_; }
  std::size_t size() const noexcept { return weights_.size(); }
  std::span<const double> weights() const noexcept { return weights_; }

  double probability(std::size_t i) const;
  ProbabilityVector distribution() const;

  std::size_t select(Rng& rng) const;

  // Throws InvalidParameter for an out-of-range channel or a reward other
  // than 0 or 1.
  void update(const RewardEvent& event);

  // Divides all weights by their maximum; leaves distribution() unchanged.
  // Results are floored at kMinWeight so long runs cannot underflow a weight
  // to zero.
  void renormalize();

  static constexpr double kMinWeight = 1e-300;

 private:
  double weight_sum() const noexcept;

  double gamma_;
  std::vector<double> weights_;
};

}  // namespace rdv
