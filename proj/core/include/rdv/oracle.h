#pragma once

#include <cstddef>
#include <limits>
#include <string_view>

#include "rdv/environment.h"
#include "rdv/policy.h"

namespace rdv {

enum class ExactMethod { kIidClosedForm, kFrozenClosedForm, kMarkovLinearSolve };

std::string_view exact_method_name(ExactMethod method);

struct ExactEttr {
  double value;  // slots, +infinity when rendezvous is not almost sure
  ExactMethod method;

  bool finite() const noexcept {
    return value < std::numeric_limits<double>::infinity();
  }
};

// Joint state-space limits. Channels that share (p, rho, omega) are lumped
// into a count of good channels and channels with p = 0 are dropped, so the
// limits bound the lumped space; with all channels distinct they reduce to
// 2^N <= limit, i.e. N <= 10 for the linear solve and N <= 20 for the
// frozen enumeration.
inline constexpr std::size_t kMarkovStateLimit = std::size_t{1} << 10;
inline constexpr std::size_t kFrozenStateLimit = std::size_t{1} << 20;

// Number of lumped joint states the exact computations would visit,
// saturating at SIZE_MAX.
std::size_t lumped_state_count(const ProbabilityVector& policy,
                               const Environment& env);

// Fast-fading limit (every slot an independent stationary draw):
// 1 / sum_i p_i^2 rbar_i. The channels' omega values are ignored.
ExactEttr ettr_iid(const ProbabilityVector& policy, const Environment& env);

// Slow-fading limit (states frozen at their stationary draw):
// E_x[1 / q(x)] over the stationary joint law. The channels' omega values
// are ignored. Throws DimensionTooLarge past `state_limit`.
ExactEttr ettr_frozen(const ProbabilityVector& policy, const Environment& env,
                      std::size_t state_limit = kFrozenStateLimit);

// Exact expected first-success time of the Markov-modulated game, from the
// hitting-time equations
//
//   h(x) = 1 + (1 - q(x)) sum_x' P(x -> x') h(x'),
//
// averaged over the stationary law of the initial state. Starting states
// from which success is not almost sure give an infinite value. Throws
// DimensionTooLarge past `state_limit`.
ExactEttr ettr_markov_exact(const ProbabilityVector& policy,
                            const Environment& env,
                            std::size_t state_limit = kMarkovStateLimit);

}  // namespace rdv
