#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rdv/random.h"

namespace rdv {

// Two-state Markov channel described by its stationary probability of the
// good state (rho) and the lag-1 correlation coefficient of its state
// sequence (omega). Only positively correlated chains are representable.
class ChannelParams {
 public:
  // Throws InvalidParameter unless 0 <= rho <= 1 and 0 <= omega < 1.
  ChannelParams(double rho, double omega);

  double rho() const noexcept { return rho_; }
  double omega() const noexcept { return omega_; }

  friend bool operator==(const ChannelParams&, const ChannelParams&) = default;

 private:
  double rho_;
  double omega_;
};

// p11 = P(good -> good), p00 = P(bad -> bad).
struct TransitionProbs {
  double p11;
  double p00;
};

// Rendezvous success probability when both users land on a channel in the
// bad (r0) or good (r1) state.
class RendezvousProfile {
 public:
  // Throws InvalidParameter unless 0 <= r0 <= r1 <= 1.
  RendezvousProfile(double r0, double r1);

  double r0() const noexcept { return r0_; }
  double r1() const noexcept { return r1_; }
  double operator()(int state) const noexcept { return state ? r1_ : r0_; }

 private:
  double r0_;
  double r1_;
};

// One entry per channel, 0 = bad and 1 = good.
using ChannelStateVector = std::vector<std::uint8_t>;

TransitionProbs derive_transitions(const ChannelParams& params);

// Inverse of derive_transitions. Requires a non-absorbing pair, i.e.
// (1 - p11) + (1 - p00) > 0.
ChannelParams recover_params(const TransitionProbs& probs);

ChannelStateVector stationary_sample(std::span<const ChannelParams> params,
                                     Rng& rng);

// Advances every channel one slot through its own 2x2 kernel.
ChannelStateVector step(const ChannelStateVector& state,
                        std::span<const TransitionProbs> transitions, Rng& rng);

// Rendezvous probability averaged over the stationary state of one channel.
double mean_rendezvous_prob(const ChannelParams& params,
                            const RendezvousProfile& profile);

// P(X(t + k) = 1 | X(t) = state). The two-state kernel has second
// eigenvalue omega, so this is rho + (state - rho) * omega^k.
double good_state_probability_after(const ChannelParams& params, int state,
                                    std::uint64_t k);

// Channel ensemble whose states are realised on demand. A channel that has
// never been observed is drawn from its stationary law the first time it is
// queried; afterwards it is propagated by the exact k-step kernel over the
// slots that elapsed since the previous query. The joint law of any set of
// queried (channel, slot) pairs matches the eagerly stepped chain, but a
// slot costs nothing for channels nobody looks at.
//
// Queries for a given channel must use nondecreasing slot indices;
// InvalidParameter is thrown otherwise.
class LazyChannelEnsemble {
 public:
  explicit LazyChannelEnsemble(std::span<const ChannelParams> params);

  int state(std::size_t channel, std::uint64_t slot, Rng& rng);

  std::size_t size() const noexcept { return params_.size(); }

 private:
  std::vector<ChannelParams> params_;
  std::vector<std::uint8_t> state_;
  std::vector<std::uint64_t> slot_;
  std::vector<std::uint8_t> seen_;
};

}  // namespace rdv
