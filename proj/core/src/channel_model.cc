#include "rdv/channel_model.h"

#include <cmath>
#include <string>

#include "rdv/error.h"

namespace rdv {

ChannelParams::ChannelParams(double rho, double omega)
    : rho_(rho), omega_(omega) {
  if (!(rho >= 0.0 && rho <= 1.0)) {
    throw InvalidParameter("rho must lie in [0, 1], got " +
                           std::to_string(rho));
  }
  if (!(omega >= 0.0 && omega < 1.0)) {
    throw InvalidParameter("omega must lie in [0, 1), got " +
                           std::to_string(omega));
  }
}

RendezvousProfile::RendezvousProfile(double r0, double r1) : r0_(r0), r1_(r1) {
  if (!(r0 >= 0.0 && r0 <= r1 && r1 <= 1.0)) {
    throw InvalidParameter("rendezvous profile requires 0 <= r0 <= r1 <= 1");
  }
}

TransitionProbs derive_transitions(const ChannelParams& params) {
  const double rho = params.rho();
  const double omega = params.omega();
  return {omega + rho * (1.0 - omega), 1.0 - rho * (1.0 - omega)};
}

ChannelParams recover_params(const TransitionProbs& probs) {
  const double leave_good = 1.0 - probs.p11;
  const double leave_bad = 1.0 - probs.p00;
  if (!(leave_good + leave_bad > 0.0)) {
    throw InvalidParameter("transition pair is absorbing in both states");
  }
  return ChannelParams(leave_bad / (leave_good + leave_bad),
                       probs.p11 + probs.p00 - 1.0);
}

ChannelStateVector stationary_sample(std::span<const ChannelParams> params,
                                     Rng& rng) {
  ChannelStateVector out(params.size());
  for (std::size_t i = 0; i < params.size(); ++i) {
    out[i] = bernoulli(rng, params[i].rho()) ? 1 : 0;
  }
  return out;
}

ChannelStateVector step(const ChannelStateVector& state,
                        std::span<const TransitionProbs> transitions,
                        Rng& rng) {
  if (state.size() != transitions.size()) {
    throw InvalidParameter("state and transition lists differ in length");
  }
  ChannelStateVector next(state.size());
  for (std::size_t i = 0; i < state.size(); ++i) {
    const double stay = state[i] ? transitions[i].p11 : transitions[i].p00;
    const bool stays = bernoulli(rng, stay);
    next[i] = stays ? state[i] : static_cast<std::uint8_t>(1 - state[i]);
  }
  return next;
}

double mean_rendezvous_prob(const ChannelParams& params,
                            const RendezvousProfile& profile) {
  return params.rho() * profile.r1() + (1.0 - params.rho()) * profile.r0();
}

double good_state_probability_after(const ChannelParams& params, int state,
                                    std::uint64_t k) {
  const double x = state ? 1.0 : 0.0;
  if (k == 0) return x;
  const double rho = params.rho();
  return rho + (x - rho) * std::pow(params.omega(), static_cast<double>(k));
}

LazyChannelEnsemble::LazyChannelEnsemble(std::span<const ChannelParams> params)
    : params_(params.begin(), params.end()),
      state_(params.size(), 0),
      slot_(params.size(), 0),
      seen_(params.size(), 0) {}

int LazyChannelEnsemble::state(std::size_t channel, std::uint64_t slot,
                               Rng& rng) {
  const ChannelParams& params = params_[channel];
  if (!seen_[channel]) {
    seen_[channel] = 1;
    state_[channel] = bernoulli(rng, params.rho()) ? 1 : 0;
  } else if (slot > slot_[channel]) {
    const double good = good_state_probability_after(
        params, state_[channel], slot - slot_[channel]);
    state_[channel] = bernoulli(rng, good) ? 1 : 0;
  } else if (slot < slot_[channel]) {
    throw InvalidParameter("channel " + std::to_string(channel) +
                           " queried at slot " + std::to_string(slot) +
                           " after slot " + std::to_string(slot_[channel]));
  }
  slot_[channel] = slot;
  return state_[channel];
}

}  // namespace rdv
