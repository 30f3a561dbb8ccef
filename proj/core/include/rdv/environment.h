#pragma once

#include <cstddef>
#include <vector>

#include "rdv/channel_model.h"

namespace rdv {

// N >= 2 independent channels plus the state-dependent rendezvous profile.
class Environment {
 public:
  // Throws InvalidParameter when fewer than two channels are given.
  Environment(std::vector<ChannelParams> channels, RendezvousProfile profile);

  static Environment homogeneous(std::size_t n, double rho, double omega,
                                 RendezvousProfile profile);

  std::size_t size() const noexcept { return channels_.size(); }
  const std::vector<ChannelParams>& channels() const noexcept {
    return channels_;
  }
  const ChannelParams& channel(std::size_t i) const { return channels_.at(i); }
  const RendezvousProfile& profile() const noexcept { return profile_; }

  std::vector<TransitionProbs> transitions() const;

 private:
  std::vector<ChannelParams> channels_;
  RendezvousProfile profile_;
};

}  // namespace rdv
