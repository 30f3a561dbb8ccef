#include "rdv/environment.h"

#include "rdv/error.h"

namespace rdv {

Environment::Environment(std::vector<ChannelParams> channels,
                         RendezvousProfile profile)
    : channels_(std::move(channels)), profile_(profile) {
  if (channels_.size() < 2) {
    throw InvalidParameter("an environment needs at least two channels");
  }
}

Environment Environment::homogeneous(std::size_t n, double rho, double omega,
                                     RendezvousProfile profile) {
  return Environment(std::vector<ChannelParams>(n, ChannelParams(rho, omega)),
                     profile);
}

std::vector<TransitionProbs> Environment::transitions() const {
  std::vector<TransitionProbs> out;
  out.reserve(channels_.size());
  for (const auto& c : channels_) out.push_back(derive_transitions(c));
  return out;
}

}  // namespace rdv
