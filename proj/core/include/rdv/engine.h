#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "rdv/channel_model.h"
#include "rdv/environment.h"
#include "rdv/exp3.h"
#include "rdv/oracle.h"
#include "rdv/policy.h"
#include "rdv/random.h"

namespace rdv {

inline constexpr std::uint64_t kDefaultMaxSlots = 1'000'000;

struct TrialConfig {
  std::uint64_t runs = 1000;
  std::uint64_t horizon = 0;  // learning only
  std::uint64_t seed = 1;
  // Learning only. Checkpoint t snapshots the distribution in force after t
  // learning slots, so t = 0 is the untrained learner. Must be ascending,
  // unique and within [0, horizon].
  std::vector<std::uint64_t> checkpoints;
  std::uint64_t max_slots = kDefaultMaxSlots;
  unsigned workers = 0;  // 0 = hardware concurrency

  // Throws InvalidParameter when the fields violate the rules above.
  void validate_for_estimation() const;
  void validate_for_learning() const;
};

enum class EstimateMethod { kMonteCarlo, kExact };

std::string_view estimate_method_name(EstimateMethod method);

struct EttrEstimate {
  double mean = 0.0;    // over uncensored trials; +inf if all are censored
  double std_error = 0.0;  // standard error of `mean`
  std::uint64_t runs = 0;
  std::uint64_t censored = 0;
  EstimateMethod method = EstimateMethod::kMonteCarlo;

  friend bool operator==(const EttrEstimate&, const EttrEstimate&) = default;
};

// Probability that both users pick the same channel and the state-dependent
// coin succeeds, for a fixed joint state: sum_i p_i^2 r(x_i).
double slot_success_probability(const ProbabilityVector& policy,
                                const RendezvousProfile& profile,
                                const ChannelStateVector& state);

// One slot of the blind rendezvous game for a fixed joint state.
bool attempt_rendezvous(const ChannelSampler& sampler,
                        const RendezvousProfile& profile,
                        const ChannelStateVector& state, Rng& rng);

// Time to rendezvous (first successful slot, counting from 1) of two users
// drawing i.i.d. from `policy`. Returns nullopt when `max_slots` elapse
// without success. Initial channel states are stationary.
std::optional<std::uint64_t> run_fixed_trial(const ProbabilityVector& policy,
                                             const Environment& env,
                                             std::uint64_t max_slots, Rng& rng);

// Monte Carlo ETTR over config.runs trials. Trial i uses the stream
// stream_seed(config.seed, i), so the estimate is a deterministic function
// of the inputs regardless of config.workers.
EttrEstimate estimate_ettr(const ProbabilityVector& policy,
                           const Environment& env, const TrialConfig& config);

struct LearningTrace {
  std::vector<std::uint64_t> checkpoints;
  // One distribution per checkpoint for each user.
  std::vector<ProbabilityVector> first_user;
  std::vector<ProbabilityVector> second_user;
  std::vector<bool> rendezvous;  // per slot, index t - 1
  std::vector<double> final_weights;
  std::uint64_t successes = 0;
};

// Two independent Exp3 learners play the repeated rendezvous game for
// config.horizon slots over one shared channel trajectory. A matched slot
// flips a single coin and both learners receive its reward; learning does
// not stop at the first rendezvous. Throws std::logic_error if the
// learners' weights ever diverge.
LearningTrace run_learning_episode(double gamma, const Environment& env,
                                   const TrialConfig& config, Rng& rng);

struct SnapshotEvaluation {
  // Use the exact Markov oracle when the lumped space fits; otherwise a
  // Monte Carlo estimate with `monte_carlo_runs` trials.
  std::size_t exact_state_limit = kMarkovStateLimit;
  std::uint64_t monte_carlo_runs = 1000;
};

struct EttrPoint {
  std::uint64_t t = 0;
  double mean = 0.0;    // average over learning episodes
  double std_error = 0.0;  // across episodes
  std::uint64_t exact_evaluations = 0;
};

struct LearningStudy {
  std::vector<LearningTrace> traces;  // one per episode
  std::vector<EttrPoint> ettr;        // one per checkpoint
};

// Runs config.runs learning episodes (episode r uses
// stream_seed(config.seed, r)) and evaluates each checkpoint snapshot as a
// frozen blind policy. The rendezvous bits of the traces are dropped to
// bound memory.
LearningStudy ettr_vs_time(double gamma, const Environment& env,
                           const TrialConfig& config,
                           const SnapshotEvaluation& evaluation = {});

}  // namespace rdv
