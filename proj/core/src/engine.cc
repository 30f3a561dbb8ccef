#include "rdv/engine.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "rdv/error.h"
#include "rdv/parallel.h"

namespace rdv {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Separates snapshot-evaluation streams from learning streams.
constexpr std::uint64_t kEvaluationSalt = 0x5eed'e7a1'0000'0001ULL;

struct MeanAndError {
  double mean;
  double std_error;
};

MeanAndError summarize(const std::vector<double>& xs) {
  if (xs.empty()) return {kInf, kInf};
  double sum = 0.0;
  for (double x : xs) sum += x;
  const double mean = sum / static_cast<double>(xs.size());
  if (xs.size() < 2 || !std::isfinite(mean)) {
    return {mean, std::isfinite(mean) ? 0.0 : kInf};
  }
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  const double n = static_cast<double>(xs.size());
  return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

void check_policy_size(const ProbabilityVector& policy,
                       const Environment& env) {
  if (policy.size() != env.size()) {
    throw InvalidParameter("policy has " + std::to_string(policy.size()) +
                           " entries for " + std::to_string(env.size()) +
                           " channels");
  }
}

bool weights_equal(const Exp3Learner& a, const Exp3Learner& b) {
  return std::equal(a.weights().begin(), a.weights().end(),
                    b.weights().begin(), b.weights().end());
}

}  // namespace

void TrialConfig::validate_for_estimation() const {
  if (runs == 0) throw InvalidParameter("runs must be positive");
  if (max_slots == 0) throw InvalidParameter("max_slots must be positive");
}

void TrialConfig::validate_for_learning() const {
  if (runs == 0) throw InvalidParameter("runs must be positive");
  if (horizon == 0) throw InvalidParameter("horizon must be positive");
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    if (checkpoints[i] > horizon) {
      throw InvalidParameter("checkpoint " + std::to_string(checkpoints[i]) +
                             " lies beyond the horizon");
    }
    if (i > 0 && checkpoints[i] <= checkpoints[i - 1]) {
      throw InvalidParameter("checkpoints must be strictly ascending");
    }
  }
}

std::string_view estimate_method_name(EstimateMethod method) {
  return method == EstimateMethod::kExact ? "exact" : "monte-carlo";
}

double slot_success_probability(const ProbabilityVector& policy,
                                const RendezvousProfile& profile,
                                const ChannelStateVector& state) {
  if (policy.size() != state.size()) {
    throw InvalidParameter("policy and state sizes differ");
  }
  double q = 0.0;
  for (std::size_t i = 0; i < policy.size(); ++i) {
    q += policy[i] * policy[i] * profile(state[i]);
  }
  return q;
}

bool attempt_rendezvous(const ChannelSampler& sampler,
                        const RendezvousProfile& profile,
                        const ChannelStateVector& state, Rng& rng) {
  const std::size_t a = sampler(rng);
  const std::size_t b = sampler(rng);
  return a == b && bernoulli(rng, profile(state[a]));
}

std::optional<std::uint64_t> run_fixed_trial(const ProbabilityVector& policy,
                                             const Environment& env,
                                             std::uint64_t max_slots,
                                             Rng& rng) {
  check_policy_size(policy, env);
  const ChannelSampler sampler(policy);
  LazyChannelEnsemble channels(env.channels());
  for (std::uint64_t t = 1; t <= max_slots; ++t) {
    const std::size_t a = sampler(rng);
    const std::size_t b = sampler(rng);
    if (a != b) continue;
    const int x = channels.state(a, t, rng);
    if (bernoulli(rng, env.profile()(x))) return t;
  }
  return std::nullopt;
}

EttrEstimate estimate_ettr(const ProbabilityVector& policy,
                           const Environment& env, const TrialConfig& config) {
  config.validate_for_estimation();
  check_policy_size(policy, env);

  std::vector<std::optional<std::uint64_t>> ttr(config.runs);
  parallel_for(config.runs, config.workers, [&](std::size_t i) {
    Rng rng = make_stream(config.seed, i);
    ttr[i] = run_fixed_trial(policy, env, config.max_slots, rng);
  });

  std::vector<double> done;
  done.reserve(ttr.size());
  for (const auto& t : ttr) {
    if (t) done.push_back(static_cast<double>(*t));
  }
  const auto [mean, std_error] = summarize(done);
  EttrEstimate out;
  out.mean = mean;
  out.std_error = std_error;
  out.runs = config.runs;
  out.censored = config.runs - done.size();
  out.method = EstimateMethod::kMonteCarlo;
  return out;
}

LearningTrace run_learning_episode(double gamma, const Environment& env,
                                   const TrialConfig& config, Rng& rng) {
  config.validate_for_learning();

  Exp3Learner first(gamma, env.size());
  Exp3Learner second(gamma, env.size());
  LazyChannelEnsemble channels(env.channels());

  LearningTrace trace;
  trace.checkpoints = config.checkpoints;
  trace.rendezvous.assign(config.horizon, false);
  std::size_t next_checkpoint = 0;
  auto snapshot = [&](std::uint64_t t) {
    while (next_checkpoint < config.checkpoints.size() &&
           config.checkpoints[next_checkpoint] == t) {
      trace.first_user.push_back(first.distribution());
      trace.second_user.push_back(second.distribution());
      ++next_checkpoint;
    }
  };

  snapshot(0);
  for (std::uint64_t t = 1; t <= config.horizon; ++t) {
    const std::size_t a = first.select(rng);
    const std::size_t b = second.select(rng);
    int reward = 0;
    if (a == b) {
      const int x = channels.state(a, t, rng);
      reward = bernoulli(rng, env.profile()(x)) ? 1 : 0;
    }
    first.update({a, reward});
    second.update({b, reward});
    if (reward) {
      first.renormalize();
      second.renormalize();
      trace.rendezvous[t - 1] = true;
      ++trace.successes;
    }
    if (!weights_equal(first, second)) {
      throw std::logic_error("learner weights diverged at slot " +
                             std::to_string(t));
    }
    snapshot(t);
  }
  trace.final_weights.assign(first.weights().begin(), first.weights().end());
  return trace;
}

LearningStudy ettr_vs_time(double gamma, const Environment& env,
                           const TrialConfig& config,
                           const SnapshotEvaluation& evaluation) {
  config.validate_for_learning();
  const std::size_t checkpoints = config.checkpoints.size();

  LearningStudy study;
  study.traces.resize(config.runs);
  // values[r][c]: ETTR of episode r's snapshot at checkpoint c.
  std::vector<std::vector<double>> values(config.runs);
  std::vector<std::vector<char>> exact(config.runs);

  parallel_for(config.runs, config.workers, [&](std::size_t r) {
    Rng rng = make_stream(config.seed, r);
    LearningTrace trace = run_learning_episode(gamma, env, config, rng);
    trace.rendezvous.clear();
    trace.rendezvous.shrink_to_fit();

    values[r].resize(checkpoints);
    exact[r].resize(checkpoints);
    for (std::size_t c = 0; c < checkpoints; ++c) {
      const ProbabilityVector& policy = trace.first_user[c];
      if (lumped_state_count(policy, env) <= evaluation.exact_state_limit) {
        values[r][c] =
            ettr_markov_exact(policy, env, evaluation.exact_state_limit).value;
        exact[r][c] = 1;
      } else {
        TrialConfig mc;
        mc.runs = evaluation.monte_carlo_runs;
        mc.seed = stream_seed(config.seed ^ kEvaluationSalt, r, c);
        mc.max_slots = config.max_slots;
        mc.workers = 1;
        values[r][c] = estimate_ettr(policy, env, mc).mean;
      }
    }
    study.traces[r] = std::move(trace);
  });

  study.ettr.resize(checkpoints);
  for (std::size_t c = 0; c < checkpoints; ++c) {
    std::vector<double> column(config.runs);
    std::uint64_t exact_count = 0;
    for (std::size_t r = 0; r < config.runs; ++r) {
      column[r] = values[r][c];
      exact_count += exact[r][c] ? 1 : 0;
    }
    const auto [mean, std_error] = summarize(column);
    study.ettr[c] = {config.checkpoints[c], mean, std_error, exact_count};
  }
  return study;
}

}  // namespace rdv
