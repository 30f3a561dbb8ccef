#include "rdv/engine.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "reference_oracles.h"
#include "rdv/error.h"

namespace rdv {
namespace {

const RendezvousProfile kProfile(0.001, 1.0);

ProbabilityVector policy(PolicyKind kind, std::size_t n) {
  return build_policy(PolicySpec::simple(kind), n);
}

TrialConfig estimation(std::uint64_t runs, std::uint64_t seed) {
  TrialConfig c;
  c.runs = runs;
  c.seed = seed;
  return c;
}

TEST(RunFixedTrial, CertainRendezvousTakesOneSlot) {
  const auto env = Environment::homogeneous(2, 0.5, 0.5, RendezvousProfile(1.0, 1.0));
  Rng rng(1);
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(run_fixed_trial(policy(PolicyKind::kSingle, 2), env, 10, rng), 1u);
  }
}

TEST(RunFixedTrial, CensorsAtMaxSlots) {
  const auto env = Environment::homogeneous(3, 0.5, 0.5, RendezvousProfile(0.0, 0.0));
  Rng rng(2);
  EXPECT_FALSE(run_fixed_trial(policy(PolicyKind::kUniform, 3), env, 500, rng).has_value());
}

TEST(EstimateEttr, UniformPairWithCertainCoin) {
  // Geometric with success 1/2.
  const auto env = Environment::homogeneous(2, 0.5, 0.5, RendezvousProfile(1.0, 1.0));
  const auto est = estimate_ettr(policy(PolicyKind::kUniform, 2), env, estimation(100000, 3));
  EXPECT_NEAR(est.mean, 2.0, 3 * est.std_error);
  EXPECT_NEAR(est.std_error, std::sqrt(2.0 / 100000), 2e-4);
  EXPECT_EQ(est.censored, 0u);
  EXPECT_EQ(est.method, EstimateMethod::kMonteCarlo);
}

TEST(EstimateEttr, SingleChannelMatchesClosedForm) {
  const auto env = Environment::homogeneous(2, 0.5, 0.1, kProfile);
  const auto est = estimate_ettr(policy(PolicyKind::kSingle, 2), env, estimation(10000, 4));
  EXPECT_NEAR(est.mean, testing::ref_single_channel_ettr(0.5, 0.1, 0.001), 3 * est.std_error);
}

TEST(EstimateEttr, UniformSixteenMatchesExact) {
  const auto env = Environment::homogeneous(16, 0.5, 0.9, kProfile);
  const auto p = policy(PolicyKind::kUniform, 16);
  const auto est = estimate_ettr(p, env, estimation(10000, 5));
  EXPECT_NEAR(est.mean, ettr_markov_exact(p, env).value, 3 * est.std_error);
}

TEST(EstimateEttr, UniformSixteenFastFading) {
  const auto env = Environment::homogeneous(16, 0.5, 0.1, kProfile);
  const auto p = policy(PolicyKind::kUniform, 16);
  const auto est = estimate_ettr(p, env, estimation(10000, 12));
  const double exact = ettr_markov_exact(p, env).value;
  EXPECT_NEAR(exact, 32.0, 0.1);
  EXPECT_NEAR(est.mean, exact, 3 * est.std_error);
}

TEST(EstimateEttr, AllCensoredReportsInfinity) {
  const auto env = Environment::homogeneous(3, 0.5, 0.5, RendezvousProfile(0.0, 0.0));
  TrialConfig c = estimation(50, 6);
  c.max_slots = 1000;
  const auto est = estimate_ettr(policy(PolicyKind::kUniform, 3), env, c);
  EXPECT_EQ(est.censored, 50u);
  EXPECT_TRUE(std::isinf(est.mean));
}

TEST(EstimateEttr, RejectsInvalidConfig) {
  const auto env = Environment::homogeneous(2, 0.5, 0.5, kProfile);
  EXPECT_THROW(estimate_ettr(policy(PolicyKind::kUniform, 2), env, estimation(0, 1)),
               InvalidParameter);
  EXPECT_THROW(estimate_ettr(policy(PolicyKind::kUniform, 3), env, estimation(10, 1)),
               InvalidParameter);
}

TEST(EstimateEttr, DeterministicAcrossWorkerCounts) {
  const auto env = Environment::homogeneous(8, 0.3, 0.7, kProfile);
  const auto p = policy(PolicyKind::kHarmonic, 8);
  TrialConfig c = estimation(3000, 77);
  c.workers = 1;
  const auto one = estimate_ettr(p, env, c);
  c.workers = 4;
  const auto four = estimate_ettr(p, env, c);
  EXPECT_EQ(one, four);
  c.seed = 78;
  EXPECT_NE(estimate_ettr(p, env, c).mean, one.mean);
}

// Property: for a fixed joint state the empirical per-slot success rate
// equals sum_i p_i^2 r(x_i).
TEST(EngineProperties, SlotSuccessFrequencyMatches) {
  const RendezvousProfile profile(0.2, 0.9);
  const auto p = policy(PolicyKind::kHarmonic, 5);
  const ChannelSampler sampler(p);
  Rng rng(31);
  for (const ChannelStateVector& x :
       {ChannelStateVector{1, 0, 1, 0, 0}, ChannelStateVector{0, 0, 0, 0, 0},
        ChannelStateVector{1, 1, 1, 1, 1}}) {
    const double q = slot_success_probability(p, profile, x);
    constexpr int kSlots = 200000;
    int hits = 0;
    for (int i = 0; i < kSlots; ++i) hits += attempt_rendezvous(sampler, profile, x, rng);
    EXPECT_NEAR(hits / double(kSlots), q, 3 * std::sqrt(q * (1 - q) / kSlots));
  }
}

TEST(TrialConfig, LearningValidation) {
  TrialConfig c;
  c.horizon = 0;
  EXPECT_THROW(c.validate_for_learning(), InvalidParameter);
  c.horizon = 100;
  c.checkpoints = {0, 50, 100};
  EXPECT_NO_THROW(c.validate_for_learning());
  c.checkpoints = {0, 101};
  EXPECT_THROW(c.validate_for_learning(), InvalidParameter);
  c.checkpoints = {50, 50};
  EXPECT_THROW(c.validate_for_learning(), InvalidParameter);
  c.checkpoints = {60, 50};
  EXPECT_THROW(c.validate_for_learning(), InvalidParameter);
}

TEST(RunLearningEpisode, UntrainedSnapshotIsUniformAndUsersAgree) {
  const auto env = Environment::homogeneous(6, 0.5, 0.5, kProfile);
  TrialConfig c;
  c.horizon = 20000;
  c.checkpoints = {0, 1, 1000, 20000};
  Rng rng(9);
  const auto trace = run_learning_episode(0.02, env, c, rng);
  ASSERT_EQ(trace.first_user.size(), 4u);
  for (double v : trace.first_user[0].values()) EXPECT_DOUBLE_EQ(v, 1.0 / 6);
  for (std::size_t k = 0; k < 4; ++k) EXPECT_EQ(trace.first_user[k], trace.second_user[k]);
  EXPECT_EQ(trace.rendezvous.size(), 20000u);
  std::uint64_t count = 0;
  for (bool b : trace.rendezvous) count += b;
  EXPECT_EQ(count, trace.successes);
  EXPECT_GT(trace.successes, 0u);
  EXPECT_EQ(trace.final_weights.size(), 6u);
}

TEST(RunLearningEpisode, NoRewardMeansNoLearning) {
  const auto env = Environment::homogeneous(4, 0.5, 0.5, RendezvousProfile(0.0, 0.0));
  TrialConfig c;
  c.horizon = 5000;
  c.checkpoints = {5000};
  Rng rng(10);
  const auto trace = run_learning_episode(0.02, env, c, rng);
  EXPECT_EQ(trace.successes, 0u);
  for (double v : trace.first_user[0].values()) EXPECT_DOUBLE_EQ(v, 0.25);
}

TEST(RunLearningEpisode, ConcentratesOnTheGoodChannel) {
  std::vector<ChannelParams> params(5, ChannelParams(0.0, 0.0));
  params[3] = ChannelParams(1.0, 0.0);
  const Environment env(params, RendezvousProfile(0.0, 1.0));
  TrialConfig c;
  c.horizon = 50000;
  c.checkpoints = {50000};
  Rng rng(11);
  const auto trace = run_learning_episode(0.02, env, c, rng);
  EXPECT_NEAR(trace.first_user[0][3], 1.0 - 0.02 + 0.02 / 5, 1e-6);
}

TEST(EttrVsTime, FirstCheckpointIsUniformExact) {
  const auto env = Environment::homogeneous(8, 0.5, 0.5, kProfile);
  TrialConfig c;
  c.runs = 6;
  c.horizon = 4000;
  c.checkpoints = {0, 4000};
  c.seed = 3;
  SnapshotEvaluation eval;
  eval.monte_carlo_runs = 200;
  const auto study = ettr_vs_time(0.02, env, c, eval);
  const double uniform = ettr_markov_exact(policy(PolicyKind::kUniform, 8), env).value;
  ASSERT_EQ(study.ettr.size(), 2u);
  EXPECT_NEAR(study.ettr[0].mean, uniform, 1e-9 * uniform);
  EXPECT_EQ(study.ettr[0].exact_evaluations, 6u);
  EXPECT_EQ(study.traces.size(), 6u);
  EXPECT_TRUE(study.traces[0].rendezvous.empty());
}

TEST(EttrVsTime, DeterministicAcrossWorkerCounts) {
  const auto env = Environment::homogeneous(5, 0.5, 0.5, kProfile);
  TrialConfig c;
  c.runs = 5;
  c.horizon = 3000;
  c.checkpoints = {0, 1500, 3000};
  c.seed = 4;
  SnapshotEvaluation eval;
  eval.exact_state_limit = 4;  // force the Monte Carlo path
  eval.monte_carlo_runs = 100;
  c.workers = 1;
  const auto a = ettr_vs_time(0.02, env, c, eval);
  c.workers = 3;
  const auto b = ettr_vs_time(0.02, env, c, eval);
  for (std::size_t k = 0; k < a.ettr.size(); ++k) {
    EXPECT_EQ(a.ettr[k].mean, b.ettr[k].mean);
    EXPECT_EQ(a.ettr[k].std_error, b.ettr[k].std_error);
    EXPECT_EQ(a.ettr[k].exact_evaluations, 0u);
  }
  for (std::size_t r = 0; r < a.traces.size(); ++r) {
    EXPECT_EQ(a.traces[r].final_weights, b.traces[r].final_weights);
  }
}

TEST(EttrVsTime, LearnedPolicyOnMostlyGoodChannels) {
  const auto env = Environment::homogeneous(16, 0.9, 0.1, kProfile);
  TrialConfig c;
  c.runs = 10;
  c.horizon = 100000;
  c.checkpoints = {0, 100000};
  c.seed = 21;
  SnapshotEvaluation eval;
  eval.monte_carlo_runs = 500;
  const auto study = ettr_vs_time(0.02, env, c, eval);
  EXPECT_GE(study.ettr.back().mean, 1.0);
  EXPECT_LE(study.ettr.back().mean, 1.5);
}

// With rho = omega = 0.5 the learners settle well after 5000 slots; see
// the horizon note in the acceptance suite.
TEST(RunLearningEpisode, HomogeneousConvergenceShape) {
  const auto env = Environment::homogeneous(16, 0.5, 0.5, kProfile);
  TrialConfig c;
  c.horizon = 200000;
  c.checkpoints = {200000};
  int converged = 0;
  for (std::uint64_t r = 0; r < 10; ++r) {
    Rng rng = make_stream(606, r);
    auto p = run_learning_episode(0.02, env, c, rng).first_user.back().vector();
    std::sort(p.rbegin(), p.rend());
    bool ok = p[0] >= 0.98;
    for (std::size_t i = 1; i < p.size(); ++i) ok = ok && std::abs(p[i] - 0.00125) <= 1e-3;
    converged += ok;
  }
  EXPECT_GE(converged, 8);
}

}  // namespace
}  // namespace rdv
