#include "rdv/policy.h"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "rdv/error.h"

namespace rdv {
namespace {

const std::vector<PolicySpec>& named_policies() {
  static const std::vector<PolicySpec> specs{
      PolicySpec::simple(PolicyKind::kSingle),   PolicySpec::simple(PolicyKind::kUniform),
      PolicySpec::one_plus_eps(0.2),             PolicySpec::simple(PolicyKind::kHarmonic),
      PolicySpec::simple(PolicyKind::kSquare),   PolicySpec::simple(PolicyKind::kSqrt),
  };
  return specs;
}

TEST(BuildPolicy, Uniform) {
  const auto p = build_policy(PolicySpec::simple(PolicyKind::kUniform), 16);
  for (double v : p.values()) EXPECT_DOUBLE_EQ(v, 0.0625);
}

TEST(BuildPolicy, Single) {
  const auto p = build_policy(PolicySpec::simple(PolicyKind::kSingle), 5);
  EXPECT_EQ(p.vector(), (std::vector<double>{1, 0, 0, 0, 0}));
}

TEST(BuildPolicy, HarmonicTwoChannels) {
  const auto p = build_policy(PolicySpec::simple(PolicyKind::kHarmonic), 2);
  EXPECT_NEAR(p[0], 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(p[1], 1.0 / 3.0, 1e-15);
}

TEST(BuildPolicy, SquareThreeChannels) {
  const auto p = build_policy(PolicySpec::simple(PolicyKind::kSquare), 3);
  EXPECT_NEAR(p[0], 36.0 / 49.0, 1e-15);
  EXPECT_NEAR(p[1], 9.0 / 49.0, 1e-15);
  EXPECT_NEAR(p[2], 4.0 / 49.0, 1e-15);
}

TEST(BuildPolicy, SqrtMatchesDirectNormalisation) {
  const auto p = build_policy(PolicySpec::simple(PolicyKind::kSqrt), 4);
  const double z = 1 + 1 / std::sqrt(2.0) + 1 / std::sqrt(3.0) + 0.5;
  EXPECT_NEAR(p[0], 1 / z, 1e-15);
  EXPECT_NEAR(p[3], 0.5 / z, 1e-15);
}

// Hand-derived: delta = (0.2 / 45)^2, u1 = 1 - 15 delta, p ~ sqrt(u).
TEST(BuildPolicy, OnePlusEpsSixteenChannels) {
  const auto p = build_policy(PolicySpec::one_plus_eps(0.2), 16);
  const double delta = std::pow(0.2 / 45.0, 2);
  const double z = std::sqrt(1 - 15 * delta) + 15 * std::sqrt(delta);
  EXPECT_NEAR(p[0], std::sqrt(1 - 15 * delta) / z, 1e-14);
  EXPECT_NEAR(p[0], 0.93749, 1e-5);
  for (std::size_t i = 1; i < 16; ++i) EXPECT_NEAR(p[i], 0.0041672, 1e-7);
}

TEST(BuildPolicy, OnePlusEpsTinyEpsConcentrates) {
  const auto p = build_policy(PolicySpec::one_plus_eps(1e-4), 16);
  EXPECT_GT(p[0], 0.999);
}

TEST(BuildPolicy, OnePlusEpsTooLarge) {
  // u1 <= 0 once eps >= 3 sqrt(n - 1).
  EXPECT_THROW(build_policy(PolicySpec::one_plus_eps(3.0), 2), InvalidSpec);
  EXPECT_NO_THROW(build_policy(PolicySpec::one_plus_eps(2.9), 2));
  EXPECT_THROW(PolicySpec::one_plus_eps(0.0), InvalidSpec);
  EXPECT_THROW(PolicySpec::one_plus_eps(-1.0), InvalidSpec);
}

TEST(BuildPolicy, RejectsFewerThanTwoChannels) {
  EXPECT_THROW(build_policy(PolicySpec::simple(PolicyKind::kUniform), 1), InvalidSpec);
  EXPECT_THROW(build_policy(PolicySpec::simple(PolicyKind::kUniform), 0), InvalidSpec);
}

TEST(BuildPolicy, ExplicitSizeMismatch) {
  const auto spec = PolicySpec::explicit_policy(ProbabilityVector({0.5, 0.5}));
  EXPECT_THROW(build_policy(spec, 3), InvalidSpec);
  EXPECT_EQ(build_policy(spec, 2).vector(), (std::vector<double>{0.5, 0.5}));
  EXPECT_THROW(PolicySpec::simple(PolicyKind::kExplicit), InvalidSpec);
}

TEST(ProbabilityVector, Validation) {
  EXPECT_THROW(ProbabilityVector({}), InvalidParameter);
  EXPECT_THROW(ProbabilityVector({0.5, 0.6}), InvalidParameter);
  EXPECT_THROW(ProbabilityVector({1.5, -0.5}), InvalidParameter);
  EXPECT_THROW(ProbabilityVector({NAN, 1.0}), InvalidParameter);
  EXPECT_NO_THROW(ProbabilityVector({0.5, 0.5 + 5e-10}));
  EXPECT_NEAR(ProbabilityVector({0.5, 0.25, 0.25}).collision_probability(), 0.375, 1e-15);
}

TEST(PolicyKindNames, RoundTrip) {
  for (auto kind : {PolicyKind::kSingle, PolicyKind::kUniform, PolicyKind::kOnePlusEps,
                    PolicyKind::kHarmonic, PolicyKind::kSquare, PolicyKind::kSqrt,
                    PolicyKind::kExplicit}) {
    EXPECT_EQ(parse_policy_kind(policy_kind_name(kind)), kind);
  }
  EXPECT_FALSE(parse_policy_kind("triangle").has_value());
}

TEST(Exp3LimitPolicy, Shape) {
  const auto p = exp3_limit_policy(0.02, 16);
  EXPECT_NEAR(p[0], 0.98125, 1e-15);
  for (std::size_t i = 1; i < 16; ++i) EXPECT_NEAR(p[i], 0.00125, 1e-15);
  EXPECT_THROW(exp3_limit_policy(0.0, 16), InvalidParameter);
  EXPECT_THROW(exp3_limit_policy(0.02, 1), InvalidParameter);
}

// Property: every named policy is a valid, nonincreasing distribution for
// every size up to 1024.
TEST(PolicyProperties, ValidAndNonincreasingForAllSizes) {
  for (std::size_t n = 2; n <= 1024; n = n < 40 ? n + 1 : n * 2 - 1) {
    for (const auto& spec : named_policies()) {
      const auto p = build_policy(spec, n);
      ASSERT_EQ(p.size(), n);
      long double total = 0;
      for (std::size_t i = 0; i < n; ++i) {
        ASSERT_GE(p[i], 0.0);
        total += p[i];
        if (i > 0) ASSERT_LE(p[i], p[i - 1]) << policy_kind_name(spec.kind()) << " n=" << n;
      }
      ASSERT_NEAR(static_cast<double>(total), 1.0, 1e-9);
    }
  }
}

// Property: sampled channel frequencies match the vector within 3 sigma and
// zero-probability channels are never drawn.
TEST(ChannelSampler, FrequenciesMatch) {
  const ProbabilityVector p({0.5, 0.0, 0.3, 0.2, 0.0});
  const ChannelSampler sampler(p);
  Rng rng(4242);
  constexpr int kDraws = 200000;
  std::vector<int> counts(p.size(), 0);
  for (int i = 0; i < kDraws; ++i) ++counts[sampler(rng)];
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double se = std::sqrt(p[i] * (1 - p[i]) / kDraws);
    EXPECT_NEAR(counts[i] / double(kDraws), p[i], 3 * se + 1e-12) << "channel " << i;
  }
  EXPECT_EQ(counts[1], 0);
  EXPECT_EQ(counts[4], 0);
}

}  // namespace
}  // namespace rdv
