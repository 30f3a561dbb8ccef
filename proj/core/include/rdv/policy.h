#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rdv/random.h"

namespace rdv {

// Channel-selection distribution of a blind rendezvous policy. Entries are
// nonnegative and sum to one within 1e-9; storage slot i holds the
// probability of channel i + 1.
class ProbabilityVector {
 public:
  static constexpr double kSumTolerance = 1e-9;

  // Throws InvalidParameter on negative/non-finite entries, an empty vector
  // or a sum farther than kSumTolerance from one.
  explicit ProbabilityVector(std::vector<double> p);

  std::size_t size() const noexcept { return p_.size(); }
  double operator[](std::size_t i) const noexcept { return p_[i]; }
  std::span<const double> values() const noexcept { return p_; }
  const std::vector<double>& vector() const noexcept { return p_; }

  // Sum of p_i^2, the chance two independent draws coincide.
  double collision_probability() const noexcept;

  friend bool operator==(const ProbabilityVector&,
                         const ProbabilityVector&) = default;

 private:
  std::vector<double> p_;
};

// Inverse-CDF sampler over a fixed ProbabilityVector.
class ChannelSampler {
 public:
  explicit ChannelSampler(const ProbabilityVector& p);

  std::size_t operator()(Rng& rng) const;

 private:
  std::vector<double> cdf_;
  std::size_t last_positive_ = 0;
};

enum class PolicyKind {
  kSingle,
  kUniform,
  kOnePlusEps,
  kHarmonic,
  kSquare,
  kSqrt,
  kExplicit,
};

std::string_view policy_kind_name(PolicyKind kind);
std::optional<PolicyKind> parse_policy_kind(std::string_view name);

class PolicySpec {
 public:
  // For every kind except kOnePlusEps and kExplicit.
  static PolicySpec simple(PolicyKind kind);
  static PolicySpec one_plus_eps(double eps);
  static PolicySpec explicit_policy(ProbabilityVector p);

  PolicyKind kind() const noexcept { return kind_; }
  const std::optional<double>& eps() const noexcept { return eps_; }
  const std::optional<ProbabilityVector>& explicit_p() const noexcept {
    return explicit_p_;
  }

 private:
  PolicySpec(PolicyKind kind, std::optional<double> eps,
             std::optional<ProbabilityVector> p)
      : kind_(kind), eps_(eps), explicit_p_(std::move(p)) {}

  PolicyKind kind_;
  std::optional<double> eps_;
  std::optional<ProbabilityVector> explicit_p_;
};

// Throws InvalidSpec when n < 2, when eps leaves no mass for channel 1, or
// when an explicit vector does not have n entries.
ProbabilityVector build_policy(const PolicySpec& spec, std::size_t n);

// The point Exp3 converges to when one weight dominates:
// (1 - gamma + gamma / n, gamma / n, ..., gamma / n).
ProbabilityVector exp3_limit_policy(double gamma, std::size_t n);

}  // namespace rdv
