#include "rdv/policy.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <utility>

#include "rdv/error.h"

namespace rdv {
namespace {

constexpr std::array<std::pair<PolicyKind, std::string_view>, 7> kKindNames{{
    {PolicyKind::kSingle, "single"},
    {PolicyKind::kUniform, "uniform"},
    {PolicyKind::kOnePlusEps, "one-plus-eps"},
    {PolicyKind::kHarmonic, "harmonic"},
    {PolicyKind::kSquare, "square"},
    {PolicyKind::kSqrt, "sqrt"},
    {PolicyKind::kExplicit, "explicit"},
}};

// Normalises unnormalised masses accumulated in long double.
ProbabilityVector normalize(const std::vector<long double>& mass) {
  long double total = 0.0L;
  for (long double m : mass) total += m;
  std::vector<double> p(mass.size());
  for (std::size_t i = 0; i < mass.size(); ++i) {
    p[i] = static_cast<double>(mass[i] / total);
  }
  return ProbabilityVector(std::move(p));
}

template <typename F>
ProbabilityVector power_law(std::size_t n, F&& mass_of_rank) {
  std::vector<long double> mass(n);
  for (std::size_t i = 0; i < n; ++i) {
    mass[i] = mass_of_rank(static_cast<long double>(i + 1));
  }
  return normalize(mass);
}

}  // namespace

ProbabilityVector::ProbabilityVector(std::vector<double> p) : p_(std::move(p)) {
  if (p_.empty()) throw InvalidParameter("probability vector is empty");
  long double total = 0.0L;
  for (double v : p_) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw InvalidParameter("probability entries must be finite and >= 0");
    }
    total += v;
  }
  if (std::fabs(static_cast<double>(total) - 1.0) > kSumTolerance) {
    throw InvalidParameter("probabilities sum to " +
                           std::to_string(static_cast<double>(total)));
  }
}

double ProbabilityVector::collision_probability() const noexcept {
  double sum = 0.0;
  for (double v : p_) sum += v * v;
  return sum;
}

ChannelSampler::ChannelSampler(const ProbabilityVector& p) : cdf_(p.size()) {
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    acc += p[i];
    cdf_[i] = acc;
    if (p[i] > 0.0) last_positive_ = i;
  }
}

std::size_t ChannelSampler::operator()(Rng& rng) const {
  const double u = uniform01(rng) * cdf_.back();
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  const auto idx = static_cast<std::size_t>(it - cdf_.begin());
  return std::min(idx, last_positive_);
}

std::string_view policy_kind_name(PolicyKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

std::optional<PolicyKind> parse_policy_kind(std::string_view name) {
  for (const auto& [k, n] : kKindNames) {
    if (n == name) return k;
  }
  return std::nullopt;
}

PolicySpec PolicySpec::simple(PolicyKind kind) {
  if (kind == PolicyKind::kOnePlusEps || kind == PolicyKind::kExplicit) {
    throw InvalidSpec(std::string(policy_kind_name(kind)) +
                      " needs its parameter");
  }
  return PolicySpec(kind, std::nullopt, std::nullopt);
}

PolicySpec PolicySpec::one_plus_eps(double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw InvalidSpec("one-plus-eps requires a positive finite eps");
  }
  return PolicySpec(PolicyKind::kOnePlusEps, eps, std::nullopt);
}

PolicySpec PolicySpec::explicit_policy(ProbabilityVector p) {
  return PolicySpec(PolicyKind::kExplicit, std::nullopt, std::move(p));
}

ProbabilityVector build_policy(const PolicySpec& spec, std::size_t n) {
  if (n < 2) throw InvalidSpec("policies need at least two channels");

  switch (spec.kind()) {
    case PolicyKind::kSingle: {
      std::vector<double> p(n, 0.0);
      p[0] = 1.0;
      return ProbabilityVector(std::move(p));
    }
    case PolicyKind::kUniform:
      return ProbabilityVector(std::vector<double>(n, 1.0 / n));
    case PolicyKind::kOnePlusEps: {
      const long double others = static_cast<long double>(n - 1);
      const long double ratio = *spec.eps() / (3.0L * others);
      const long double delta = ratio * ratio;
      const long double u1 = 1.0L - others * delta;
      if (!(u1 > 0.0L)) {
        throw InvalidSpec("eps too large: u_1 = 1 - (n - 1) delta <= 0");
      }
      std::vector<long double> mass(n, std::sqrt(delta));
      mass[0] = std::sqrt(u1);
      return normalize(mass);
    }
    case PolicyKind::kHarmonic:
      return power_law(n, [](long double i) { return 1.0L / i; });
    case PolicyKind::kSquare:
      return power_law(n, [](long double i) { return 1.0L / (i * i); });
    case PolicyKind::kSqrt:
      return power_law(n, [](long double i) { return 1.0L / std::sqrt(i); });
    case PolicyKind::kExplicit:
      if (spec.explicit_p()->size() != n) {
        throw InvalidSpec("explicit policy has " +
                          std::to_string(spec.explicit_p()->size()) +
                          " entries, expected " + std::to_string(n));
      }
      return *spec.explicit_p();
  }
  throw InvalidSpec("unknown policy kind");
}

ProbabilityVector exp3_limit_policy(double gamma, std::size_t n) {
  if (!(gamma > 0.0 && gamma <= 1.0) || n < 2) {
    throw InvalidParameter("exp3 limit needs gamma in (0, 1] and n >= 2");
  }
  std::vector<double> p(n, gamma / static_cast<double>(n));
  p[0] = 1.0 - gamma + gamma / static_cast<double>(n);
  return ProbabilityVector(std::move(p));
}

}  // namespace rdv
