#include "rdv/oracle.h"

#include <Eigen/Dense>

#include <cmath>
#include <deque>
#include <string>
#include <vector>

#include "rdv/error.h"

namespace rdv {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Channels sharing selection probability and chain parameters.
struct Group {
  double p;
  ChannelParams params;
  std::size_t count;
};

std::vector<double> binomial_pmf(std::size_t n, double p) {
  std::vector<double> pmf(n + 1, 0.0);
  if (p <= 0.0) {
    pmf[0] = 1.0;
    return pmf;
  }
  if (p >= 1.0) {
    pmf[n] = 1.0;
    return pmf;
  }
  const double nn = static_cast<double>(n);
  for (std::size_t k = 0; k <= n; ++k) {
    const double kk = static_cast<double>(k);
    const double log_choose =
        std::lgamma(nn + 1.0) - std::lgamma(kk + 1.0) - std::lgamma(nn - kk + 1.0);
    pmf[k] = std::exp(log_choose + kk * std::log(p) +
                      (nn - kk) * std::log1p(-p));
  }
  return pmf;
}

// Joint state space after lumping. A state is a vector of good-channel
// counts, one per group, packed as a mixed-radix index.
class LumpedSpace {
 public:
  LumpedSpace(const ProbabilityVector& policy, const Environment& env,
              std::size_t state_limit)
      : profile_(env.profile()) {
    if (policy.size() != env.size()) {
      throw InvalidParameter("policy has " + std::to_string(policy.size()) +
                             " entries for " + std::to_string(env.size()) +
                             " channels");
    }
    for (std::size_t i = 0; i < policy.size(); ++i) {
      if (policy[i] <= 0.0) continue;
      bool merged = false;
      for (auto& g : groups_) {
        if (g.p == policy[i] && g.params == env.channel(i)) {
          ++g.count;
          merged = true;
          break;
        }
      }
      if (!merged) groups_.push_back({policy[i], env.channel(i), 1});
    }
    states_ = 1;
    for (const auto& g : groups_) {
      if (states_ > state_limit / (g.count + 1)) {
        throw DimensionTooLarge("lumped joint state space exceeds " +
                                std::to_string(state_limit) + " states");
      }
      states_ *= g.count + 1;
    }
  }

  std::size_t states() const noexcept { return states_; }
  const std::vector<Group>& groups() const noexcept { return groups_; }

  std::vector<std::size_t> counts(std::size_t index) const {
    std::vector<std::size_t> k(groups_.size());
    for (std::size_t j = 0; j < groups_.size(); ++j) {
      k[j] = index % (groups_[j].count + 1);
      index /= groups_[j].count + 1;
    }
    return k;
  }

  double success(const std::vector<std::size_t>& k) const {
    double q = 0.0;
    for (std::size_t j = 0; j < groups_.size(); ++j) {
      const auto& g = groups_[j];
      const double good = static_cast<double>(k[j]);
      const double bad = static_cast<double>(g.count - k[j]);
      q += g.p * g.p * (good * profile_.r1() + bad * profile_.r0());
    }
    return q;
  }

  std::vector<double> stationary() const {
    std::vector<std::vector<double>> marginals;
    for (const auto& g : groups_) {
      marginals.push_back(binomial_pmf(g.count, g.params.rho()));
    }
    std::vector<double> pi(states_);
    for (std::size_t s = 0; s < states_; ++s) {
      const auto k = counts(s);
      double prob = 1.0;
      for (std::size_t j = 0; j < groups_.size(); ++j) prob *= marginals[j][k[j]];
      pi[s] = prob;
    }
    return pi;
  }

  // Row-stochastic one-slot kernel of each group's good-channel count.
  std::vector<Eigen::MatrixXd> group_kernels() const {
    std::vector<Eigen::MatrixXd> kernels;
    for (const auto& g : groups_) {
      const TransitionProbs t = derive_transitions(g.params);
      Eigen::MatrixXd kernel = Eigen::MatrixXd::Zero(g.count + 1, g.count + 1);
      for (std::size_t k = 0; k <= g.count; ++k) {
        const auto stay_good = binomial_pmf(k, t.p11);
        const auto turn_good = binomial_pmf(g.count - k, 1.0 - t.p00);
        for (std::size_t a = 0; a < stay_good.size(); ++a) {
          for (std::size_t b = 0; b < turn_good.size(); ++b) {
            kernel(k, a + b) += stay_good[a] * turn_good[b];
          }
        }
      }
      kernels.push_back(std::move(kernel));
    }
    return kernels;
  }

 private:
  RendezvousProfile profile_;
  std::vector<Group> groups_;
  std::size_t states_ = 1;
};

// Marks every state from which `targets` is reachable along `edges`.
std::vector<char> backward_reach(const std::vector<char>& targets,
                                 const std::vector<std::vector<std::size_t>>& preds) {
  std::vector<char> hit = targets;
  std::deque<std::size_t> queue;
  for (std::size_t s = 0; s < hit.size(); ++s) {
    if (hit[s]) queue.push_back(s);
  }
  while (!queue.empty()) {
    const std::size_t s = queue.front();
    queue.pop_front();
    for (std::size_t from : preds[s]) {
      if (!hit[from]) {
        hit[from] = 1;
        queue.push_back(from);
      }
    }
  }
  return hit;
}

}  // namespace

std::string_view exact_method_name(ExactMethod method) {
  switch (method) {
    case ExactMethod::kIidClosedForm:
      return "iid-closed-form";
    case ExactMethod::kFrozenClosedForm:
      return "frozen-closed-form";
    case ExactMethod::kMarkovLinearSolve:
      return "markov-linear-solve";
  }
  return "unknown";
}

std::size_t lumped_state_count(const ProbabilityVector& policy,
                               const Environment& env) {
  try {
    return LumpedSpace(policy, env, std::numeric_limits<std::size_t>::max())
        .states();
  } catch (const DimensionTooLarge&) {
    return std::numeric_limits<std::size_t>::max();
  }
}

ExactEttr ettr_iid(const ProbabilityVector& policy, const Environment& env) {
  if (policy.size() != env.size()) {
    throw InvalidParameter("policy and environment sizes differ");
  }
  double q = 0.0;
  for (std::size_t i = 0; i < policy.size(); ++i) {
    q += policy[i] * policy[i] *
         mean_rendezvous_prob(env.channel(i), env.profile());
  }
  return {q > 0.0 ? 1.0 / q : kInf, ExactMethod::kIidClosedForm};
}

ExactEttr ettr_frozen(const ProbabilityVector& policy, const Environment& env,
                      std::size_t state_limit) {
  const LumpedSpace space(policy, env, state_limit);
  const auto pi = space.stationary();
  double value = 0.0;
  for (std::size_t s = 0; s < space.states(); ++s) {
    if (pi[s] <= 0.0) continue;
    const double q = space.success(space.counts(s));
    if (q <= 0.0) return {kInf, ExactMethod::kFrozenClosedForm};
    value += pi[s] / q;
  }
  return {value, ExactMethod::kFrozenClosedForm};
}

ExactEttr ettr_markov_exact(const ProbabilityVector& policy,
                            const Environment& env, std::size_t state_limit) {
  const LumpedSpace space(policy, env, state_limit);
  const std::size_t n = space.states();
  const auto kernels = space.group_kernels();
  const auto pi = space.stationary();

  std::vector<double> q(n);
  std::vector<std::vector<std::size_t>> counts(n);
  for (std::size_t s = 0; s < n; ++s) {
    counts[s] = space.counts(s);
    q[s] = space.success(counts[s]);
  }

  Eigen::MatrixXd kernel(n, n);
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t t = 0; t < n; ++t) {
      double prob = 1.0;
      for (std::size_t j = 0; j < kernels.size(); ++j) {
        prob *= kernels[j](counts[s][j], counts[t][j]);
      }
      kernel(s, t) = prob;
    }
  }

  // The game continues out of s with probability 1 - q(s). A state has a
  // finite hitting time iff it cannot continue into a state from which no
  // success is reachable.
  std::vector<std::vector<std::size_t>> preds(n);
  for (std::size_t s = 0; s < n; ++s) {
    if (q[s] >= 1.0) continue;
    for (std::size_t t = 0; t < n; ++t) {
      if (kernel(s, t) > 0.0) preds[t].push_back(s);
    }
  }
  std::vector<char> succeeds(n);
  for (std::size_t s = 0; s < n; ++s) succeeds[s] = q[s] > 0.0;
  const auto can_succeed = backward_reach(succeeds, preds);
  std::vector<char> stuck(n);
  for (std::size_t s = 0; s < n; ++s) stuck[s] = !can_succeed[s];
  const auto infinite = backward_reach(stuck, preds);

  std::vector<std::size_t> live;
  for (std::size_t s = 0; s < n; ++s) {
    if (infinite[s]) {
      if (pi[s] > 0.0) return {kInf, ExactMethod::kMarkovLinearSolve};
    } else {
      live.push_back(s);
    }
  }

  const auto m = static_cast<Eigen::Index>(live.size());
  Eigen::MatrixXd system = Eigen::MatrixXd::Identity(m, m);
  for (Eigen::Index a = 0; a < m; ++a) {
    const double carry = 1.0 - q[live[a]];
    for (Eigen::Index b = 0; b < m; ++b) {
      system(a, b) -= carry * kernel(live[a], live[b]);
    }
  }
  const Eigen::VectorXd h =
      system.partialPivLu().solve(Eigen::VectorXd::Ones(m));

  double value = 0.0;
  for (Eigen::Index a = 0; a < m; ++a) value += pi[live[a]] * h(a);
  return {value, ExactMethod::kMarkovLinearSolve};
}

}  // namespace rdv
