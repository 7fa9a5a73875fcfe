#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "specsense/di.hpp"
#include "specsense/model.hpp"

namespace specsense {

// Error probabilities of one pooled test. ratio = theta_min / theta0.
inline TestErrorProbs group_error_probs(double ratio, double gamma) {
    return test_error_probs(ratio, gamma);
}

/// A pooled test under evaluation: member set plus the derived test
/// statistics at its optimized threshold.
struct CycleCandidate {
    std::vector<int> members;
    double theta0 = 0.0;
    double theta_min = 0.0;
    double ratio = 0.0;
    double gamma = 0.0;
    double alpha = 1.0;
    double beta_max = 0.0;
    double unit_utility = 0.0;

    TestCycle to_test_cycle() const {
        TestCycle c;
        c.members = members;
        c.threshold = gamma;
        c.alpha = alpha;
        c.beta_max = beta_max;
        c.unit_utility = unit_utility;
        return c;
    }
};

namespace detail {

// Mode-specific closed-form pieces of a pooled test on member set C.
//
// SS: a single negative test declares every member empty.
//   stake = prod(omega) * sum(r)          value collected when the pool is
//                                         truly empty and the test agrees
//   net   = sum(omega*r - (1-omega)*rho)  prior-mean value of declaring the
//                                         whole pool empty unconditionally
//   u(gamma) = stake*(1-alpha) + beta_max*(net - stake),  gamma* = stake/(stake-net)
//
// R: a single positive test declares every member busy.
//   stake = prod(omega) * sum(rho)        penalty exposure when the pool is
//                                         empty but the test fires
//   net   = sum((1-omega)*r - omega*rho)  prior-mean value of declaring the
//                                         whole pool busy unconditionally
//   gain  = net + stake                   value of a perfect detector
//   u(gamma) = -stake*alpha + (1-beta_max)*gain,  gamma* = stake/gain
//
// Both reduce to the single-resource forms at |C| = 1. In R mode a pool
// with gain <= 0 cannot pay even under perfect detection; it is reported
// as uninformative (gamma = inf, u = 0).
struct CycleTerms {
    double stake;
    double net;
};

inline CycleTerms cycle_terms(std::span<const int> members, const ResourceEnsemble& ens) {
    double prod_empty = 1.0, sum_reward = 0.0, sum_penalty = 0.0, net = 0.0;
    for (int i : members) {
        const double w = ens.prior_empty[i], r = ens.reward[i], p = ens.penalty[i];
        prod_empty *= w;
        sum_reward += r;
        sum_penalty += p;
        net += ens.mode == Mode::SS ? w * r - (1.0 - w) * p : (1.0 - w) * r - w * p;
    }
    const double stake = prod_empty * (ens.mode == Mode::SS ? sum_reward : sum_penalty);
    return {stake, net};
}

}  // namespace detail

inline double cycle_theta0(std::span<const int> members, const ResourceEnsemble& ens) {
    double t = 0.0;
    for (int i : members) t += ens.noise_power[i];
    return t;
}

inline double cycle_ratio(std::span<const int> members, const ResourceEnsemble& ens) {
    const double t0 = cycle_theta0(members, ens);
    return (ens.min_signal_power + t0) / t0;
}

/// Utility-optimal threshold for the pooled test on `members`.
/// Size-1 pools defer to the single-resource threshold.
inline double cycle_threshold(std::span<const int> members, const ResourceEnsemble& ens) {
    if (members.empty()) throw std::invalid_argument("cycle_threshold: empty member set");
    if (members.size() == 1) return di_gamma(members[0], ens);
    const auto [stake, net] = detail::cycle_terms(members, ens);
    if (ens.mode == Mode::SS) {
        const double denom = stake - net;
        // net < 0 for every validated SS ensemble, so the denominator is positive
        if (!(denom > 0.0)) throw std::logic_error("cycle_threshold: non-positive denominator");
        return stake / denom;
    }
    const double gain = net + stake;
    if (!(gain > 0.0)) return std::numeric_limits<double>::infinity();
    return stake / gain;
}

/// Expected per-slot utility of the pooled test at an arbitrary threshold.
/// May be negative away from the optimum; used by grid searches.
inline double cycle_unit_utility_at(std::span<const int> members, const ResourceEnsemble& ens,
                                    double gamma) {
    const auto [alpha, beta] = test_error_probs(cycle_ratio(members, ens), gamma);
    const auto [stake, net] = detail::cycle_terms(members, ens);
    if (ens.mode == Mode::SS) return stake * (1.0 - alpha) + beta * (net - stake);
    return -stake * alpha + (1.0 - beta) * (net + stake);
}

/// Builds the fully-evaluated candidate at the optimized threshold.
inline CycleCandidate make_candidate(std::vector<int> members, const ResourceEnsemble& ens) {
    CycleCandidate c;
    c.members = std::move(members);
    std::sort(c.members.begin(), c.members.end());
    c.theta0 = cycle_theta0(c.members, ens);
    c.theta_min = ens.min_signal_power + c.theta0;
    c.ratio = c.theta_min / c.theta0;
    if (c.members.size() == 1) {
        const int i = c.members[0];
        c.gamma = di_gamma(i, ens);
        const auto e = di_error_probs(i, ens);
        c.alpha = e.alpha;
        c.beta_max = e.beta_max;
        c.unit_utility = di_unit_utility(i, ens);
        return c;
    }
    c.gamma = cycle_threshold(c.members, ens);
    const auto e = test_error_probs(c.ratio, c.gamma);
    c.alpha = e.alpha;
    c.beta_max = e.beta_max;
    c.unit_utility = std::max(cycle_unit_utility_at(c.members, ens, c.gamma), 0.0);
    return c;
}

inline double cycle_unit_utility(std::span<const int> members, const ResourceEnsemble& ens) {
    return make_candidate(std::vector<int>(members.begin(), members.end()), ens).unit_utility;
}

/// All candidate pools of size 1..max_pool. O(N^L) candidates; sizes above
/// 4 are refused unless explicitly allowed.
inline std::vector<CycleCandidate> enumerate_candidates(const ResourceEnsemble& ens, int max_pool,
                                                        bool allow_large_pools = false) {
    if (max_pool < 1) throw std::invalid_argument("enumerate_candidates: max_pool must be >= 1");
    if (max_pool > 4 && !allow_large_pools)
        throw std::invalid_argument(
            "enumerate_candidates: max_pool > 4 multiplies the candidate count by ~N per step; "
            "pass allow_large_pools to override");
    const int n = ens.size();
    std::vector<CycleCandidate> out;
    std::vector<int> pick;
    auto rec = [&](auto&& self, int start, int remaining) -> void {
        if (!pick.empty()) out.push_back(make_candidate(pick, ens));
        if (remaining == 0) return;
        for (int i = start; i < n; ++i) {
            pick.push_back(i);
            self(self, i + 1, remaining - 1);
            pick.pop_back();
        }
    };
    rec(rec, 0, std::min(max_pool, n));
    return out;
}

/// (K - kappa) * sum of cycle utilities. kappa >= K leaves no slot to use
/// what was learned and is rejected.
inline double plan_expected_utility(const SensingPlan& plan, int horizon) {
    if (plan.kappa() >= horizon)
        throw std::invalid_argument("plan_expected_utility: kappa must be < horizon");
    return plan_value(plan.cycles, horizon);
}

inline int upsilon(int degree) { return std::max(degree - 1, 0); }

/// Degree-penalized objective over an arbitrary (possibly overlapping)
/// cycle set: (K-|C|) sum u_C - M * sum_i max(deg(i)-1, 0).
inline double penalized_objective(std::span<const TestCycle> cycles, const ResourceEnsemble& ens,
                                  int horizon, double penalty_weight) {
    if (!(penalty_weight > 0.0))
        throw std::invalid_argument("penalized_objective: penalty weight must be > 0");
    std::vector<int> degree(ens.size(), 0);
    double tot = 0.0;
    for (const auto& c : cycles) {
        tot += c.unit_utility;
        for (int i : c.members) ++degree.at(i);
    }
    double penalty = 0.0;
    for (int d : degree) penalty += upsilon(d);
    return (horizon - static_cast<double>(cycles.size())) * tot - penalty_weight * penalty;
}

// Any weight above K * max_C u_C makes every constraint violation
// unprofitable; the margin covers rounding.
inline double default_penalty_weight(std::span<const CycleCandidate> candidates, int horizon) {
    double max_u = 0.0;
    for (const auto& c : candidates) max_u = std::max(max_u, c.unit_utility);
    return horizon * max_u * (1.0 + 1e-6) + 1e-12;
}

/// Worst-case ratio between the greedy plan and the optimum, as a function
/// of the largest pool size the greedy emitted.
inline double approximation_factor(int l_eff, int horizon) {
    if (l_eff < 1) throw std::invalid_argument("approximation_factor: l_eff must be >= 1");
    if (horizon < 2) throw std::invalid_argument("approximation_factor: horizon must be >= 2");
    const double d = std::min(static_cast<double>(l_eff), horizon / 2.0);
    return (1.0 / d) * (horizon - 1.0) / (horizon - d);
}

/// Greedy maximization over pooled tests: candidates are taken in
/// decreasing unit utility (ties: smaller pool, then lexicographic
/// members), skipping pools that touch an already-planned resource, and
/// the scan stops at the first disjoint candidate whose marginal value
/// (K - kappa - 1) u - sum(u) is non-positive.
inline SensingPlan greedy_plan(const ResourceEnsemble& ens, int horizon, int max_pool,
                               bool allow_large_pools = false) {
    auto candidates = enumerate_candidates(ens, max_pool, allow_large_pools);
    std::sort(candidates.begin(), candidates.end(),
              [](const CycleCandidate& a, const CycleCandidate& b) {
                  if (a.unit_utility != b.unit_utility) return a.unit_utility > b.unit_utility;
                  if (a.members.size() != b.members.size()) return a.members.size() < b.members.size();
                  return a.members < b.members;
              });

    SensingPlan plan;
    std::vector<char> used(ens.size(), 0);
    double tot = 0.0;
    for (const auto& cand : candidates) {
        if (plan.kappa() >= horizon - 1) break;
        bool blocked = false;
        for (int i : cand.members) blocked = blocked || used[i];
        if (blocked) continue;
        const double marginal = (horizon - plan.kappa() - 1) * cand.unit_utility - tot;
        if (!(marginal > 0.0)) break;
        for (int i : cand.members) used[i] = 1;
        tot += cand.unit_utility;
        plan.cycles.push_back(cand.to_test_cycle());
    }
    std::sort(plan.cycles.begin(), plan.cycles.end(),
              [](const TestCycle& x, const TestCycle& y) { return x.members < y.members; });
    plan.expected_utility = plan_value(plan.cycles, horizon);
    return plan;
}

}  // namespace specsense
