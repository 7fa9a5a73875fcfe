#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "specsense/model.hpp"

namespace specsense {

// log of the generalized likelihood ratio max_{theta >= theta_min}
// f_theta(y) / f_theta0(y) for an exponential energy sample. Monotone
// non-decreasing in y, so the decision is a threshold rule in y.
inline double glrt_log_lr(double y, double theta0, double theta_min) {
    if (!(y >= 0.0)) throw std::invalid_argument("glrt_log_lr: y must be >= 0");
    if (!(theta_min > theta0) || !(theta0 > 0.0))
        throw std::invalid_argument("glrt_log_lr: need theta_min > theta0 > 0");
    if (y <= theta_min) return std::log(theta0 / theta_min) + y * (1.0 / theta0 - 1.0 / theta_min);
    return std::log(theta0 / y) + y / theta0 - 1.0;
}

inline bool glrt_decide(double y, double theta0, double theta_min, double gamma) {
    return glrt_log_lr(y, theta0, theta_min) >= std::log(gamma);
}

inline bool glrt_decide(double y, const TestCycle& cycle, const ResourceEnsemble& ens) {
    return glrt_decide(y, cycle.theta0(ens), cycle.theta_min(ens), cycle.threshold);
}

/// Majority vote over the outcomes of every test touching one resource.
/// An even split counts as busy.
inline bool majority_decision(std::span<const std::uint8_t> outcomes) {
    if (outcomes.empty()) throw std::invalid_argument("majority_decision: no outcomes");
    int positives = 0;
    for (auto o : outcomes) positives += o ? 1 : 0;
    const int needed = (static_cast<int>(outcomes.size()) + 1) / 2;  // ceil(n/2)
    return positives >= needed;
}

struct PbdParams {
    std::vector<double> probs;
};

/// P(X <= k) for X a sum of independent Bernoulli(p_j), by the O(n^2)
/// convolution over success counts.
inline double pbd_cdf(int k, std::span<const double> probs) {
    const int n = static_cast<int>(probs.size());
    if (k < 0) return 0.0;
    if (k >= n) return 1.0;
    for (double p : probs)
        if (!(p >= 0.0) || !(p <= 1.0)) throw std::invalid_argument("pbd_cdf: p outside [0,1]");
    std::vector<double> pmf(n + 1, 0.0);
    pmf[0] = 1.0;
    for (int j = 0; j < n; ++j) {
        const double p = probs[j];
        for (int c = j + 1; c >= 1; --c) pmf[c] = pmf[c] * (1.0 - p) + pmf[c - 1] * p;
        pmf[0] *= 1.0 - p;
    }
    double cdf = 0.0;
    for (int c = 0; c <= k; ++c) cdf += pmf[c];
    return std::min(cdf, 1.0);
}

inline double pbd_cdf(int k, const PbdParams& params) {
    return pbd_cdf(k, std::span<const double>(params.probs));
}

struct ResourceErrorProbs {
    double alpha;  // P(declared busy | resource idle)
    double beta;   // P(declared idle | resource busy), using the per-test bound
};

/// Majority-vote error probabilities for resource i under a set of tests.
/// Each test containing i fires with probability
///   pi0 = (1 - prod_{j != i} omega_j)(1 - beta_max) + alpha * prod omega_j
/// when i is idle (a busy pool-mate may still trip the test) and
///   pi1 = 1 - beta_max
/// when i is busy. Tests must be conditionally independent given s_i,
/// which requires that no two tests share more than one resource.
inline ResourceErrorProbs resource_error_probs_gt(std::span<const TestCycle> tests, int i,
                                                  const ResourceEnsemble& ens) {
    std::vector<double> pi0, pi1;
    for (std::size_t a = 0; a < tests.size(); ++a) {
        for (std::size_t b = a + 1; b < tests.size(); ++b) {
            int shared = 0;
            for (int x : tests[a].members)
                shared += std::count(tests[b].members.begin(), tests[b].members.end(), x);
            if (shared > 1)
                throw std::invalid_argument(
                    "resource_error_probs_gt: two tests share more than one resource");
        }
    }
    for (const auto& t : tests) {
        if (std::find(t.members.begin(), t.members.end(), i) == t.members.end()) continue;
        double others_empty = 1.0;
        for (int j : t.members)
            if (j != i) others_empty *= ens.prior_empty[j];
        pi0.push_back((1.0 - others_empty) * (1.0 - t.beta_max) + t.alpha * others_empty);
        pi1.push_back(1.0 - t.beta_max);
    }
    if (pi0.empty())
        throw std::invalid_argument("resource_error_probs_gt: resource not covered by any test");
    const int m = static_cast<int>(pi0.size());
    const int threshold = (m + 1) / 2 - 1;  // ceil(m/2) - 1
    return {1.0 - pbd_cdf(threshold, std::span<const double>(pi0)),
            pbd_cdf(threshold, std::span<const double>(pi1))};
}

/// Exact per-member busy marginals P(s_i = 1 | y) for one pooled
/// observation, by enumerating the 2^|C| joint states. busy_power[j] is
/// the received power hypothesized for member j when busy (the signal
/// floor for a realizable detector, or the realized power for a
/// genie-aided benchmark).
inline std::vector<double> exact_group_posterior(double y, std::span<const int> members,
                                                 const ResourceEnsemble& ens,
                                                 std::span<const double> busy_power) {
    const int m = static_cast<int>(members.size());
    if (m == 0) throw std::invalid_argument("exact_group_posterior: empty member set");
    if (m > 20) throw std::invalid_argument("exact_group_posterior: pool too large to enumerate");
    if (busy_power.size() != members.size())
        throw std::invalid_argument("exact_group_posterior: busy_power size mismatch");
    if (!(y >= 0.0)) throw std::invalid_argument("exact_group_posterior: y must be >= 0");

    const std::uint32_t states = 1u << m;
    std::vector<double> log_w(states);
    double noise = 0.0;
    for (int j = 0; j < m; ++j) noise += ens.noise_power[members[j]];
    double max_lw = -std::numeric_limits<double>::infinity();
    for (std::uint32_t s = 0; s < states; ++s) {
        double theta = noise, log_prior = 0.0;
        for (int j = 0; j < m; ++j) {
            const int i = members[j];
            if (s & (1u << j)) {
                theta += busy_power[j];
                log_prior += std::log(1.0 - ens.prior_empty[i]);
            } else {
                log_prior += std::log(ens.prior_empty[i]);
            }
        }
        log_w[s] = log_prior - std::log(theta) - y / theta;
        max_lw = std::max(max_lw, log_w[s]);
    }
    double norm = 0.0;
    std::vector<double> marg(m, 0.0);
    for (std::uint32_t s = 0; s < states; ++s) {
        const double w = std::exp(log_w[s] - max_lw);
        norm += w;
        for (int j = 0; j < m; ++j)
            if (s & (1u << j)) marg[j] += w;
    }
    for (double& v : marg) v /= norm;
    return marg;
}

// Posterior threshold above which acting on "busy" (R) / refusing to act
// (SS) is the value-maximizing call for resource i.
inline double bayes_busy_threshold(int i, const ResourceEnsemble& ens) {
    const double r = ens.reward[i], p = ens.penalty[i];
    return ens.mode == Mode::SS ? r / (r + p) : p / (r + p);
}

inline bool map_decide(double busy_marginal, int i, const ResourceEnsemble& ens) {
    return busy_marginal > bayes_busy_threshold(i, ens);
}

}  // namespace specsense
