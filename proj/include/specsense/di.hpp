#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "specsense/model.hpp"

namespace specsense {

struct TestErrorProbs {
    double alpha;      // false-alarm probability of the binary test
    double beta_max;   // missed-detection bound at theta = theta_min
};

// Closed-form error probabilities of the energy test "declare busy iff
// LR(y) >= gamma" for a pool whose statistic mean is theta0 when idle
// and at least theta_min = ratio * theta0 when active. Valid for any
// pool size; ratio > 1 is required (a positive signal floor guarantees it).
inline TestErrorProbs test_error_probs(double ratio, double gamma) {
    if (!(ratio > 1.0)) throw std::invalid_argument("test_error_probs: ratio must be > 1");
    if (!(gamma > 0.0)) throw std::invalid_argument("test_error_probs: gamma must be > 0");
    if (std::isinf(gamma)) return {0.0, 1.0};
    const double x = gamma * ratio;
    if (x <= 1.0) return {1.0, 0.0};  // threshold at zero energy: always fire
    double alpha = std::exp(-(ratio / (ratio - 1.0)) * std::log(x));
    alpha = std::clamp(alpha, 0.0, 1.0);
    const double beta = alpha >= 1.0 ? 0.0 : 1.0 - std::pow(alpha, 1.0 / ratio);
    return {alpha, std::clamp(beta, 0.0, 1.0)};
}

// Idle-to-active mean ratio of a single-resource test.
inline double di_ratio(int i, const ResourceEnsemble& ens) {
    return (ens.min_signal_power + ens.noise_power[i]) / ens.noise_power[i];
}

// Utility-optimal likelihood-ratio threshold for inspecting resource i alone.
inline double di_gamma(int i, const ResourceEnsemble& ens) {
    const double w = ens.prior_empty[i], r = ens.reward[i], p = ens.penalty[i];
    return ens.mode == Mode::SS ? r * w / (p * (1.0 - w)) : p * w / (r * (1.0 - w));
}

inline TestErrorProbs di_error_probs(int i, const ResourceEnsemble& ens) {
    return test_error_probs(di_ratio(i, ens), di_gamma(i, ens));
}

// Expected per-slot utility of testing resource i alone at the optimized
// threshold. Never negative: an uninformative test (alpha = 1) scores 0.
inline double di_unit_utility(int i, const ResourceEnsemble& ens) {
    const auto [alpha, beta] = di_error_probs(i, ens);
    const double w = ens.prior_empty[i], r = ens.reward[i], p = ens.penalty[i];
    const double u = ens.mode == Mode::SS
                         ? w * r * (1.0 - alpha) - (1.0 - w) * p * beta
                         : (1.0 - w) * r * (1.0 - beta) - w * p * alpha;
    return std::max(u, 0.0);
}

struct DiAssessment {
    std::vector<double> alpha;
    std::vector<double> beta_max;
    std::vector<double> unit_utility;
    std::vector<double> gamma;
};

inline DiAssessment assess_di(const ResourceEnsemble& ens) {
    DiAssessment a;
    const int n = ens.size();
    a.alpha.resize(n);
    a.beta_max.resize(n);
    a.unit_utility.resize(n);
    a.gamma.resize(n);
    for (int i = 0; i < n; ++i) {
        a.gamma[i] = di_gamma(i, ens);
        const auto e = di_error_probs(i, ens);
        a.alpha[i] = e.alpha;
        a.beta_max[i] = e.beta_max;
        a.unit_utility[i] = di_unit_utility(i, ens);
    }
    return a;
}

inline TestCycle make_di_cycle(int i, const DiAssessment& a) {
    TestCycle c;
    c.members = {i};
    c.threshold = a.gamma[i];
    c.alpha = a.alpha[i];
    c.beta_max = a.beta_max[i];
    c.unit_utility = a.unit_utility[i];
    return c;
}

// Canonical plan value: (K - kappa) times the unit utilities summed in
// ascending member order, so that independently enumerated plans over the
// same cycles produce bit-identical doubles.
inline double plan_value(const std::vector<TestCycle>& cycles, int horizon) {
    std::vector<const TestCycle*> order;
    order.reserve(cycles.size());
    for (const auto& c : cycles) order.push_back(&c);
    std::sort(order.begin(), order.end(),
              [](const TestCycle* a, const TestCycle* b) { return a->members < b->members; });
    double tot = 0.0;
    for (const auto* c : order) tot += c->unit_utility;
    return (horizon - static_cast<int>(cycles.size())) * tot;
}

/// Best scan-only plan: resources sorted by unit utility (ties to the
/// lower index), prefix grown while the marginal gain stays positive.
/// The first non-positive marginal is final; diminishing returns make the
/// condition permanent once attained.
inline SensingPlan di_plan(const ResourceEnsemble& ens, int horizon) {
    const DiAssessment a = assess_di(ens);
    const int n = ens.size();
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int x, int y) {
        if (a.unit_utility[x] != a.unit_utility[y]) return a.unit_utility[x] > a.unit_utility[y];
        return x < y;
    });

    SensingPlan plan;
    double tot = 0.0;
    const int cap = std::min(n, horizon - 1);
    for (int m = 0; m < cap; ++m) {
        const int i = order[m];
        const double marginal = (horizon - m - 1) * a.unit_utility[i] - tot;
        if (!(marginal > 0.0)) break;
        plan.cycles.push_back(make_di_cycle(i, a));
        tot += a.unit_utility[i];
    }
    std::sort(plan.cycles.begin(), plan.cycles.end(),
              [](const TestCycle& x, const TestCycle& y) { return x.members < y.members; });
    plan.expected_utility = plan_value(plan.cycles, horizon);
    return plan;
}

}  // namespace specsense
