#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "specsense/rng.hpp"

namespace specsense {

// Utility accrues on resources declared empty (SS, opportunistic access)
// or declared busy (R, e.g. ranging/jamming style applications).
enum class Mode : std::uint8_t { SS, R };

inline const char* mode_name(Mode m) { return m == Mode::SS ? "SS" : "R"; }

/// Immutable description of the N sensing resources plus the decision
/// horizon. Penalties are stored as positive magnitudes; every utility
/// formula in the library spells the sign out explicitly.
struct ResourceEnsemble {
    std::vector<double> prior_empty;   // omega_i = P(s_i = 0)
    std::vector<double> reward;        // r_i > 0, utility per slot
    std::vector<double> penalty;       // |rho_i| > 0, utility per slot
    std::vector<double> noise_power;   // n_i > 0, Watts
    double min_signal_power = 0.0;     // phi_min > 0, Watts
    Mode mode = Mode::SS;
    int horizon = 0;                   // K >= 2 slots

    int size() const { return static_cast<int>(prior_empty.size()); }

    // Largest prior (SS) / smallest prior (R) for which an untested
    // resource cannot carry positive utility.
    double prior_bound(int i) const {
        return mode == Mode::SS ? penalty[i] / (penalty[i] + reward[i])
                                : reward[i] / (penalty[i] + reward[i]);
    }

    double snr_floor(int i) const { return min_signal_power / noise_power[i]; }
};

/// Checks positivity, the horizon, and the per-resource prior bound for
/// the declared mode. Throws std::invalid_argument naming the offending
/// resource and bound.
inline ResourceEnsemble validate_ensemble(ResourceEnsemble raw) {
    const std::size_t n = raw.prior_empty.size();
    if (n == 0) throw std::invalid_argument("ensemble: no resources");
    if (raw.reward.size() != n || raw.penalty.size() != n || raw.noise_power.size() != n)
        throw std::invalid_argument("ensemble: field lengths disagree");
    if (raw.horizon < 2) throw std::invalid_argument("ensemble: horizon K must be >= 2");
    if (!(raw.min_signal_power > 0.0))
        throw std::invalid_argument("ensemble: min_signal_power must be > 0");
    for (std::size_t i = 0; i < n; ++i) {
        const std::string at = " (resource " + std::to_string(i) + ")";
        if (!(raw.prior_empty[i] > 0.0) || !(raw.prior_empty[i] < 1.0))
            throw std::invalid_argument("ensemble: prior_empty must lie in (0,1)" + at);
        if (!(raw.reward[i] > 0.0)) throw std::invalid_argument("ensemble: reward must be > 0" + at);
        if (!(raw.penalty[i] > 0.0)) throw std::invalid_argument("ensemble: penalty must be > 0" + at);
        if (!(raw.noise_power[i] > 0.0))
            throw std::invalid_argument("ensemble: noise_power must be > 0" + at);
        const double bound = raw.prior_bound(static_cast<int>(i));
        const bool ok = raw.mode == Mode::SS ? raw.prior_empty[i] < bound
                                             : raw.prior_empty[i] > bound;
        if (!ok)
            throw std::invalid_argument(
                "ensemble: prior_empty " + std::to_string(raw.prior_empty[i]) +
                std::string(raw.mode == Mode::SS ? " must be < " : " must be > ") +
                std::to_string(bound) + at);
    }
    return raw;
}

/// Realized occupancy for one trial. signal_power[i] is zero for empty
/// resources and >= phi_min for busy ones.
struct GroundTruth {
    std::vector<std::uint8_t> occupied;   // s_i
    std::vector<double> signal_power;     // phi_i
};

/// One measurement: the mixed resource set (binary coefficients), its
/// optimized threshold and the per-test error numbers.
struct TestCycle {
    std::vector<int> members;   // distinct, ascending
    double threshold = 0.0;     // gamma
    double alpha = 1.0;         // false-alarm probability
    double beta_max = 0.0;      // worst-case missed-detection bound
    double unit_utility = 0.0;  // expected utility per remaining slot

    double theta0(const ResourceEnsemble& ens) const {
        double t = 0.0;
        for (int i : members) t += ens.noise_power[i];
        return t;
    }
    double theta_min(const ResourceEnsemble& ens) const {
        return ens.min_signal_power + theta0(ens);
    }
};

/// A disjoint set of test cycles; kappa() slots are spent sensing,
/// horizon - kappa() remain for exploitation.
struct SensingPlan {
    std::vector<TestCycle> cycles;
    double expected_utility = 0.0;

    int kappa() const { return static_cast<int>(cycles.size()); }

    int max_cycle_size() const {
        int m = 1;
        for (const auto& c : cycles) m = std::max(m, static_cast<int>(c.members.size()));
        return m;
    }
};

/// Everything observed and decided in one Monte-Carlo trial.
/// decision[i] uses the mode's null action for untested resources
/// (SS: declared busy, R: declared empty), which carries zero utility.
struct TrialRecord {
    std::vector<double> observations;
    std::vector<std::uint8_t> test_positive;
    std::vector<std::uint8_t> decision;
    std::vector<std::uint8_t> tested;
    double realized_utility = 0.0;
};

// theta = sum over members of (s_i*phi_i + n_i). The occupancy gates the
// signal power; an empty resource folds only its noise into the sample.
inline double theta_of(std::span<const int> members, const GroundTruth& truth,
                       const ResourceEnsemble& ens) {
    double t = 0.0;
    for (int i : members) {
        if (i < 0 || i >= ens.size()) throw std::out_of_range("theta_of: bad resource index");
        t += (truth.occupied[i] ? truth.signal_power[i] : 0.0) + ens.noise_power[i];
    }
    return t;
}

inline double theta_of(const TestCycle& cycle, const GroundTruth& truth,
                       const ResourceEnsemble& ens) {
    return theta_of(std::span<const int>(cycle.members), truth, ens);
}

// Weighted variant for non-binary mixing rows: sum_i b_i (s_i phi_i + n_i).
inline double theta_weighted(std::span<const double> row, std::span<const int> columns,
                             const GroundTruth& truth, const ResourceEnsemble& ens) {
    double t = 0.0;
    for (std::size_t c = 0; c < columns.size(); ++c) {
        const int i = columns[c];
        t += row[c] * ((truth.occupied[i] ? truth.signal_power[i] : 0.0) + ens.noise_power[i]);
    }
    return t;
}

/// One energy sample: exponential with mean theta.
inline double sample_observation(double theta, RngStream& rng) {
    if (!(theta > 0.0)) throw std::invalid_argument("sample_observation: theta must be > 0");
    return rng.exponential(theta);
}

inline std::uint8_t null_decision(Mode mode) { return mode == Mode::SS ? 1 : 0; }

// Per-slot utility of a full decision vector against the truth. Resources
// holding the mode's zero-utility declaration contribute nothing.
inline double per_slot_utility(std::span<const std::uint8_t> decision,
                               std::span<const std::uint8_t> tested,
                               const GroundTruth& truth, const ResourceEnsemble& ens) {
    double u = 0.0;
    for (int i = 0; i < ens.size(); ++i) {
        if (!tested[i]) continue;
        if (ens.mode == Mode::SS) {
            if (decision[i] == 0) u += truth.occupied[i] ? -ens.penalty[i] : ens.reward[i];
        } else {
            if (decision[i] == 1) u += truth.occupied[i] ? ens.reward[i] : -ens.penalty[i];
        }
    }
    return u;
}

inline double realized_utility(std::span<const std::uint8_t> decision,
                               std::span<const std::uint8_t> tested,
                               const GroundTruth& truth, const ResourceEnsemble& ens,
                               int horizon, int kappa_used) {
    return (horizon - kappa_used) * per_slot_utility(decision, tested, truth, ens);
}

}  // namespace specsense
