#pragma once

// Shared test fixtures: random admissible ensembles and independent
// re-implementations of the pairwise closed forms used as oracles.

#include <cmath>
#include <vector>

#include "specsense/model.hpp"
#include "specsense/rng.hpp"

namespace testutil {

using specsense::Mode;
using specsense::ResourceEnsemble;
using specsense::RngStream;

// Random ensemble strictly inside the admissible prior region.
inline ResourceEnsemble random_ensemble(RngStream& rng, int n, Mode mode, int horizon = 12) {
    ResourceEnsemble e;
    e.mode = mode;
    e.horizon = horizon;
    for (int i = 0; i < n; ++i) {
        const double r = rng.uniform(0.2, 3.0);
        const double rho = r * rng.uniform(1.2, 8.0);
        const double bound = mode == Mode::SS ? rho / (rho + r) : r / (rho + r);
        const double w = mode == Mode::SS ? rng.uniform(0.4 * bound, 0.995 * bound)
                                          : rng.uniform(bound + 0.005 * (1.0 - bound),
                                                        bound + 0.9 * (1.0 - bound));
        e.reward.push_back(r);
        e.penalty.push_back(rho);
        e.prior_empty.push_back(w);
        e.noise_power.push_back(rng.uniform(0.5, 2.0));
    }
    e.min_signal_power = rng.uniform(2.0, 30.0);
    return specsense::validate_ensemble(std::move(e));
}

// The reference ensemble behind the worked examples: identical resources
// with prior 0.9, unit reward, penalty 19, unit noise, power floor 10.
inline ResourceEnsemble example_ensemble(int n, int horizon, Mode mode = Mode::SS) {
    ResourceEnsemble e;
    e.mode = mode;
    e.horizon = horizon;
    e.prior_empty.assign(n, 0.9);
    e.reward.assign(n, 1.0);
    e.penalty.assign(n, 19.0);
    e.noise_power.assign(n, 1.0);
    e.min_signal_power = 10.0;
    return specsense::validate_ensemble(std::move(e));
}

// Pairwise closed forms written out verbatim, independent of the library's
// generalized implementation. Penalties enter as positive magnitudes.
inline double pair_gamma_oracle(double wi, double wj, double ri, double rj, double pi, double pj) {
    return wi * wj * (ri + rj) /
           ((1.0 - wi) * (pi - wj * rj) + (1.0 - wj) * (pj - wi * ri));
}

inline double pair_utility_oracle(double wi, double wj, double ri, double rj, double pi, double pj,
                                  double alpha, double beta) {
    return wi * wj * (ri + rj) * (1.0 - alpha) +
           (wi * (1.0 - wj) * (ri - pj) + wj * (1.0 - wi) * (rj - pi) +
            (1.0 - wi) * (1.0 - wj) * (-pi - pj)) *
               beta;
}

}  // namespace testutil
