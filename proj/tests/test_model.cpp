#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "helpers.hpp"
#include "specsense/model.hpp"
#include "specsense/rng.hpp"

using namespace specsense;

namespace {

ResourceEnsemble raw_single(Mode mode, double omega, double r, double rho) {
    ResourceEnsemble e;
    e.mode = mode;
    e.horizon = 10;
    e.prior_empty = {omega};
    e.reward = {r};
    e.penalty = {rho};
    e.noise_power = {1.0};
    e.min_signal_power = 10.0;
    return e;
}

}  // namespace

TEST_CASE("validate_ensemble enforces the admissible prior region") {
    // SS: omega must stay below rho/(rho+r) = 0.95
    CHECK_NOTHROW(validate_ensemble(raw_single(Mode::SS, 0.9, 1.0, 19.0)));
    CHECK_THROWS_AS(validate_ensemble(raw_single(Mode::SS, 0.96, 1.0, 19.0)),
                    std::invalid_argument);
    // boundary is rejected
    CHECK_THROWS_AS(validate_ensemble(raw_single(Mode::SS, 0.95, 1.0, 19.0)),
                    std::invalid_argument);
    // R: omega must exceed r/(rho+r) = 0.05
    CHECK_NOTHROW(validate_ensemble(raw_single(Mode::R, 0.1, 1.0, 19.0)));
    CHECK_THROWS_AS(validate_ensemble(raw_single(Mode::R, 0.05, 1.0, 19.0)),
                    std::invalid_argument);
    CHECK_THROWS_AS(validate_ensemble(raw_single(Mode::R, 0.04, 1.0, 19.0)),
                    std::invalid_argument);
}

TEST_CASE("validate_ensemble rejects bad scalars and names the resource") {
    auto e = raw_single(Mode::SS, 0.9, 1.0, 19.0);
    e.horizon = 1;
    CHECK_THROWS_AS(validate_ensemble(e), std::invalid_argument);

    e = raw_single(Mode::SS, 0.9, 1.0, 19.0);
    e.min_signal_power = 0.0;
    CHECK_THROWS_AS(validate_ensemble(e), std::invalid_argument);

    ResourceEnsemble two;
    two.mode = Mode::SS;
    two.horizon = 10;
    two.prior_empty = {0.9, 0.96};
    two.reward = {1.0, 1.0};
    two.penalty = {19.0, 19.0};
    two.noise_power = {1.0, 1.0};
    two.min_signal_power = 10.0;
    try {
        validate_ensemble(two);
        FAIL("expected rejection of resource 1");
    } catch (const std::invalid_argument& err) {
        CHECK(std::string(err.what()).find("resource 1") != std::string::npos);
        CHECK(std::string(err.what()).find("0.95") != std::string::npos);
    }
}

TEST_CASE("theta_of sums gated signal plus noise over the pool") {
    auto ens = testutil::example_ensemble(3, 10);
    ens.noise_power = {1.0, 1.0, 1.0};

    GroundTruth truth;
    truth.occupied = {0, 0, 0};
    truth.signal_power = {0.0, 0.0, 0.0};
    const std::vector<int> pair = {0, 1};
    CHECK(theta_of(pair, truth, ens) == Catch::Approx(2.0).margin(0));

    truth.occupied = {1, 0, 0};
    truth.signal_power = {10.0, 0.0, 0.0};
    const std::vector<int> single = {0};
    CHECK(theta_of(single, truth, ens) == Catch::Approx(11.0).margin(0));

    truth.occupied = {1, 0, 1};
    truth.signal_power = {10.0, 0.0, 12.0};
    const std::vector<int> all = {0, 1, 2};
    CHECK(theta_of(all, truth, ens) == Catch::Approx(25.0).margin(0));

    const std::vector<int> bad = {7};
    CHECK_THROWS_AS(theta_of(bad, truth, ens), std::out_of_range);
}

TEST_CASE("theta_of is additive over disjoint pools and monotone in powers") {
    RngStream rng(42);
    for (int rep = 0; rep < 50; ++rep) {
        auto ens = testutil::random_ensemble(rng, 8, Mode::SS);
        GroundTruth truth;
        for (int i = 0; i < 8; ++i) {
            truth.occupied.push_back(rng.bernoulli(0.5) ? 1 : 0);
            truth.signal_power.push_back(truth.occupied[i] ? ens.min_signal_power + rng.uniform(0, 5)
                                                           : 0.0);
        }
        const std::vector<int> a = {0, 2, 5}, b = {1, 6}, both = {0, 1, 2, 5, 6};
        CHECK(theta_of(a, truth, ens) + theta_of(b, truth, ens) ==
              Catch::Approx(theta_of(both, truth, ens)).epsilon(1e-12));

        GroundTruth more = truth;
        if (more.occupied[2]) more.signal_power[2] += 1.0;
        CHECK(theta_of(a, more, ens) >= theta_of(a, truth, ens));
        auto noisier = ens;
        noisier.noise_power[5] += 0.5;
        CHECK(theta_of(a, truth, noisier) > theta_of(a, truth, ens));
    }
}

TEST_CASE("sample_observation matches the exponential law") {
    SECTION("mean over 1e5 draws") {
        RngStream rng(7);
        double acc = 0.0;
        const int n = 100000;
        for (int i = 0; i < n; ++i) acc += sample_observation(1.0, rng);
        const double mean = acc / n;
        CHECK(mean > 0.99);
        CHECK(mean < 1.01);
    }
    SECTION("variance over 1e5 draws, theta = 11") {
        RngStream rng(8);
        const int n = 100000;
        std::vector<double> x(n);
        double acc = 0.0;
        for (int i = 0; i < n; ++i) {
            x[i] = sample_observation(11.0, rng);
            acc += x[i];
        }
        const double mean = acc / n;
        double ss = 0.0;
        for (double v : x) ss += (v - mean) * (v - mean);
        const double var = ss / (n - 1);
        CHECK(var == Catch::Approx(121.0).epsilon(0.05));
    }
    SECTION("same seed, same theta, same draw") {
        RngStream a(123), b(123);
        for (int i = 0; i < 10; ++i)
            CHECK(sample_observation(3.0, a) == sample_observation(3.0, b));
    }
    SECTION("theta must be positive") {
        RngStream rng(1);
        CHECK_THROWS_AS(sample_observation(0.0, rng), std::invalid_argument);
        CHECK_THROWS_AS(sample_observation(-1.0, rng), std::invalid_argument);
    }
}

TEST_CASE("sample_observation passes a KS test against the exponential CDF") {
    // critical value for significance 0.01 at n = 1e4
    const int n = 10000;
    const double critical = 1.62762 / std::sqrt(static_cast<double>(n));
    int stream = 0;
    for (double theta : {0.5, 1.0, 11.0}) {
        RngStream rng(900 + stream++);
        std::vector<double> x(n);
        for (int i = 0; i < n; ++i) x[i] = sample_observation(theta, rng);
        std::sort(x.begin(), x.end());
        double d = 0.0;
        for (int i = 0; i < n; ++i) {
            const double f = 1.0 - std::exp(-x[i] / theta);
            d = std::max(d, std::abs((i + 1.0) / n - f));
            d = std::max(d, std::abs(f - static_cast<double>(i) / n));
        }
        INFO("theta = " << theta);
        CHECK(d < critical);
    }
}

TEST_CASE("realized utility follows the mode's declaration rule") {
    auto ens = testutil::example_ensemble(3, 10);
    GroundTruth truth;
    truth.occupied = {0, 1, 0};
    truth.signal_power = {0.0, 10.0, 0.0};
    std::vector<std::uint8_t> tested = {1, 1, 0};

    // SS: declared-empty resources pay out; busy ones missed cost the penalty
    std::vector<std::uint8_t> decision = {0, 0, 1};
    CHECK(realized_utility(decision, tested, truth, ens, 10, 2) ==
          Catch::Approx(8 * (1.0 - 19.0)).margin(0));
    decision = {0, 1, 1};
    CHECK(realized_utility(decision, tested, truth, ens, 10, 2) == Catch::Approx(8.0).margin(0));

    auto ens_r = testutil::example_ensemble(3, 10, Mode::R);
    ens_r.prior_empty.assign(3, 0.1);
    ens_r = validate_ensemble(std::move(ens_r));
    decision = {1, 1, 0};
    CHECK(realized_utility(decision, tested, truth, ens_r, 10, 2) ==
          Catch::Approx(8 * (1.0 - 19.0)).margin(0));
}
