#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "helpers.hpp"
#include "specsense/detection.hpp"
#include "specsense/di.hpp"
#include "specsense/gt.hpp"

using namespace specsense;

namespace {

// Binomial CDF from Pascal-triangle coefficients; exact in double for the
// sizes used here.
double binomial_cdf(int k, int n, double p) {
    std::vector<std::vector<double>> choose(n + 1, std::vector<double>(n + 1, 0.0));
    for (int a = 0; a <= n; ++a) {
        choose[a][0] = 1.0;
        for (int b = 1; b <= a; ++b)
            choose[a][b] = choose[a - 1][b - 1] + (b <= a - 1 ? choose[a - 1][b] : 0.0);
    }
    double cdf = 0.0;
    for (int c = 0; c <= k; ++c)
        cdf += choose[n][c] * std::pow(p, c) * std::pow(1.0 - p, n - c);
    return cdf;
}

}  // namespace

TEST_CASE("glrt log likelihood ratio: zero energy, saturation, monotonicity") {
    const double theta0 = 2.0, theta_min = 12.0;
    // y = 0: LR = theta0/theta_min < 1, rejected at any gamma >= 1
    CHECK(glrt_log_lr(0.0, theta0, theta_min) == Catch::Approx(std::log(theta0 / theta_min)));
    CHECK_FALSE(glrt_decide(0.0, theta0, theta_min, 1.0));

    // enormous energy always fires
    CHECK(glrt_decide(1e9, theta0, theta_min, 1e6));

    // monotone non-decreasing scan across the piecewise boundary
    double prev = -1e300;
    for (double y = 0.0; y <= 60.0; y += 0.01) {
        const double lr = glrt_log_lr(y, theta0, theta_min);
        CHECK(lr >= prev - 1e-12);
        prev = lr;
    }

    CHECK_THROWS_AS(glrt_log_lr(-1.0, theta0, theta_min), std::invalid_argument);
    CHECK_THROWS_AS(glrt_log_lr(1.0, 2.0, 2.0), std::invalid_argument);
}

TEST_CASE("glrt false-alarm rate matches the closed form, miss rate stays under the bound") {
    const auto ens = testutil::example_ensemble(2, 10);
    const auto cand = make_candidate({0, 1}, ens);
    const double theta0 = 2.0, theta_min = 12.0;

    RngStream rng(101);
    const int n = 100000;
    int fired = 0;
    for (int t = 0; t < n; ++t)
        fired += glrt_decide(rng.exponential(theta0), theta0, theta_min, cand.gamma) ? 1 : 0;
    const double fa = static_cast<double>(fired) / n;
    const double sigma = std::sqrt(cand.alpha * (1.0 - cand.alpha) / n);
    CHECK(std::abs(fa - cand.alpha) <= 3.0 * sigma);

    // busy pool at an arbitrary admissible power: misses stay under the bound
    int missed = 0;
    for (int t = 0; t < n; ++t) {
        const double theta = theta_min * (1.0 + 2.0 * rng.uniform01());
        missed += glrt_decide(rng.exponential(theta), theta0, theta_min, cand.gamma) ? 0 : 1;
    }
    const double miss = static_cast<double>(missed) / n;
    const double sigma_b = std::sqrt(cand.beta_max * (1.0 - cand.beta_max) / n);
    CHECK(miss <= cand.beta_max + 3.0 * sigma_b);
}

TEST_CASE("majority vote over test outcomes") {
    const std::vector<std::uint8_t> one = {1};
    CHECK(majority_decision(one));
    const std::vector<std::uint8_t> mostly_no = {1, 0, 0};
    CHECK_FALSE(majority_decision(mostly_no));
    const std::vector<std::uint8_t> two_of_three = {1, 1, 0};
    CHECK(majority_decision(two_of_three));
    const std::vector<std::uint8_t> split = {1, 0, 1, 0};  // even split counts as busy
    CHECK(majority_decision(split));
    const std::vector<std::uint8_t> none;
    CHECK_THROWS_AS(majority_decision(none), std::invalid_argument);
}

TEST_CASE("pbd_cdf basics") {
    const std::vector<double> coins = {0.5, 0.5};
    CHECK(pbd_cdf(0, coins) == Catch::Approx(0.25).margin(1e-15));
    CHECK(pbd_cdf(2, coins) == 1.0);
    CHECK(pbd_cdf(-1, coins) == 0.0);

    const std::vector<double> bad = {1.5};
    CHECK_THROWS_AS(pbd_cdf(0, bad), std::invalid_argument);
}

TEST_CASE("pbd_cdf with equal probabilities equals the binomial CDF") {
    RngStream rng(102);
    for (int rep = 0; rep < 60; ++rep) {
        const int n = 1 + static_cast<int>(rng.uniform01() * 20);
        const double p = rng.uniform01();
        const std::vector<double> probs(n, p);
        for (int k = 0; k <= n; ++k) {
            CHECK(pbd_cdf(k, probs) == Catch::Approx(binomial_cdf(k, n, p)).margin(1e-12));
        }
    }
}

TEST_CASE("resource error probabilities under a disjoint plan reduce to the single test") {
    const auto ens = testutil::example_ensemble(4, 10);
    const auto pair = make_candidate({0, 1}, ens);
    const std::vector<TestCycle> tests = {pair.to_test_cycle()};

    const auto probs = resource_error_probs_gt(tests, 0, ens);
    const double others_empty = ens.prior_empty[1];
    const double pi0 = (1.0 - others_empty) * (1.0 - pair.beta_max) + pair.alpha * others_empty;
    CHECK(probs.alpha == Catch::Approx(pi0).margin(1e-15));
    CHECK(probs.beta == Catch::Approx(pair.beta_max).margin(1e-15));
}

TEST_CASE("a singleton test has false-alarm probability alpha (empty product)") {
    const auto ens = testutil::example_ensemble(3, 10);
    const auto single = make_candidate({2}, ens);
    const std::vector<TestCycle> tests = {single.to_test_cycle()};
    const auto probs = resource_error_probs_gt(tests, 2, ens);
    CHECK(probs.alpha == Catch::Approx(single.alpha).margin(1e-15));
    CHECK(probs.beta == Catch::Approx(single.beta_max).margin(1e-15));
}

TEST_CASE("three-test coverage matches exhaustive outcome enumeration") {
    const auto ens = testutil::example_ensemble(7, 10);
    // three tests all containing resource 0; pairwise they share only it
    std::vector<TestCycle> tests = {make_candidate({0, 1}, ens).to_test_cycle(),
                                    make_candidate({0, 2, 3}, ens).to_test_cycle(),
                                    make_candidate({0, 4}, ens).to_test_cycle()};
    const auto probs = resource_error_probs_gt(tests, 0, ens);

    // independent recomputation: per-test firing probabilities ...
    std::vector<double> pi0, pi1;
    for (const auto& t : tests) {
        double others = 1.0;
        for (int j : t.members)
            if (j != 0) others *= ens.prior_empty[j];
        pi0.push_back((1.0 - others) * (1.0 - t.beta_max) + t.alpha * others);
        pi1.push_back(1.0 - t.beta_max);
    }
    // ... then majority (>= 2 of 3) by direct enumeration of the 8 outcomes
    auto majority_prob = [](const std::vector<double>& p) {
        double acc = 0.0;
        for (int mask = 0; mask < 8; ++mask) {
            int votes = 0;
            double w = 1.0;
            for (int t = 0; t < 3; ++t) {
                if (mask & (1 << t)) {
                    ++votes;
                    w *= p[t];
                } else {
                    w *= 1.0 - p[t];
                }
            }
            if (votes >= 2) acc += w;
        }
        return acc;
    };
    CHECK(probs.alpha == Catch::Approx(majority_prob(pi0)).margin(1e-12));
    CHECK(probs.beta == Catch::Approx(1.0 - majority_prob(pi1)).margin(1e-12));
}

TEST_CASE("resource error probabilities validate their inputs") {
    const auto ens = testutil::example_ensemble(5, 10);
    std::vector<TestCycle> shares_two = {make_candidate({0, 1, 2}, ens).to_test_cycle(),
                                         make_candidate({1, 2, 3}, ens).to_test_cycle()};
    CHECK_THROWS_AS(resource_error_probs_gt(shares_two, 1, ens), std::invalid_argument);

    std::vector<TestCycle> tests = {make_candidate({0, 1}, ens).to_test_cycle()};
    CHECK_THROWS_AS(resource_error_probs_gt(tests, 4, ens), std::invalid_argument);
}

TEST_CASE("exact posterior: two-member hand enumeration") {
    const auto ens = testutil::example_ensemble(2, 10);
    const std::vector<int> members = {0, 1};
    const std::vector<double> busy_power = {10.0, 12.0};
    for (double y : {0.001, 1.0, 5.0, 30.0, 200.0}) {
        const auto marg = exact_group_posterior(y, members, ens, busy_power);

        // direct four-state computation
        auto like = [&](double theta) { return std::exp(-y / theta) / theta; };
        const double w = 0.9;
        const double p00 = w * w * like(2.0);
        const double p10 = (1 - w) * w * like(12.0);
        const double p01 = w * (1 - w) * like(14.0);
        const double p11 = (1 - w) * (1 - w) * like(24.0);
        const double z = p00 + p10 + p01 + p11;
        CHECK(marg[0] == Catch::Approx((p10 + p11) / z).margin(1e-12));
        CHECK(marg[1] == Catch::Approx((p01 + p11) / z).margin(1e-12));
    }
}

TEST_CASE("exact posterior: degenerate prior, symmetry, low-energy pull") {
    // an all-empty prior pins the posterior regardless of the observation
    ResourceEnsemble certain = testutil::example_ensemble(2, 10);
    certain.prior_empty = {1.0, 1.0};  // deliberately outside the admission region
    const std::vector<int> members = {0, 1};
    const std::vector<double> busy = {10.0, 10.0};
    const auto marg = exact_group_posterior(5.0, members, certain, busy);
    CHECK(marg[0] == 0.0);
    CHECK(marg[1] == 0.0);

    const auto ens = testutil::example_ensemble(2, 10);
    const auto sym = exact_group_posterior(7.0, members, ens, busy);
    CHECK(sym[0] == Catch::Approx(sym[1]).margin(1e-15));

    // near-zero energy favors the all-empty state beyond the prior
    const auto low = exact_group_posterior(1e-9, members, ens, busy);
    CHECK(low[0] < 1.0 - ens.prior_empty[0]);
    CHECK(low[1] < 1.0 - ens.prior_empty[1]);
}

TEST_CASE("exact posterior input guards") {
    const auto ens = testutil::example_ensemble(2, 10);
    const std::vector<int> members = {0, 1};
    const std::vector<double> busy = {10.0, 10.0};
    const std::vector<double> short_busy = {10.0};
    CHECK_THROWS_AS(exact_group_posterior(-1.0, members, ens, busy), std::invalid_argument);
    CHECK_THROWS_AS(exact_group_posterior(1.0, members, ens, short_busy), std::invalid_argument);
    const std::vector<int> none;
    CHECK_THROWS_AS(exact_group_posterior(1.0, none, ens, std::vector<double>{}),
                    std::invalid_argument);
}

TEST_CASE("posterior decision threshold follows the reward/penalty ratio") {
    const auto ens = testutil::example_ensemble(1, 10);  // r = 1, penalty = 19
    CHECK(bayes_busy_threshold(0, ens) == Catch::Approx(1.0 / 20.0).margin(1e-15));
    CHECK(map_decide(0.06, 0, ens));
    CHECK_FALSE(map_decide(0.04, 0, ens));

    auto r_mode = testutil::example_ensemble(1, 10, Mode::R);
    r_mode.prior_empty = {0.5};
    const auto ens_r = validate_ensemble(std::move(r_mode));
    CHECK(bayes_busy_threshold(0, ens_r) == Catch::Approx(19.0 / 20.0).margin(1e-15));
}
