#include <doctest.h>

#include <cmath>

#include "mfee/baselines.hpp"
#include "mfee/info.hpp"
#include "mfee/rng.hpp"

using namespace mfee;

namespace {

// Entropy maximizer over the mean-constraint simplex slice by grid search,
// K = 3, values (0, 1, 2). Small-instance oracle only.
Distribution grid_search_maxent(double mean, double step = 1e-4) {
    double best_h = -1.0;
    std::vector<double> best{1.0, 0.0, 0.0};
    for (double p2 = 0.0; p2 <= 1.0 + 1e-15; p2 += step) {
        // p1 + 2 p2 = mean, p0 = 1 - p1 - p2
        const double p1 = mean - 2.0 * p2;
        const double p0 = 1.0 - p1 - p2;
        if (p1 < 0.0 || p0 < 0.0) continue;
        double h = 0.0;
        for (double p : {p0, p1, p2})
            if (p > 0.0) h -= p * std::log(p);
        if (h > best_h) {
            best_h = h;
            best = {p0, p1, p2};
        }
    }
    return Distribution::from_weights(std::move(best));
}

}  // namespace

TEST_CASE("max entropy estimate") {
    SUBCASE("symmetric mean gives uniform") {
        const auto p = max_entropy_estimate(1.0, 3);
        for (std::size_t i = 0; i < 3; ++i)
            CHECK(p[i] == doctest::Approx(1.0 / 3).epsilon(1e-10));
    }
    SUBCASE("boundary means give point masses") {
        CHECK(max_entropy_estimate(0.0, 3) == Distribution::point_mass(3, 0));
        CHECK(max_entropy_estimate(2.0, 3) == Distribution::point_mass(3, 2));
    }
    SUBCASE("pinned quadratic solution at mean one half") {
        const auto p = max_entropy_estimate(0.5, 3);
        CHECK(p[0] == doctest::Approx(0.6162040603780009).epsilon(1e-9));
        CHECK(p[1] == doctest::Approx(0.26759187924399824).epsilon(1e-9));
        CHECK(p[2] == doctest::Approx(0.11620406037800089).epsilon(1e-9));
    }
    SUBCASE("mean out of range") {
        CHECK_THROWS_AS(max_entropy_estimate(2.5, 3), MeanOutOfRange);
        CHECK_THROWS_AS(max_entropy_estimate(-0.5, 3), MeanOutOfRange);
    }
    SUBCASE("mean constraint and Gibbs form over a mean grid") {
        for (double mean = 0.05; mean < 1.96; mean += 0.05) {
            const auto p = max_entropy_estimate(mean, 3);
            double got = 0.0;
            for (std::size_t i = 0; i < 3; ++i) got += p[i] * static_cast<double>(i);
            CHECK(std::abs(got - mean) <= 1e-10);
            // log-probabilities affine in the state value
            const double second_diff =
                std::log(p[2]) - 2.0 * std::log(p[1]) + std::log(p[0]);
            CHECK(std::abs(second_diff) <= 1e-9);
        }
    }
    SUBCASE("beats the grid-search maximizer") {
        for (double mean : {0.3, 0.75, 1.2, 1.6}) {
            const auto p = max_entropy_estimate(mean, 3);
            const auto g = grid_search_maxent(mean);
            CHECK(entropy(p) >= entropy(g) - 1e-8);
        }
    }
}

TEST_CASE("map_jeffreys") {
    SUBCASE("posterior mode with full support") {
        const auto outcome = map_jeffreys({{2, 1, 1}, 4});
        REQUIRE(outcome.available());
        CHECK((*outcome.dist)[0] == doctest::Approx(0.6).epsilon(1e-12));
        CHECK((*outcome.dist)[1] == doctest::Approx(0.2).epsilon(1e-12));
        CHECK((*outcome.dist)[2] == doctest::Approx(0.2).epsilon(1e-12));
    }
    SUBCASE("zero count makes the mode unavailable") {
        const auto outcome = map_jeffreys({{4, 0, 1}, 5});
        CHECK_FALSE(outcome.available());
        CHECK(outcome.missing_states == std::vector<std::size_t>{1});
    }
    SUBCASE("symmetric counts give uniform") {
        const auto outcome = map_jeffreys({{1, 1, 1}, 3});
        REQUIRE(outcome.available());
        for (std::size_t i = 0; i < 3; ++i)
            CHECK((*outcome.dist)[i] == doctest::Approx(1.0 / 3).epsilon(1e-12));
    }
    SUBCASE("available exactly when every count is positive") {
        Xoshiro256pp rng(31);
        for (int it = 0; it < 200; ++it) {
            CountVector c = CountVector::zeros(3);
            bool any_zero = false;
            for (std::size_t i = 0; i < 3; ++i) {
                const double n = std::floor(rng.uniform01() * 4);
                if (n == 0.0) any_zero = true;
                c.add(i, n);
            }
            CHECK(map_jeffreys(c).available() == !any_zero);
        }
    }
}
