#include <doctest.h>

#include <cmath>
#include <vector>

#include "mfee/estimator.hpp"
#include "mfee/info.hpp"
#include "test_helpers.hpp"

using namespace mfee;
using mfee::testing::random_distribution;

namespace {

// Independent brute-force walk of the recursion, in plain probability space
// (no log-sum-exp, no incremental counts). Shared with nothing in src/.
std::vector<double> brute_force_estimate(const std::vector<int>& states, int k, double eps) {
    std::vector<std::vector<double>> history{std::vector<double>(k, 1.0 / k)};
    std::vector<double> current = history[0];
    for (std::size_t n = 1; n <= states.size(); ++n) {
        std::vector<double> counts(k, 0.0);
        for (std::size_t i = 0; i < n; ++i) counts[states[i]] += 1.0;
        std::vector<double> ml(k);
        for (int x = 0; x < k; ++x) ml[x] = (counts[x] + eps) / (n + k * eps);

        std::vector<double> g(k, 1.0);
        for (const auto& p : history)
            for (int x = 0; x < k; ++x) g[x] *= p[x];
        double gsum = 0.0;
        for (int x = 0; x < k; ++x) {
            g[x] = std::pow(g[x], 1.0 / static_cast<double>(history.size()));
            gsum += g[x];
        }
        for (int x = 0; x < k; ++x) g[x] /= gsum;

        double d = 0.0;
        for (int x = 0; x < k; ++x) d += g[x] * std::log(g[x] / ml[x]);
        double beta = 1.0;
        if (d > 1e-12) {
            const double beta0 = 1.0 / d;
            beta = beta0 / (1.0 + beta0);
        }

        double z = 0.0;
        for (int x = 0; x < k; ++x) z += std::pow(ml[x], beta);
        for (int x = 0; x < k; ++x) current[x] = std::pow(ml[x], beta) / z;
        history.push_back(current);
    }
    return current;
}

}  // namespace

TEST_CASE("geometric-mean accumulator") {
    SUBCASE("uniform stays uniform") {
        GeoMeanAccumulator acc(3);
        acc.add(Distribution::uniform(3));
        for (double g : acc.geometric_mean(true))
            CHECK(g == doctest::Approx(1.0 / 3).epsilon(1e-14));
        for (double g : acc.geometric_mean(false))
            CHECK(g == doctest::Approx(1.0 / 3).epsilon(1e-14));
    }
    SUBCASE("count one returns the seed") {
        GeoMeanAccumulator acc(3);
        CHECK(acc.count() == 1);
        for (double g : acc.geometric_mean(true))
            CHECK(g == doctest::Approx(1.0 / 3).epsilon(1e-14));
    }
    SUBCASE("update averages logs over the accumulated count") {
        // After two updates the mean runs over {uniform, p1, p2}; compare
        // against the cube root of the elementwise product.
        GeoMeanAccumulator acc(3);
        const auto p1 = make_distribution({0.5, 0.25, 0.25});
        const auto p2 = make_distribution({0.25, 0.5, 0.25});
        acc.add(p1);
        acc.add(p2);
        CHECK(acc.count() == 3);
        const auto raw = acc.geometric_mean(false);
        double sum = 0.0;
        for (std::size_t x = 0; x < 3; ++x) {
            const double expected = std::cbrt((1.0 / 3) * p1[x] * p2[x]);
            CHECK(raw[x] == doctest::Approx(expected).epsilon(1e-14));
            sum += raw[x];
        }
        const auto normalized = acc.geometric_mean(true);
        for (std::size_t x = 0; x < 3; ++x)
            CHECK(normalized[x] == doctest::Approx(raw[x] / sum).epsilon(1e-14));
        // the documented two-entry closed form sqrt(p * q)
        const double a = std::sqrt(0.5 * 0.25);
        const double c = std::sqrt(0.25 * 0.25);
        const double pair_sum = 2.0 * a + c;
        CHECK(a == doctest::Approx(0.3535533905932738).epsilon(1e-14));
        CHECK(a / pair_sum == doctest::Approx(0.3693980625181293).epsilon(1e-12));
        CHECK(c / pair_sum == doctest::Approx(0.2612038749637414).epsilon(1e-12));
    }
    SUBCASE("zero probability rejected") {
        GeoMeanAccumulator acc(3);
        CHECK_THROWS_AS(acc.add(make_distribution({1.0, 0.0, 0.0})), ZeroProbability);
    }
}

TEST_CASE("temperature step") {
    SUBCASE("g equals ml: low-temperature limit") {
        const auto ml = make_distribution({0.5, 0.25, 0.25});
        const auto step = temperature_step(ml.span(), ml);
        CHECK(std::isinf(step.beta0));
        CHECK(step.beta == 1.0);
    }
    SUBCASE("single-observation divergence") {
        const auto ml = make_distribution(
            {0.9998000599820054, 9.997000899730082e-05, 9.997000899730082e-05});
        const auto u = Distribution::uniform(3);
        const auto step = temperature_step(u.span(), ml);
        CHECK(step.divergence == doctest::Approx(5.041881249324899).epsilon(1e-12));
        CHECK(step.beta0 == doctest::Approx(0.19833866577756046).epsilon(1e-12));
        CHECK(step.beta == doctest::Approx(0.16551136289077792).epsilon(1e-12));
    }
    SUBCASE("one nat of divergence gives beta one half") {
        // a solves D(uniform2 || (a, 1-a)) = 1 exactly.
        const double a = 0.03506325248390313;
        const auto ml = make_distribution({a, 1.0 - a});
        const auto u = Distribution::uniform(2);
        const auto step = temperature_step(u.span(), ml);
        CHECK(step.beta0 == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(step.beta == doctest::Approx(0.5).epsilon(1e-12));
    }
}

TEST_CASE("canonical estimate") {
    const auto ml = make_distribution(
        {0.9998000599820054, 9.997000899730082e-05, 9.997000899730082e-05});
    SUBCASE("beta one returns ml exactly") {
        CHECK(canonical_estimate(ml, 1.0) == ml);
    }
    SUBCASE("beta zero returns uniform exactly") {
        CHECK(canonical_estimate(ml, 0.0) == Distribution::uniform(3));
    }
    SUBCASE("pinned tempering") {
        const auto p = canonical_estimate(ml, 0.16551136289077792);
        CHECK(p[0] == doctest::Approx(0.696626643273449).epsilon(1e-12));
        CHECK(p[1] == doctest::Approx(0.1516866783632755).epsilon(1e-12));
        CHECK(p[2] == doctest::Approx(0.1516866783632755).epsilon(1e-12));
    }
    SUBCASE("tempering never decreases entropy") {
        Xoshiro256pp rng(5);
        for (int it = 0; it < 200; ++it) {
            const auto m = random_distribution(rng, 2 + static_cast<std::size_t>(rng.uniform01() * 5));
            const double beta = rng.uniform01();
            CHECK(entropy(canonical_estimate(m, beta)) >= entropy(m) - 1e-12);
        }
    }
}

TEST_CASE("mfee_estimate") {
    SUBCASE("empty sample") {
        const auto r = mfee_estimate({{}, 3});
        CHECK(r.estimate == Distribution::uniform(3));
        CHECK(r.beta == 0.0);
        CHECK(r.trace.empty());
        CHECK(std::isnan(r.free_energy));
        CHECK(r.effective_information == doctest::Approx(-std::log(3.0)).epsilon(1e-12));
    }
    SUBCASE("single sample") {
        const auto r = mfee_estimate({{0}, 3});
        CHECK(r.estimate[0] == doctest::Approx(0.696626643273449).epsilon(1e-10));
        CHECK(r.estimate[1] == doctest::Approx(0.1516866783632755).epsilon(1e-10));
        CHECK(r.beta == doctest::Approx(0.16551136289077792).epsilon(1e-10));
        CHECK(r.trace.size() == 1);
        CHECK(r.effective_information == doctest::Approx(-0.8239778903332847).epsilon(1e-10));
    }
    SUBCASE("matches the brute-force walk on random sequences") {
        Xoshiro256pp rng(11);
        for (int it = 0; it < 30; ++it) {
            const std::size_t n = static_cast<std::size_t>(rng.uniform01() * 6);
            SampleSequence seq{{}, 3};
            for (std::size_t i = 0; i < n; ++i)
                seq.states.push_back(static_cast<int>(rng.uniform01() * 3));
            const auto expected = brute_force_estimate(seq.states, 3, 1e-4);
            const auto r = mfee_estimate(seq);
            for (std::size_t x = 0; x < 3; ++x)
                CHECK(r.estimate[x] == doctest::Approx(expected[x]).epsilon(1e-12));
        }
    }
    SUBCASE("beta approaches one with data") {
        const auto truth = make_distribution({0.431, 0.337, 0.232});
        const auto r = mfee_estimate(sample(truth, 5000, 42));
        CHECK(r.beta > 0.95);
        for (const auto& step : r.trace) {
            CHECK(step.beta >= 0.0);
            CHECK(step.beta <= 1.0);
        }
    }
}

TEST_CASE("free energy") {
    SUBCASE("pinned half-temperature value") {
        const auto ml = make_distribution({0.5, 0.25, 0.25});
        MfeeResult r{canonical_estimate(ml, 0.5), 0.5, 1.0};
        CHECK(free_energy_of(r, ml) == doctest::Approx(-1.0695999934791407).epsilon(1e-10));
    }
    SUBCASE("beta one with Z = 1") {
        const auto ml = make_distribution({0.5, 0.25, 0.25});
        MfeeResult r{ml, 1.0, 1.0};
        CHECK(free_energy_of(r, ml) == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("undefined at zero temperature") {
        MfeeResult r{Distribution::uniform(3), 0.0, 0.0};
        CHECK_THROWS_AS(free_energy_of(r, Distribution::uniform(3)),
                        UndefinedAtZeroTemperature);
    }
    SUBCASE("two routes agree on random inputs") {
        Xoshiro256pp rng(17);
        for (int it = 0; it < 100; ++it) {
            const auto ml = random_distribution(rng, 3);
            const double beta = 0.05 + 0.95 * rng.uniform01();
            MfeeResult r{canonical_estimate(ml, beta), beta, beta / (1.0 - beta)};
            double z = 0.0;
            for (double m : ml.probs()) z += std::pow(m, beta);
            CHECK(free_energy_of(r, ml) ==
                  doctest::Approx(-std::log(z) / beta).epsilon(1e-10));
        }
    }
    SUBCASE("canonical distribution minimizes F at its beta") {
        Xoshiro256pp rng(23);
        for (int it = 0; it < 20; ++it) {
            const auto ml = random_distribution(rng, 3);
            const double beta = 0.1 + 0.8 * rng.uniform01();
            MfeeResult r{canonical_estimate(ml, beta), beta, beta / (1.0 - beta)};
            const double f_star = free_energy_of(r, ml);
            for (int q = 0; q < 100; ++q) {
                MfeeResult perturbed{random_distribution(rng, 3), beta, r.beta0};
                CHECK(f_star <= free_energy_of(perturbed, ml) - 1e-12);
            }
        }
    }
}

TEST_CASE("effective information") {
    CHECK(effective_information(Distribution::uniform(3)) ==
          doctest::Approx(-std::log(3.0)).epsilon(1e-12));
    CHECK(effective_information(Distribution::point_mass(3, 1)) == 0.0);
}

TEST_CASE("conditional estimation") {
    SUBCASE("empty context yields the uniform row") {
        const auto table = mfee_conditional({{0, 1}}, 2, 3);
        CHECK(table.rows[1].dist == Distribution::uniform(3));
        CHECK(table.rows[1].beta == 0.0);
        CHECK(table.rows[1].sample_count == 0);
    }
    SUBCASE("identical sub-samples give identical rows") {
        const auto table = mfee_conditional({{0, 2}, {1, 2}, {0, 0}, {1, 0}}, 2, 3);
        for (std::size_t x = 0; x < 3; ++x)
            CHECK(table.rows[0].dist[x] == doctest::Approx(table.rows[1].dist[x]).epsilon(1e-15));
    }
    SUBCASE("single-sample context reuses the univariate recursion") {
        const auto table = mfee_conditional({{0, 0}}, 1, 3);
        CHECK(table.rows[0].dist[0] == doctest::Approx(0.696626643273449).epsilon(1e-10));
        CHECK(table.rows[0].beta == doctest::Approx(0.16551136289077792).epsilon(1e-10));
    }
    SUBCASE("global mode rows are normalized and share one beta") {
        const auto table = mfee_conditional({{0, 0}, {1, 1}, {0, 2}, {1, 1}}, 2, 3,
                                            ConditionalMode::Global);
        for (const auto& row : table.rows) {
            double sum = 0.0;
            for (double p : row.dist.probs()) sum += p;
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
        }
        CHECK(table.rows[0].beta == table.rows[1].beta);
        CHECK(table.rows[0].beta > 0.0);
        CHECK(table.rows[0].beta <= 1.0);
    }
}

TEST_CASE("joint estimation") {
    SUBCASE("uniform times uniform") {
        ConditionalTable cond{{{Distribution::uniform(2), 0.0, 0},
                               {Distribution::uniform(2), 0.0, 0}}};
        const auto joint = joint_estimate(cond, Distribution::uniform(2));
        for (std::size_t y = 0; y < 2; ++y)
            for (std::size_t x = 0; x < 2; ++x)
                CHECK(joint.at(y, x) == doctest::Approx(0.25).epsilon(1e-14));
    }
    SUBCASE("rows renormalize back to the conditional") {
        ConditionalTable cond{{{make_distribution({0.7, 0.3}), 0.5, 3},
                               {make_distribution({0.2, 0.8}), 0.5, 2}}};
        const auto marginal = make_distribution({0.6, 0.4});
        const auto joint = joint_estimate(cond, marginal);
        for (std::size_t y = 0; y < 2; ++y) {
            const double w = joint.at(y, 0) + joint.at(y, 1);
            for (std::size_t x = 0; x < 2; ++x)
                CHECK(joint.at(y, x) / w ==
                      doctest::Approx(cond.rows[y].dist[x]).epsilon(1e-12));
        }
        CHECK(joint.at(0, 0) == doctest::Approx(0.42).epsilon(1e-12));
        CHECK(joint.at(1, 1) == doctest::Approx(0.32).epsilon(1e-12));
    }
    SUBCASE("marginal size must match") {
        ConditionalTable cond{{{Distribution::uniform(2), 0.0, 0}}};
        CHECK_THROWS_AS(joint_estimate(cond, Distribution::uniform(2)), DimensionMismatch);
    }
}

TEST_CASE("bayes-anchored estimation") {
    SUBCASE("no data gives uniform at beta zero") {
        const auto r = bayes_anchored_estimate({{}, 3}, 0.5);
        CHECK(r.estimate == Distribution::uniform(3));
        CHECK(r.beta == 0.0);
    }
    SUBCASE("huge prior pins the anchor near uniform") {
        const auto r = bayes_anchored_estimate({{0, 0, 0}, 3}, 1e6);
        for (double p : r.estimate.probs())
            CHECK(p == doctest::Approx(1.0 / 3).epsilon(1e-4));
    }
    SUBCASE("single sample with Jeffreys posterior mean") {
        const auto r = bayes_anchored_estimate({{0}, 3}, 0.5);
        // anchor (0.6, 0.2, 0.2), one temperature step
        CHECK(r.beta == doctest::Approx(0.8736512252624761).epsilon(1e-10));
        CHECK(r.estimate[0] == doctest::Approx(0.5662719687825714).epsilon(1e-10));
        CHECK(r.estimate[1] == doctest::Approx(0.2168640156087143).epsilon(1e-10));
    }
    SUBCASE("MAP anchoring inherits unavailability") {
        CHECK_THROWS_AS(
            bayes_anchored_estimate({{0}, 3}, 0.5, BayesAnchor::PosteriorMode),
            EstimationError);
    }
}
