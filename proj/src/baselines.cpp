#include "mfee/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mfee {

namespace {

constexpr double kMeanTol = 1e-10;
constexpr double kBoundaryTol = 1e-12;

// Gibbs weights exp(-lambda * v), normalized in a shifted log space.
Distribution gibbs(double lambda, const std::vector<double>& values) {
    std::vector<double> logw(values.size());
    double max_logw = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < values.size(); ++i) {
        logw[i] = -lambda * values[i];
        max_logw = std::max(max_logw, logw[i]);
    }
    std::vector<double> w(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) w[i] = std::exp(logw[i] - max_logw);
    return Distribution::from_weights(std::move(w));
}

double gibbs_mean(double lambda, const std::vector<double>& values) {
    const Distribution p = gibbs(lambda, values);
    double mean = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) mean += p[i] * values[i];
    return mean;
}

}  // namespace

Distribution max_entropy_estimate(double sample_mean, const std::vector<double>& values) {
    if (values.size() < 2) throw EstimationError("need at least two states");
    for (std::size_t i = 1; i < values.size(); ++i)
        if (values[i] <= values[i - 1])
            throw EstimationError("state values must be strictly increasing");

    const double lo = values.front();
    const double hi = values.back();
    if (sample_mean < lo - kBoundaryTol || sample_mean > hi + kBoundaryTol)
        throw MeanOutOfRange("mean " + std::to_string(sample_mean) + " outside value range");
    if (std::abs(sample_mean - lo) <= kBoundaryTol)
        return Distribution::point_mass(values.size(), 0);
    if (std::abs(sample_mean - hi) <= kBoundaryTol)
        return Distribution::point_mass(values.size(), values.size() - 1);

    // The mean is strictly decreasing in lambda, so bracket by doubling and
    // bisect. 200 iterations take the bracket far below the 1e-10 target.
    double lambda_lo = -1.0;
    double lambda_hi = 1.0;
    while (gibbs_mean(lambda_lo, values) < sample_mean) lambda_lo *= 2.0;
    while (gibbs_mean(lambda_hi, values) > sample_mean) lambda_hi *= 2.0;
    double lambda = 0.0;
    for (int iter = 0; iter < 200; ++iter) {
        lambda = 0.5 * (lambda_lo + lambda_hi);
        if (gibbs_mean(lambda, values) > sample_mean)
            lambda_lo = lambda;
        else
            lambda_hi = lambda;
        if (std::abs(gibbs_mean(lambda, values) - sample_mean) <= kMeanTol * 0.01) break;
    }
    return gibbs(lambda, values);
}

Distribution max_entropy_estimate(double sample_mean, std::size_t k) {
    std::vector<double> values(k);
    std::iota(values.begin(), values.end(), 0.0);
    return max_entropy_estimate(sample_mean, values);
}

MapOutcome map_jeffreys(const CountVector& counts, double alpha) {
    const double k = static_cast<double>(counts.size());
    if (counts.size() < 2) throw EstimationError("need at least two states");

    MapOutcome outcome;
    for (std::size_t i = 0; i < counts.size(); ++i)
        if (counts.counts[i] + alpha < 1.0) outcome.missing_states.push_back(i);
    const double denom = counts.total + k * alpha - k;
    if (!outcome.missing_states.empty() || denom <= 0.0) return outcome;

    std::vector<double> probs(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i)
        probs[i] = (counts.counts[i] + alpha - 1.0) / denom;
    outcome.dist = Distribution::from_weights(std::move(probs));
    return outcome;
}

}  // namespace mfee
