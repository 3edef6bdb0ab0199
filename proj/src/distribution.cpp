#include "mfee/distribution.hpp"

#include <cmath>
#include <numeric>

#include "mfee/rng.hpp"

namespace mfee {

Distribution Distribution::validated(std::vector<double> probs) {
    if (probs.empty()) throw NotNormalized("distribution must have at least one state");
    double sum = 0.0;
    for (double p : probs) {
        if (p < 0.0) throw NegativeEntry("negative probability entry");
        sum += p;
    }
    if (std::abs(sum - 1.0) > kNormalizationTol)
        throw NotNormalized("probabilities sum to " + std::to_string(sum));
    return Distribution(std::move(probs));
}

Distribution Distribution::from_weights(std::vector<double> weights) {
    if (weights.empty()) throw NotNormalized("empty weight vector");
    double sum = 0.0;
    for (double w : weights) {
        if (w < 0.0) throw NegativeEntry("negative weight");
        sum += w;
    }
    if (sum <= 0.0) throw NotNormalized("weights sum to zero");
    for (double& w : weights) w /= sum;
    return Distribution(std::move(weights));
}

Distribution Distribution::uniform(std::size_t k) {
    return Distribution(std::vector<double>(k, 1.0 / static_cast<double>(k)));
}

Distribution Distribution::point_mass(std::size_t k, std::size_t state) {
    std::vector<double> probs(k, 0.0);
    probs.at(state) = 1.0;
    return Distribution(std::move(probs));
}

bool Distribution::strictly_positive() const {
    for (double p : probs_)
        if (p <= 0.0) return false;
    return true;
}

CountVector SampleSequence::counts() const {
    CountVector c = CountVector::zeros(static_cast<std::size_t>(alphabet_size));
    for (int s : states) c.add(static_cast<std::size_t>(s));
    return c;
}

Distribution ml_estimate(const CountVector& counts, double smoothing) {
    const std::size_t k = counts.size();
    if (k == 0) throw EmptySample("no states");
    if (counts.total == 0.0 && smoothing == 0.0)
        throw EmptySample("zero counts with zero smoothing");
    const double denom = counts.total + static_cast<double>(k) * smoothing;
    std::vector<double> probs(k);
    for (std::size_t i = 0; i < k; ++i) probs[i] = (counts.counts[i] + smoothing) / denom;
    return Distribution::from_weights(std::move(probs));
}

SampleSequence sample(const Distribution& dist, std::size_t n, std::uint64_t seed) {
    const std::size_t k = dist.size();
    std::vector<double> cdf(k);
    std::partial_sum(dist.probs().begin(), dist.probs().end(), cdf.begin());
    cdf.back() = 1.0;  // guard against rounding in the last bin

    Xoshiro256pp rng(seed);
    SampleSequence out;
    out.alphabet_size = static_cast<int>(k);
    out.states.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = rng.uniform01();
        std::size_t s = 0;
        while (s + 1 < k && u >= cdf[s]) ++s;
        out.states.push_back(static_cast<int>(s));
    }
    return out;
}

}  // namespace mfee
