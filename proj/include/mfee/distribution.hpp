#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mfee/errors.hpp"

namespace mfee {

/// A validated probability mass function over states 0..K-1.
/// Entries are non-negative and sum to 1 within 1e-9. Immutable.
class Distribution {
  public:
    static constexpr double kNormalizationTol = 1e-9;

    /// Validates the given probabilities; throws NegativeEntry / NotNormalized.
    static Distribution validated(std::vector<double> probs);

    /// Normalizes non-negative weights by their sum.
    static Distribution from_weights(std::vector<double> weights);

    static Distribution uniform(std::size_t k);
    static Distribution point_mass(std::size_t k, std::size_t state);

    std::size_t size() const { return probs_.size(); }
    double operator[](std::size_t i) const { return probs_[i]; }
    const std::vector<double>& probs() const { return probs_; }
    std::span<const double> span() const { return probs_; }

    bool strictly_positive() const;

    bool operator==(const Distribution&) const = default;

  private:
    explicit Distribution(std::vector<double> probs) : probs_(std::move(probs)) {}
    std::vector<double> probs_;
};

inline Distribution make_distribution(std::vector<double> probs) {
    return Distribution::validated(std::move(probs));
}

/// Real-valued event counts (real to admit additive smoothing).
struct CountVector {
    std::vector<double> counts;
    double total = 0.0;  // sum of raw counts, before smoothing

    static CountVector zeros(std::size_t k) { return {std::vector<double>(k, 0.0), 0.0}; }
    void add(std::size_t state, double weight = 1.0) {
        counts.at(state) += weight;
        total += weight;
    }
    std::size_t size() const { return counts.size(); }
};

/// An ordered i.i.d. sample of state indices over alphabet 0..K-1.
struct SampleSequence {
    std::vector<int> states;
    int alphabet_size = 0;

    std::size_t size() const { return states.size(); }
    CountVector counts() const;
};

/// Relative-frequency (maximum likelihood) estimate with additive smoothing:
/// probs[k] = (counts[k] + smoothing) / (N + K * smoothing).
/// Throws EmptySample when N = 0 and smoothing = 0.
Distribution ml_estimate(const CountVector& counts, double smoothing);

/// n i.i.d. inverse-CDF draws from dist; deterministic for a fixed seed.
SampleSequence sample(const Distribution& dist, std::size_t n, std::uint64_t seed);

}  // namespace mfee
