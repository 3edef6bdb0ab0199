#pragma once

#include <optional>
#include <vector>

#include "mfee/distribution.hpp"

namespace mfee {

/// Mean-constrained maximum entropy estimate: P[k] proportional to
/// exp(-lambda * values[k]) with lambda solved so the expectation matches
/// sample_mean to 1e-10. Means at the boundary return the point mass.
/// Throws MeanOutOfRange when sample_mean lies outside [min, max] of values.
Distribution max_entropy_estimate(double sample_mean, const std::vector<double>& values);

/// Convenience overload with values = 0..K-1.
Distribution max_entropy_estimate(double sample_mean, std::size_t k);

/// Dirichlet posterior mode, or Unavailable when the mode is undefined.
struct MapOutcome {
    std::optional<Distribution> dist;
    std::vector<std::size_t> missing_states;  // states whose count + alpha < 1

    bool available() const { return dist.has_value(); }
};

/// Posterior mode[k] = (counts[k] + alpha - 1) / (N + K alpha - K).
/// With alpha = 1/2 (Jeffreys) the mode is unavailable iff some count is zero.
MapOutcome map_jeffreys(const CountVector& counts, double alpha = 0.5);

}  // namespace mfee
