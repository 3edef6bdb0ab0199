#pragma once

#include <stdexcept>
#include <string>

namespace mfee {

struct EstimationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NegativeEntry : EstimationError {
    using EstimationError::EstimationError;
};
struct NotNormalized : EstimationError {
    using EstimationError::EstimationError;
};
struct EmptySample : EstimationError {
    using EstimationError::EstimationError;
};
struct SupportMismatch : EstimationError {
    using EstimationError::EstimationError;
};
struct DimensionMismatch : EstimationError {
    using EstimationError::EstimationError;
};
struct ZeroProbability : EstimationError {
    using EstimationError::EstimationError;
};
struct NegativeDivergence : EstimationError {
    using EstimationError::EstimationError;
};
struct MeanOutOfRange : EstimationError {
    using EstimationError::EstimationError;
};
struct UndefinedAtZeroTemperature : EstimationError {
    using EstimationError::EstimationError;
};
struct IoError : EstimationError {
    using EstimationError::EstimationError;
};

}  // namespace mfee
