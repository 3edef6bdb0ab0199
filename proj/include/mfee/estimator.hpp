#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "mfee/distribution.hpp"
#include "mfee/info.hpp"

namespace mfee {

struct MfeeConfig {
    /// Additive count smoothing applied to every prefix ML estimate.
    double smoothing = 1e-4;
    /// Normalize the geometric mean before the divergence (keeps it >= 0).
    /// When false, the literal sub-normalized mean is used and the divergence
    /// is clamped from below.
    bool normalize_geomean = true;
};

/// Running geometric mean of estimators, kept as summed log-probabilities.
/// Always seeded with the uniform distribution.
class GeoMeanAccumulator {
  public:
    explicit GeoMeanAccumulator(std::size_t k);

    /// Folds in another estimator. Throws ZeroProbability on zero entries.
    void add(const Distribution& p);

    /// g[k] = exp(log_sums[k] / count), optionally normalized by its sum.
    std::vector<double> geometric_mean(bool normalize = true) const;

    std::size_t count() const { return count_; }
    std::size_t size() const { return log_sums_.size(); }

  private:
    std::vector<double> log_sums_;
    std::size_t count_;
};

/// One step of the data-temperature recursion.
struct TemperatureStep {
    std::size_t index = 0;   // prefix length i
    double divergence = 0;   // D_i, nats
    double beta0 = 0;        // 1/nats; +infinity when D -> 0
    double beta = 0;         // beta0 / (1 + beta0), in [0, 1]
};

inline constexpr double kDivergenceFloor = 1e-12;

/// beta0 = 1 / D(g || ml), beta = beta0 / (1 + beta0). With clamp_literal the
/// sub-normalized divergence is clamped to the floor instead of mapping D <= 0
/// to beta = 1. D < -floor throws NegativeDivergence.
TemperatureStep temperature_step(std::span<const double> geomean, const Distribution& ml,
                                 bool clamp_literal = false);

/// Tempered estimator P[k] = ml[k]^beta / sum ml^beta, in log space.
/// beta = 1 returns ml unchanged; beta = 0 returns uniform.
Distribution canonical_estimate(const Distribution& ml, double beta);

struct MfeeResult {
    Distribution estimate;
    double beta = 0;
    double beta0 = 0;  // +infinity marker when the final divergence vanished
    std::vector<TemperatureStep> trace;
    double free_energy = std::numeric_limits<double>::quiet_NaN();  // NaN at beta = 0
    double effective_information = 0;
};

/// The full sequential recursion over sample prefixes. Empty input yields the
/// uniform distribution at beta = 0.
MfeeResult mfee_estimate(const SampleSequence& samples, const MfeeConfig& config = {});

/// F = U - H/beta with U the cross entropy against ml. Throws
/// UndefinedAtZeroTemperature when beta = 0.
double free_energy_of(const MfeeResult& result, const Distribution& ml);

/// EI = sum P log P = -entropy(P), always <= 0.
double effective_information(const Distribution& estimate);

struct ConditionalRow {
    Distribution dist;
    double beta = 0;
    std::size_t sample_count = 0;
};

/// Per-context conditional estimates P(x|y). Contexts with no samples hold the
/// uniform row at beta = 0.
struct ConditionalTable {
    std::vector<ConditionalRow> rows;

    std::size_t num_contexts() const { return rows.size(); }
    std::vector<Distribution> distributions() const;
};

enum class ConditionalMode {
    PerContext,  // independent univariate recursion per context (default)
    Global,      // one beta from the conditional-KL recursion, applied to all rows
};

/// pairs are (context y, state x); contexts indexed 0..num_contexts-1.
ConditionalTable mfee_conditional(const std::vector<std::pair<int, int>>& pairs,
                                  int num_contexts, int alphabet_size,
                                  ConditionalMode mode = ConditionalMode::PerContext,
                                  const MfeeConfig& config = {});

/// joint[y][x] = cond[y][x] * marginal[y]. Throws DimensionMismatch.
JointTable joint_estimate(const ConditionalTable& cond, const Distribution& marginal);

enum class BayesAnchor {
    PosteriorMean,  // (n_k + alpha) / (N + K alpha), always proper
    PosteriorMode,  // (n_k + alpha - 1) / (N + K alpha - K); can be unavailable
};

/// Same recursion as mfee_estimate with the ML anchor replaced by the Dirichlet
/// posterior point estimate at every prefix.
MfeeResult bayes_anchored_estimate(const SampleSequence& samples, double prior_alpha,
                                   BayesAnchor anchor = BayesAnchor::PosteriorMean,
                                   const MfeeConfig& config = {});

}  // namespace mfee
