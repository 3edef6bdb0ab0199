#include "mfee/estimator.hpp"

#include <algorithm>
#include <cmath>

namespace mfee {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Distribution dirichlet_point_estimate(const CountVector& counts, double alpha,
                                      BayesAnchor anchor) {
    const double k = static_cast<double>(counts.size());
    std::vector<double> probs(counts.size());
    if (anchor == BayesAnchor::PosteriorMean) {
        const double denom = counts.total + k * alpha;
        for (std::size_t i = 0; i < counts.size(); ++i)
            probs[i] = (counts.counts[i] + alpha) / denom;
    } else {
        const double denom = counts.total + k * alpha - k;
        if (denom <= 0.0)
            throw EstimationError("posterior mode undefined: non-positive denominator");
        for (std::size_t i = 0; i < counts.size(); ++i) {
            if (counts.counts[i] + alpha < 1.0)
                throw EstimationError("posterior mode undefined at state " + std::to_string(i));
            probs[i] = (counts.counts[i] + alpha - 1.0) / denom;
        }
    }
    return Distribution::from_weights(std::move(probs));
}

// Shared recursion body: `anchor_at` yields the point estimate for the prefix
// counts at each step.
template <typename AnchorFn>
MfeeResult run_recursion(const SampleSequence& samples, const MfeeConfig& config,
                         AnchorFn anchor_at) {
    const std::size_t k = static_cast<std::size_t>(samples.alphabet_size);
    if (k < 2) throw EstimationError("alphabet size must be at least 2");

    GeoMeanAccumulator acc(k);
    CountVector counts = CountVector::zeros(k);

    MfeeResult result{Distribution::uniform(k)};
    result.trace.reserve(samples.size());
    Distribution anchor = Distribution::uniform(k);

    for (std::size_t i = 0; i < samples.size(); ++i) {
        counts.add(static_cast<std::size_t>(samples.states[i]));
        anchor = anchor_at(counts);
        const auto g = acc.geometric_mean(config.normalize_geomean);
        TemperatureStep step = temperature_step(g, anchor, !config.normalize_geomean);
        step.index = i + 1;
        result.estimate = canonical_estimate(anchor, step.beta);
        acc.add(result.estimate);
        result.beta = step.beta;
        result.beta0 = step.beta0;
        result.trace.push_back(step);
    }

    result.effective_information = effective_information(result.estimate);
    if (result.beta > 0.0) result.free_energy = free_energy_of(result, anchor);
    return result;
}

}  // namespace

GeoMeanAccumulator::GeoMeanAccumulator(std::size_t k)
    : log_sums_(k, std::log(1.0 / static_cast<double>(k))), count_(1) {
    if (k == 0) throw EstimationError("empty accumulator");
}

void GeoMeanAccumulator::add(const Distribution& p) {
    if (p.size() != log_sums_.size()) throw DimensionMismatch("alphabet size mismatch");
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] <= 0.0) throw ZeroProbability("zero entry in geometric-mean update");
        log_sums_[i] += std::log(p[i]);
    }
    ++count_;
}

std::vector<double> GeoMeanAccumulator::geometric_mean(bool normalize) const {
    std::vector<double> g(log_sums_.size());
    for (std::size_t i = 0; i < g.size(); ++i)
        g[i] = std::exp(log_sums_[i] / static_cast<double>(count_));
    if (normalize) {
        double sum = 0.0;
        for (double gi : g) sum += gi;
        for (double& gi : g) gi /= sum;
    }
    return g;
}

TemperatureStep temperature_step(std::span<const double> geomean, const Distribution& ml,
                                 bool clamp_literal) {
    if (geomean.size() != ml.size()) throw DimensionMismatch("alphabet size mismatch");
    if (!ml.strictly_positive()) throw ZeroProbability("anchor must be strictly positive");

    double d = 0.0;
    for (std::size_t i = 0; i < geomean.size(); ++i)
        if (geomean[i] > 0.0) d += geomean[i] * std::log(geomean[i] / ml[i]);

    TemperatureStep step;
    step.divergence = d;
    if (d < -kDivergenceFloor)
        throw NegativeDivergence("divergence " + std::to_string(d) +
                                 " < 0; sub-normalized geometric mean misconfigured");
    if (d <= kDivergenceFloor && !clamp_literal) {
        step.beta0 = kInf;
        step.beta = 1.0;
        return step;
    }
    step.beta0 = 1.0 / std::max(d, kDivergenceFloor);
    step.beta = step.beta0 / (1.0 + step.beta0);
    return step;
}

Distribution canonical_estimate(const Distribution& ml, double beta) {
    if (!ml.strictly_positive()) throw ZeroProbability("anchor must be strictly positive");
    if (beta == 1.0) return ml;
    if (beta == 0.0) return Distribution::uniform(ml.size());

    std::vector<double> logw(ml.size());
    double max_logw = -kInf;
    for (std::size_t i = 0; i < ml.size(); ++i) {
        logw[i] = beta * std::log(ml[i]);
        max_logw = std::max(max_logw, logw[i]);
    }
    std::vector<double> w(ml.size());
    for (std::size_t i = 0; i < ml.size(); ++i) w[i] = std::exp(logw[i] - max_logw);
    return Distribution::from_weights(std::move(w));
}

MfeeResult mfee_estimate(const SampleSequence& samples, const MfeeConfig& config) {
    return run_recursion(samples, config, [&](const CountVector& counts) {
        return ml_estimate(counts, config.smoothing);
    });
}

double free_energy_of(const MfeeResult& result, const Distribution& ml) {
    if (result.beta <= 0.0)
        throw UndefinedAtZeroTemperature("free energy undefined at beta = 0");
    return cross_entropy(result.estimate, ml) - entropy(result.estimate) / result.beta;
}

double effective_information(const Distribution& estimate) {
    return -entropy(estimate);
}

std::vector<Distribution> ConditionalTable::distributions() const {
    std::vector<Distribution> out;
    out.reserve(rows.size());
    for (const auto& row : rows) out.push_back(row.dist);
    return out;
}

namespace {

ConditionalTable conditional_per_context(const std::vector<std::pair<int, int>>& pairs,
                                         int num_contexts, int alphabet_size,
                                         const MfeeConfig& config) {
    std::vector<SampleSequence> by_context(static_cast<std::size_t>(num_contexts));
    for (auto& seq : by_context) seq.alphabet_size = alphabet_size;
    for (const auto& [y, x] : pairs)
        by_context.at(static_cast<std::size_t>(y)).states.push_back(x);

    ConditionalTable table;
    table.rows.reserve(by_context.size());
    for (const auto& seq : by_context) {
        MfeeResult r = mfee_estimate(seq, config);
        table.rows.push_back({std::move(r.estimate), r.beta, seq.size()});
    }
    return table;
}

// One beta per step from the conditional KL divergence between the per-context
// geometric means and the per-context anchors, weighted by the empirical
// context marginal; every row is tempered with that shared beta.
ConditionalTable conditional_global(const std::vector<std::pair<int, int>>& pairs,
                                    int num_contexts, int alphabet_size,
                                    const MfeeConfig& config) {
    const std::size_t c = static_cast<std::size_t>(num_contexts);
    const std::size_t k = static_cast<std::size_t>(alphabet_size);
    if (k < 2) throw EstimationError("alphabet size must be at least 2");

    std::vector<GeoMeanAccumulator> accs(c, GeoMeanAccumulator(k));
    std::vector<CountVector> counts(c, CountVector::zeros(k));
    std::vector<std::size_t> context_counts(c, 0);
    std::vector<Distribution> rows(c, Distribution::uniform(k));
    double beta = 0.0;

    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const auto y = static_cast<std::size_t>(pairs[i].first);
        counts.at(y).add(static_cast<std::size_t>(pairs[i].second));
        ++context_counts.at(y);

        double d = 0.0;
        std::vector<Distribution> anchors;
        anchors.reserve(c);
        for (std::size_t yy = 0; yy < c; ++yy) {
            anchors.push_back(ml_estimate(counts[yy], config.smoothing));
            if (context_counts[yy] == 0) continue;
            const double weight =
                static_cast<double>(context_counts[yy]) / static_cast<double>(i + 1);
            const auto g = accs[yy].geometric_mean(config.normalize_geomean);
            for (std::size_t x = 0; x < k; ++x)
                if (g[x] > 0.0) d += weight * g[x] * std::log(g[x] / anchors[yy][x]);
        }
        if (d < -kDivergenceFloor)
            throw NegativeDivergence("negative conditional divergence");
        beta = (d <= kDivergenceFloor) ? 1.0 : (1.0 / d) / (1.0 + 1.0 / d);

        for (std::size_t yy = 0; yy < c; ++yy) {
            rows[yy] = canonical_estimate(anchors[yy], beta);
            accs[yy].add(rows[yy]);
        }
    }

    ConditionalTable table;
    table.rows.reserve(c);
    for (std::size_t yy = 0; yy < c; ++yy) {
        const double row_beta = context_counts[yy] == 0 && pairs.empty() ? 0.0 : beta;
        table.rows.push_back({std::move(rows[yy]), pairs.empty() ? 0.0 : row_beta,
                              context_counts[yy]});
    }
    return table;
}

}  // namespace

ConditionalTable mfee_conditional(const std::vector<std::pair<int, int>>& pairs,
                                  int num_contexts, int alphabet_size,
                                  ConditionalMode mode, const MfeeConfig& config) {
    if (num_contexts < 1) throw EstimationError("need at least one context");
    for (const auto& [y, x] : pairs) {
        if (y < 0 || y >= num_contexts) throw DimensionMismatch("context index out of range");
        if (x < 0 || x >= alphabet_size) throw DimensionMismatch("state index out of range");
    }
    return mode == ConditionalMode::PerContext
               ? conditional_per_context(pairs, num_contexts, alphabet_size, config)
               : conditional_global(pairs, num_contexts, alphabet_size, config);
}

JointTable joint_estimate(const ConditionalTable& cond, const Distribution& marginal) {
    if (marginal.size() != cond.num_contexts())
        throw DimensionMismatch("marginal does not match context count");
    std::vector<std::vector<double>> joint;
    joint.reserve(cond.num_contexts());
    for (std::size_t y = 0; y < cond.num_contexts(); ++y) {
        const auto& row = cond.rows[y].dist;
        std::vector<double> out(row.size());
        for (std::size_t x = 0; x < row.size(); ++x) out[x] = row[x] * marginal[y];
        joint.push_back(std::move(out));
    }
    return JointTable::validated(std::move(joint));
}

MfeeResult bayes_anchored_estimate(const SampleSequence& samples, double prior_alpha,
                                   BayesAnchor anchor, const MfeeConfig& config) {
    if (prior_alpha <= 0.0) throw EstimationError("prior_alpha must be positive");
    return run_recursion(samples, config, [&](const CountVector& counts) {
        return dirichlet_point_estimate(counts, prior_alpha, anchor);
    });
}

}  // namespace mfee
