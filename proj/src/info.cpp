#include "mfee/info.hpp"

#include <cmath>

namespace mfee {

namespace {

void require_same_size(const Distribution& p, const Distribution& q) {
    if (p.size() != q.size()) throw DimensionMismatch("alphabet sizes differ");
}

}  // namespace

JointTable JointTable::validated(std::vector<std::vector<double>> probs) {
    if (probs.empty() || probs[0].empty()) throw NotNormalized("empty joint table");
    const std::size_t k = probs[0].size();
    double total = 0.0;
    for (const auto& row : probs) {
        if (row.size() != k) throw DimensionMismatch("ragged joint table");
        for (double p : row) {
            if (p < 0.0) throw NegativeEntry("negative joint entry");
            total += p;
        }
    }
    if (std::abs(total - 1.0) > Distribution::kNormalizationTol)
        throw NotNormalized("joint entries sum to " + std::to_string(total));
    return JointTable(std::move(probs));
}

std::vector<double> JointTable::context_marginal() const {
    std::vector<double> marginal(num_contexts(), 0.0);
    for (std::size_t y = 0; y < num_contexts(); ++y)
        for (double p : probs_[y]) marginal[y] += p;
    return marginal;
}

double entropy(const Distribution& p) {
    double h = 0.0;
    for (double pi : p.probs())
        if (pi > 0.0) h -= pi * std::log(pi);
    return h;
}

double cross_entropy(const Distribution& p, const Distribution& q) {
    require_same_size(p, q);
    double h = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] == 0.0) continue;
        if (q[i] == 0.0) throw SupportMismatch("q is zero where p has mass");
        h -= p[i] * std::log(q[i]);
    }
    return h;
}

double kl_divergence(const Distribution& p, const Distribution& q) {
    require_same_size(p, q);
    double d = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] == 0.0) continue;
        if (q[i] == 0.0) throw SupportMismatch("q is zero where p has mass");
        d += p[i] * std::log(p[i] / q[i]);
    }
    return d;
}

double conditional_entropy(const JointTable& joint) {
    const auto marginal = joint.context_marginal();
    double h = 0.0;
    for (std::size_t y = 0; y < joint.num_contexts(); ++y) {
        if (marginal[y] == 0.0) continue;
        for (double pxy : joint.row(y))
            if (pxy > 0.0) h -= pxy * std::log(pxy / marginal[y]);
    }
    return h;
}

double conditional_kl(const JointTable& joint_p, const std::vector<Distribution>& q_rows) {
    if (q_rows.size() != joint_p.num_contexts())
        throw DimensionMismatch("context count mismatch");
    const auto marginal = joint_p.context_marginal();
    double d = 0.0;
    for (std::size_t y = 0; y < joint_p.num_contexts(); ++y) {
        if (marginal[y] == 0.0) continue;
        if (q_rows[y].size() != joint_p.num_states())
            throw DimensionMismatch("state count mismatch");
        for (std::size_t x = 0; x < joint_p.num_states(); ++x) {
            const double pxy = joint_p.at(y, x);
            if (pxy == 0.0) continue;
            if (q_rows[y][x] == 0.0) throw SupportMismatch("Q(x|y) is zero where P has mass");
            d += pxy * std::log(pxy / marginal[y] / q_rows[y][x]);
        }
    }
    return d;
}

}  // namespace mfee
