#pragma once

#include <vector>

#include "mfee/distribution.hpp"

namespace mfee {

/// Joint probabilities P(x, y) indexed as probs[y][x]. Grand total 1 within 1e-9.
class JointTable {
  public:
    static JointTable validated(std::vector<std::vector<double>> probs);

    std::size_t num_contexts() const { return probs_.size(); }
    std::size_t num_states() const { return probs_.empty() ? 0 : probs_[0].size(); }
    const std::vector<double>& row(std::size_t y) const { return probs_[y]; }
    double at(std::size_t y, std::size_t x) const { return probs_[y][x]; }

    /// Marginal over contexts: P(y).
    std::vector<double> context_marginal() const;

  private:
    explicit JointTable(std::vector<std::vector<double>> probs) : probs_(std::move(probs)) {}
    std::vector<std::vector<double>> probs_;
};

// All measures are in nats. 0 * log 0 := 0 by continuity.

double entropy(const Distribution& p);
double cross_entropy(const Distribution& p, const Distribution& q);
double kl_divergence(const Distribution& p, const Distribution& q);

/// H(X|Y) = -sum_{x,y} P(x,y) log P(x|y), rows normalized; empty rows contribute 0.
double conditional_entropy(const JointTable& joint);

/// sum_{x,y} P(x,y) log( P(x|y) / Q(x|y) ) with Q given as one row per context.
double conditional_kl(const JointTable& joint_p, const std::vector<Distribution>& q_rows);

}  // namespace mfee
