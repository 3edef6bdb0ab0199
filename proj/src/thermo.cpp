#include "mfee/thermo.hpp"

#include <algorithm>
#include <cmath>

#include "mfee/estimator.hpp"
#include "mfee/info.hpp"

namespace mfee {

namespace {

constexpr double kFdStep = 1e-5;

void require_positive(const Distribution& ml) {
    if (!ml.strictly_positive()) throw ZeroProbability("ml must be strictly positive");
}

// Canonical weights ml^beta / Z.
std::vector<double> tempered_weights(const Distribution& ml, double beta) {
    std::vector<double> w(ml.size());
    double max_logw = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < ml.size(); ++i) {
        w[i] = beta * std::log(ml[i]);
        max_logw = std::max(max_logw, w[i]);
    }
    double z = 0.0;
    for (double& wi : w) {
        wi = std::exp(wi - max_logw);
        z += wi;
    }
    for (double& wi : w) wi /= z;
    return w;
}

double free_energy(const Distribution& ml, double beta) {
    return -log_partition(ml, beta) / beta;
}

double rel_residual(double approx, double exact) {
    return std::abs(approx - exact) / std::max(std::abs(exact), 1e-3);
}

}  // namespace

double log_partition(const Distribution& ml, double beta) {
    require_positive(ml);
    double max_logw = -std::numeric_limits<double>::infinity();
    std::vector<double> logw(ml.size());
    for (std::size_t i = 0; i < ml.size(); ++i) {
        logw[i] = beta * std::log(ml[i]);
        max_logw = std::max(max_logw, logw[i]);
    }
    double sum = 0.0;
    for (double lw : logw) sum += std::exp(lw - max_logw);
    return max_logw + std::log(sum);
}

double partition_function(const Distribution& ml, double beta) {
    return std::exp(log_partition(ml, beta));
}

double internal_energy(const Distribution& ml, double beta) {
    require_positive(ml);
    const auto w = tempered_weights(ml, beta);
    double u = 0.0;
    for (std::size_t i = 0; i < ml.size(); ++i) u -= w[i] * std::log(ml[i]);
    return u;
}

double energy_fluctuation(const Distribution& ml, double beta) {
    require_positive(ml);
    const auto w = tempered_weights(ml, beta);
    double m1 = 0.0;
    double m2 = 0.0;
    for (std::size_t i = 0; i < ml.size(); ++i) {
        const double eps = -std::log(ml[i]);
        m1 += w[i] * eps;
        m2 += w[i] * eps * eps;
    }
    return m2 - m1 * m1;
}

double mfe_fisher_information(const Distribution& ml, double beta) {
    require_positive(ml);
    // Independent route: score of log(ml^beta/Z) in beta is log ml + U.
    const auto w = tempered_weights(ml, beta);
    const double u = internal_energy(ml, beta);
    double info = 0.0;
    for (std::size_t i = 0; i < ml.size(); ++i) {
        const double score = std::log(ml[i]) + u;
        info += w[i] * score * score;
    }
    return info;
}

double heat_capacity(const Distribution& ml, double beta) {
    return beta * beta * energy_fluctuation(ml, beta);
}

bool ThermoReport::within_tolerance() const {
    if (residuals.entropy_identity > 1e-10) return false;
    if (residuals.beta_from_dH_dU && *residuals.beta_from_dH_dU > 1e-4) return false;
    return residuals.energy_from_logZ <= 1e-5 && residuals.gibbs_helmholtz <= 1e-5 &&
           residuals.entropy_from_F <= 1e-5 && residuals.fluctuation_fd <= 1e-5;
}

ThermoReport identity_report(const Distribution& ml, double beta) {
    require_positive(ml);
    if (beta <= 0.0 || beta > 1.0) throw EstimationError("beta must be in (0, 1]");

    ThermoReport r;
    r.beta = beta;
    r.logZ = log_partition(ml, beta);
    r.Z = std::exp(r.logZ);
    r.U = internal_energy(ml, beta);
    r.H = entropy(canonical_estimate(ml, beta));
    r.F = free_energy(ml, beta);
    r.fluctuation = energy_fluctuation(ml, beta);
    r.fisher = mfe_fisher_information(ml, beta);
    r.heat_capacity = heat_capacity(ml, beta);

    r.residuals.entropy_identity = std::abs(r.H - (beta * r.U + r.logZ));

    // Central differences in beta, clamped away from the interval ends.
    const double h = kFdStep;
    const double b = std::clamp(beta, h, 1.0 - h);
    const double u_plus = internal_energy(ml, b + h);
    const double u_minus = internal_energy(ml, b - h);
    const double u_at = internal_energy(ml, b);
    const double h_plus = entropy(canonical_estimate(ml, b + h));
    const double h_minus = entropy(canonical_estimate(ml, b - h));
    const double f_plus = free_energy(ml, b + h);
    const double f_minus = free_energy(ml, b - h);
    const double h_at = entropy(canonical_estimate(ml, b));

    const double du = u_plus - u_minus;
    if (std::abs(du) > 1e-9) {
        const double beta_fd = (h_plus - h_minus) / du;
        r.residuals.beta_from_dH_dU = std::abs(beta_fd - b) / b;
    }

    const double dlogz =
        (log_partition(ml, b + h) - log_partition(ml, b - h)) / (2.0 * h);
    r.residuals.energy_from_logZ = rel_residual(-dlogz, u_at);

    const double dbf = ((b + h) * f_plus - (b - h) * f_minus) / (2.0 * h);
    r.residuals.gibbs_helmholtz = rel_residual(dbf, u_at);

    const double df = (f_plus - f_minus) / (2.0 * h);
    r.residuals.entropy_from_F = rel_residual(b * b * df, h_at);

    // Second derivative of logZ via the analytic first derivative -U; a direct
    // second difference of logZ at this step size drowns in round-off.
    const double d2logz = -(u_plus - u_minus) / (2.0 * h);
    r.residuals.fluctuation_fd = rel_residual(d2logz, energy_fluctuation(ml, b));

    return r;
}

}  // namespace mfee
