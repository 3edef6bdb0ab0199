#pragma once

#include <optional>

#include "mfee/distribution.hpp"

namespace mfee {

// Thermodynamic functions of the tempered family P_beta[k] = ml[k]^beta / Z.
// All require strictly positive ml; all values are in nats.

double log_partition(const Distribution& ml, double beta);
double partition_function(const Distribution& ml, double beta);

/// U = cross entropy of the tempered distribution against ml.
double internal_energy(const Distribution& ml, double beta);

/// Var(eps) with eps = -log ml, under the tempered distribution.
double energy_fluctuation(const Distribution& ml, double beta);

/// Fisher-information functional of the family in beta; identical to the
/// energy fluctuation (computed by an independent route here).
double mfe_fisher_information(const Distribution& ml, double beta);

/// C = beta^2 * Var(eps).
double heat_capacity(const Distribution& ml, double beta);

/// Residuals of the thermodynamic identities, checked by central finite
/// differences in beta (step 1e-5, beta clamped to [h, 1-h]).
struct ThermoReport {
    double beta = 0;
    double Z = 0;
    double logZ = 0;
    double U = 0;
    double H = 0;
    double F = 0;
    double fluctuation = 0;
    double fisher = 0;
    double heat_capacity = 0;

    struct Residuals {
        double entropy_identity = 0;            // H = beta U + log Z          (<= 1e-10)
        std::optional<double> beta_from_dH_dU;  // beta = dH/dU                (<= 1e-4 rel.)
        double energy_from_logZ = 0;            // U = -d logZ / d beta        (<= 1e-5 rel.)
        double gibbs_helmholtz = 0;             // U = d(beta F) / d beta      (<= 1e-5 rel.)
        double entropy_from_F = 0;              // H = beta^2 dF / d beta      (<= 1e-5 rel.)
        double fluctuation_fd = 0;              // Var = d^2 logZ / d beta^2   (<= 1e-5 rel.)
    } residuals;

    bool within_tolerance() const;
};

/// Evaluates every identity at (ml, beta). Requires beta in (0, 1].
/// beta_from_dH_dU is skipped (not identifiable) when dU/dbeta vanishes.
ThermoReport identity_report(const Distribution& ml, double beta);

}  // namespace mfee
