#pragma once

#include <vector>

#include "fairsweep/bias.hpp"
#include "fairsweep/policy.hpp"

namespace fairsweep {

// Rate of change of the exact-parity fair thresholds with respect to the bias
// parameter, evaluated at the unbiased operating point (beta = 1): analytic
// values from implicit differentiation of the constrained-optimality system,
// paired with a finite-difference re-solve check.
struct SensitivityReport {
    Criterion criterion = Criterion::DP;
    double d_theta_b_d_beta = 0.0;
    double d_theta_a_d_beta = 0.0;
    double fd_theta_b = 0.0;  // finite-difference estimates of the same rates
    double fd_theta_a = 0.0;
    double rel_err_b = 0.0;   // |analytic - fd| / max(|fd|, 1e-12)
    double rel_err_a = 0.0;
};

// Sensitivity to the label-flip family that downweights group b's believed
// qualification profile (gamma_hat = beta * gamma). Supported criteria: DP,
// TPR. The finite difference re-solves thresholds at beta shifted below 1
// (a one-sided second-order stencil: values above 1 leave the family's
// domain). Throws SolverUnavailable when the likelihood ratio is not
// monotone or the unbiased thresholds sit on the range boundary.
SensitivityReport sensitivity_label_bias(const Population& pop, Criterion criterion,
                                         double fd_step = 1e-3);

// Sensitivity to a score-measurement shift on group b, parametrized so the
// applied shift is (1 - beta) * shift(x) and beta = 1 is unbiased. Supported
// criteria: TPR, FPR. The finite difference is central (negative scales are
// valid shifts in the opposite direction). Errors as above.
SensitivityReport sensitivity_feature_bias(const Population& pop, Criterion criterion,
                                           const ShiftSpec& shift, double fd_step = 1e-3);

struct CrossoverRow {
    double alpha_b;
    double tpr_abs;  // |d theta_b / d beta| under TPR
    double dp_abs;   // |d theta_b / d beta| under DP
};

// Label-bias sensitivity magnitudes of DP versus TPR as group b's
// qualification rate varies with everything else fixed. The report records
// the leading run of grid values where TPR is strictly less sensitive than
// DP; alpha_bar is the largest grid value in that run (meaningful only when
// prefix_nonempty).
struct CrossoverReport {
    std::vector<CrossoverRow> rows;
    bool prefix_nonempty = false;
    double alpha_bar = 0.0;
};

CrossoverReport compare_dp_tpr(const Population& pop,
                               const std::vector<double>& alpha_b_grid);

} // namespace fairsweep
