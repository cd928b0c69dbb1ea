#pragma once

#include <string>
#include <vector>

#include "fairsweep/population.hpp"

namespace fairsweep {

// Tabulated two-group qualification profile over a shared score grid, with
// per-group score densities and group fractions. Mirrors published
// score-table data (e.g. credit-score repay tables).
struct ProfileTable {
    std::vector<double> score;
    std::vector<double> gamma_a, gamma_b;      // qualification probability per score
    std::vector<double> density_a, density_b;  // score density per group (renormalized)
    double n_a = 0.5, n_b = 0.5;
    double u_minus_over_u_plus = 0.0;          // 0 when the file does not state it
    std::vector<std::string> warnings;
};

// CSV with header `score,gamma_a,gamma_b,density_a,density_b`. Metadata may
// precede it as comment lines `# key = value` with keys n_a, n_b,
// u_minus_over_u_plus. Densities are renormalized to unit mass; a drift
// beyond 1e-3 is recorded as a warning.
ProfileTable load_profile_table(const std::string& path);

struct IngestResult {
    Population population;
    MlrReport mlr_a, mlr_b;
    std::vector<std::string> warnings;
};

// Population and per-group monotonicity diagnostics built from a profile
// table via the Bayes inversion of (gamma, f) into class densities.
IngestResult table_to_population(const ProfileTable& t, double u_plus, double u_minus);

using ScoredRecords = std::vector<LabeledRecord>;

// CSV with header `group,score,label`; group is `a` or `b`, label 0 or 1.
ScoredRecords load_records(const std::string& path);

// Histograms each (group, label) cell into an empirical score density
// (bins = 0 picks Freedman-Diaconis, capped at 200), takes alpha_g as the
// group's label mean and n_g as its row share. Each cell needs at least two
// rows and two distinct scores.
IngestResult records_to_population(const ScoredRecords& r, int bins, double u_plus,
                                   double u_minus);

} // namespace fairsweep
