#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fairsweep/bias.hpp"
#include "fairsweep/ingest.hpp"
#include "fairsweep/policy.hpp"
#include "fairsweep/sensitivity.hpp"

namespace fairsweep {

enum class SourceKind { synthetic, table, records };

// Two-gaussian-per-group synthetic population parameters.
struct SyntheticParams {
    double n_a = 0.8;
    double alpha_a = 0.8, alpha_b = 0.3;
    double q_mean_a = 70.0, q_std_a = 10.0;   // qualified class, group a
    double u_mean_a = 50.0, u_std_a = 10.0;   // unqualified class, group a
    double q_mean_b = 70.0, q_std_b = 10.0;
    double u_mean_b = 50.0, u_std_b = 10.0;
};

// Declarative sweep description, loadable from a flat key = value file.
struct Scenario {
    SourceKind source = SourceKind::synthetic;
    SyntheticParams synthetic;
    std::string table_path;
    std::string records_path;
    int bins = 0;  // records histogram bins, 0 = auto

    double u_ratio = 10.0;        // u_minus / u_plus (u_plus normalized to 1)
    bool u_ratio_explicit = false;

    std::vector<Criterion> specs = {Criterion::MU, Criterion::DP, Criterion::TPR,
                                    Criterion::FPR, Criterion::EO};
    double epsilon = 0.01;

    bool has_bias = true;
    BiasFamily family = BiasFamily::underestimate_b;
    // Sweep levels: beta for the label families, shift scale for the feature
    // family (multiplies the shift profile below).
    std::vector<double> levels;
    ShiftSpec shift = ShiftSpec::constant(1.0);

    std::string results_path = "results.csv";
    bool want_contour = false;
    std::string contour_path = "contour.csv";
    int contour_points = 41;
    bool want_sensitivity = false;
    std::string sensitivity_path = "sensitivity.csv";
    double fd_step = 1e-3;
    bool want_crossover = false;
    std::string crossover_path = "crossover.csv";
    std::vector<double> alpha_b_grid;

    bool oracle = false;
    double grid_step = 0.0;  // oracle lattice step, 0 = auto
    std::uint64_t seed = 20260822;
};

Scenario load_scenario(const std::string& path);

// Throws ValidationError on an inconsistent scenario; fills defaults that
// depend on other fields (e.g. the sweep grid).
void finalize_scenario(Scenario* s);

// One trained-and-evaluated sweep cell. Solver failures are recorded in
// `error` and leave the numeric fields unset.
struct SweepCell {
    Criterion criterion = Criterion::MU;
    double level = 1.0;
    bool solved = false;
    std::string error;
    ThresholdPair trained;        // solved on the biased population
    PolicyEvaluation on_truth;    // trained thresholds applied to ground truth
    PolicyEvaluation on_biased;   // and to the believed population
    bool oracle_checked = false;
    ThresholdPair oracle;
    double oracle_resolution = 0.0;
};

struct SweepResult {
    BiasFamily family = BiasFamily::underestimate_b;
    bool has_bias = true;
    double epsilon = 0.01;
    std::vector<Criterion> specs;
    std::vector<double> levels;
    std::vector<SweepCell> cells;  // ordered by (spec, level)
};

struct ScenarioOutcome {
    SweepResult sweep;
    Population truth;
    std::vector<std::string> warnings;
};

// Finalizes a copy of the scenario and builds its ground-truth population
// (synthetic parameters, profile table, or scored records). MLR and ingest
// warnings are appended to `warnings` when given.
Population scenario_population(const Scenario& s,
                               std::vector<std::string>* warnings = nullptr);

// Applies each bias level, solves every spec on the biased population, and
// evaluates the trained thresholds on both populations. MU is added as a
// baseline when missing. Per-cell solver errors are recorded; the run
// continues. Deterministic under the scenario seed.
ScenarioOutcome run_scenario(const Scenario& s);

// Ordinary-least-squares slope of the truth-side gap of `criterion` (at its
// own trained thresholds) against bias level (1 - beta for the label
// families, the shift scale otherwise). Needs >= 3 solved cells.
double fit_violation_trend(const SweepResult& sr, Criterion criterion);

// Multiplies the shift profile by a nonnegative factor.
ShiftSpec scale_shift(const ShiftSpec& base, double scale);

// CSV emitters; all doubles are printed with %.12g so identical runs are
// byte-identical.
void write_results_csv(const SweepResult& sr, const std::string& path);
void write_contour_csv(const Population& truth, int n_points, double epsilon,
                       const std::string& path);
void write_sensitivity_csv(const std::vector<SensitivityReport>& reports,
                           const std::string& path);
void write_crossover_csv(const CrossoverReport& report, const std::string& path);

} // namespace fairsweep
