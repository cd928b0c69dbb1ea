#pragma once

#include <string>
#include <vector>

#include "fairsweep/population.hpp"

namespace fairsweep {

// MU maximizes utility unconstrained. DP equalizes selection rates, TPR true
// positive rates, FPR false positive rates; EO imposes TPR and FPR jointly.
enum class Criterion { MU, DP, TPR, FPR, EO };

const char* criterion_name(Criterion c);
Criterion criterion_from_name(const std::string& name);

struct FairnessSpec {
    Criterion criterion = Criterion::MU;
    double epsilon = 0.01;  // allowed gap between the group measures
};

enum class SolverPath { rootfind, grid };
enum class BoundaryKind { interior, accept_all, reject_all };

// A trained pair of group thresholds. stationarity_residual is the first-order
// optimality defect of the solution: for exact-parity root solves and for
// relaxed DP/TPR/FPR grid solves it is the weighted marginal-utility sum that
// vanishes at an interior optimum; for EO grid solves it records the larger of
// the two achieved gaps (EO optima are feasibility-driven).
struct ThresholdPair {
    double theta_a = 0.0;
    double theta_b = 0.0;
    double stationarity_residual = 0.0;
    SolverPath solver = SolverPath::rootfind;
    BoundaryKind boundary_a = BoundaryKind::interior;
    BoundaryKind boundary_b = BoundaryKind::interior;
};

struct GroupEvaluation {
    double selection_rate = 0.0;
    double tpr = 0.0;
    double fpr = 0.0;
    double utility = 0.0;  // per-capita within the group
};

struct PolicyEvaluation {
    GroupEvaluation a, b;
    double total_utility = 0.0;  // n_a * U_a + n_b * U_b
    double gap_dp = 0.0;
    double gap_tpr = 0.0;
    double gap_fpr = 0.0;
    // Gap relevant to a criterion; EO takes the larger of its two gaps,
    // MU has no constraint and reports 0.
    double gap(Criterion c) const;
};

// Monotone map from group-b threshold to the group-a threshold holding a
// single-measure parity constraint exact, tabulated on a grid.
struct ConstraintCurve {
    Criterion criterion = Criterion::DP;
    std::vector<double> theta_b;
    std::vector<double> theta_a;
    double theta_a_at(double tb) const;
};

struct ThresholdWindow {
    double lo_a, hi_a;
    double lo_b, hi_b;
};

struct GridOracleResult {
    ThresholdPair pair;
    double resolution = 0.0;    // largest per-step measure change on the lattice
    double best_utility = 0.0;
};

struct ContourResult {
    std::vector<double> rates;                       // shared selection-rate lattice
    std::vector<std::vector<double>> utility;        // [i][j]: rate_a index i, rate_b index j
    // Lattice cells within epsilon of parity, per criterion, as (s_a, s_b).
    std::vector<std::pair<double, double>> dp_locus;
    std::vector<std::pair<double, double>> tpr_locus;
    std::vector<std::pair<double, double>> fpr_locus;
    std::vector<std::pair<double, double>> eo_locus;
};

// Group-level constrained quantity: DP selection rate, TPR qualified tail,
// FPR unqualified tail. MU and EO have no single measure.
double fairness_measure(const GroupModel& g, Criterion c, double theta);

// Threshold at which the group's measure equals p (measures decrease in
// theta, so this is a bisection on a monotone function).
double invert_fairness_measure(const GroupModel& g, Criterion c, double p);

PolicyEvaluation evaluate_policy(const Population& pop, double theta_a, double theta_b);
PolicyEvaluation evaluate_policy(const Population& pop, const ThresholdPair& t);

// Unconstrained utility maximizer: per group, the threshold where gamma
// crosses u_minus / (u_plus + u_minus). Falls back to a lattice argmax when
// the likelihood ratio is not monotone. Boundary solutions are flagged.
ThresholdPair solve_mu(const Population& pop, double grid_step = 0.0);

ConstraintCurve constraint_curve(const Population& pop, Criterion c, int n_points = 257);

// Utility-maximal thresholds subject to the fairness constraint. Exact parity
// (epsilon = 0) for a single-measure criterion walks the constraint curve;
// relaxed constraints and EO scan a 2-D threshold lattice (default step:
// group range / 400) followed by local refinement at a tenth of the step.
// Throws InfeasibleConstraint (with the smallest workable epsilon) when the
// lattice holds no feasible cell.
ThresholdPair solve_fair(const Population& pop, const FairnessSpec& spec,
                         double grid_step = 0.0);

// Exhaustive lattice reference solver, deliberately free of the root-finding
// and search logic above. At exact parity (epsilon = 0, single-measure
// criterion) it walks the theta_b lattice and matches theta_a by inverting the
// group-a measure at each node; otherwise it scans the full 2-D lattice with
// the feasibility band widened to the lattice's own measure resolution. Ties
// prefer smaller theta_b, then smaller theta_a.
GridOracleResult grid_oracle(const Population& pop, const FairnessSpec& spec,
                             double step, const ThresholdWindow* window = nullptr);

// Total utility over a selection-rate lattice (thresholds recovered from the
// rates through the selection measure), plus near-parity loci per criterion.
ContourResult utility_contour(const Population& pop, int n_points, double epsilon);

} // namespace fairsweep
