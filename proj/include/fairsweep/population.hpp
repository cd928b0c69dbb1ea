#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fairsweep/distribution.hpp"

namespace fairsweep {

enum class GroupId { a, b };

const char* group_name(GroupId g);

// One observation: group membership, score, and the (possibly corrupted)
// binary qualification label.
struct LabeledRecord {
    GroupId group;
    double score;
    int label;  // 0 or 1
};

// Monotone-likelihood-ratio diagnostic for one group. max_drop is the largest
// relative decrease of f1/f0 across adjacent probe cells (0 when monotone);
// worst_x is the left edge of the offending cell.
struct MlrReport {
    bool holds = true;
    double worst_x = 0.0;
    double max_drop = 0.0;
};

// One population group: mass share n, qualification rate alpha, and the two
// class-conditional score distributions. Derived quantities (qualification
// profile gamma, its derivative, mixture density/tail, likelihood ratio) are
// exposed as queries. Immutable after construction.
class GroupModel {
public:
    GroupModel(GroupId id, double n, double alpha,
               ScoreDistribution qualified, ScoreDistribution unqualified);

    GroupId id() const { return id_; }
    double n() const { return n_; }
    double alpha() const { return alpha_; }
    const ScoreDistribution& qualified() const { return q_; }
    const ScoreDistribution& unqualified() const { return u_; }

    double x_min() const { return lo_; }
    double x_max() const { return hi_; }

    // P(qualified | score = x). When both class densities vanish at x the
    // value at the nearest score where the mixture is positive is returned
    // and *degenerate (if given) is set.
    double gamma(double x, bool* degenerate = nullptr) const;
    // gamma clipped away from {0, 1} so Bayes inversions stay finite.
    double gamma_clamped(double x) const;
    // d gamma / dx. Analytic when both class densities are gaussian,
    // otherwise differenced on a smoothed table of gamma.
    double gamma_prime(double x) const;

    double mixture_pdf(double x) const;
    double mixture_tail(double theta) const;
    double likelihood_ratio(double x) const;  // f1/f0, +inf where only f0 vanishes

private:
    GroupId id_;
    double n_;
    double alpha_;
    ScoreDistribution q_, u_;
    double lo_, hi_;
    // Sampled gamma derivative, built only when a class density is tabulated.
    std::vector<double> dgrid_;
    std::vector<double> dgamma_;
};

// Nondecreasing-likelihood-ratio check on a probe grid (relative slack 1e-9).
MlrReport check_mlr(const GroupModel& g);

// Two-group population with decision utilities u_plus (gain per qualified
// accept) and u_minus (loss per unqualified accept). Group shares sum to 1.
class Population {
public:
    Population(GroupModel group_a, GroupModel group_b, double u_plus, double u_minus);

    const GroupModel& a() const { return a_; }
    const GroupModel& b() const { return b_; }
    const GroupModel& group(GroupId g) const { return g == GroupId::a ? a_ : b_; }
    double u_plus() const { return u_plus_; }
    double u_minus() const { return u_minus_; }

    // True when gamma_b <= gamma_a (within 1e-9) across a probe grid.
    // Recorded at construction; informational only.
    bool b_disadvantaged() const { return b_disadvantaged_; }

    double x_min() const { return lo_; }
    double x_max() const { return hi_; }

private:
    GroupModel a_, b_;
    double u_plus_, u_minus_;
    bool b_disadvantaged_;
    double lo_, hi_;
};

// Inverts a tabulated qualification profile gamma and overall score density f
// into class-conditional densities via Bayes' rule:
//   f1 = gamma * f / alpha,   f0 = (1 - gamma) * f / (1 - alpha),
// with alpha taken as the trapezoid integral of gamma * f. If alpha_hint is
// given and disagrees with that integral by more than 2% (relative), a warning
// is appended; the integral always wins so the inversion reproduces gamma.
GroupModel group_from_profile(GroupId id, double n,
                              const std::vector<double>& grid,
                              const std::vector<double>& gamma,
                              const std::vector<double>& density,
                              std::optional<double> alpha_hint = std::nullopt,
                              std::vector<std::string>* warnings = nullptr);

} // namespace fairsweep
