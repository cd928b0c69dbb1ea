#include "fairsweep/policy.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

#include "fairsweep/errors.hpp"

namespace fairsweep {

namespace {

constexpr int kCurveScanIntervals = 64;
constexpr int kDefaultGridCells = 400;
constexpr double kWidthTol = 1e-13;   // bisection interval, relative to range
constexpr double kGoldenTol = 1e-12;  // golden-section interval, relative to range

double marginal_utility(const Population& pop, const GroupModel& g, double theta) {
    return g.alpha() * pop.u_plus() * g.qualified().pdf(theta) -
           (1.0 - g.alpha()) * pop.u_minus() * g.unqualified().pdf(theta);
}

double measure_density(const GroupModel& g, Criterion c, double theta) {
    switch (c) {
        case Criterion::DP: return g.mixture_pdf(theta);
        case Criterion::TPR: return g.qualified().pdf(theta);
        case Criterion::FPR: return g.unqualified().pdf(theta);
        default:
            throw UnsupportedCriterion("measure_density: criterion has no group measure");
    }
}

double group_utility(const Population& pop, const GroupModel& g, double theta) {
    return g.alpha() * pop.u_plus() * g.qualified().tail(theta) -
           (1.0 - g.alpha()) * pop.u_minus() * g.unqualified().tail(theta);
}

double pair_utility(const Population& pop, double ta, double tb) {
    return pop.a().n() * group_utility(pop, pop.a(), ta) +
           pop.b().n() * group_utility(pop, pop.b(), tb);
}

// First-order optimality defect of an interior constrained optimum: the
// marginal utilities weighted by group share over the constraint-measure
// density sum to zero when thresholds are jointly optimal along the curve.
double stationarity_defect(const Population& pop, Criterion c, double ta, double tb) {
    const double da = measure_density(pop.a(), c, ta);
    const double db = measure_density(pop.b(), c, tb);
    if (da < 1e-12 || db < 1e-12) return 0.0;
    return pop.a().n() * marginal_utility(pop, pop.a(), ta) / da +
           pop.b().n() * marginal_utility(pop, pop.b(), tb) / db;
}

BoundaryKind classify_boundary(const GroupModel& g, double theta) {
    if (theta <= g.x_min()) return BoundaryKind::accept_all;
    if (theta >= g.x_max()) return BoundaryKind::reject_all;
    return BoundaryKind::interior;
}

}  // namespace

const char* criterion_name(Criterion c) {
    switch (c) {
        case Criterion::MU: return "mu";
        case Criterion::DP: return "dp";
        case Criterion::TPR: return "tpr";
        case Criterion::FPR: return "fpr";
        case Criterion::EO: return "eo";
    }
    return "?";
}

Criterion criterion_from_name(const std::string& name) {
    std::string s;
    for (char ch : name) s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
    if (s == "mu") return Criterion::MU;
    if (s == "dp") return Criterion::DP;
    if (s == "tpr") return Criterion::TPR;
    if (s == "fpr") return Criterion::FPR;
    if (s == "eo") return Criterion::EO;
    throw ValidationError("unknown criterion name: " + name);
}

double PolicyEvaluation::gap(Criterion c) const {
    switch (c) {
        case Criterion::MU: return 0.0;
        case Criterion::DP: return gap_dp;
        case Criterion::TPR: return gap_tpr;
        case Criterion::FPR: return gap_fpr;
        case Criterion::EO: return std::max(gap_tpr, gap_fpr);
    }
    return 0.0;
}

double fairness_measure(const GroupModel& g, Criterion c, double theta) {
    switch (c) {
        case Criterion::DP: return g.mixture_tail(theta);
        case Criterion::TPR: return g.qualified().tail(theta);
        case Criterion::FPR: return g.unqualified().tail(theta);
        default:
            throw UnsupportedCriterion("fairness_measure: criterion has no group measure");
    }
}

double invert_fairness_measure(const GroupModel& g, Criterion c, double p) {
    p = std::clamp(p, 0.0, 1.0);
    double lo = g.x_min(), hi = g.x_max();
    if (p >= 1.0) return lo;
    if (p <= 0.0) return hi;
    const double width = hi - lo;
    for (int it = 0; it < 200 && hi - lo > kWidthTol * width; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (fairness_measure(g, c, mid) >= p)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

PolicyEvaluation evaluate_policy(const Population& pop, double theta_a, double theta_b) {
    PolicyEvaluation ev;
    const GroupModel* gm[2] = {&pop.a(), &pop.b()};
    const double th[2] = {theta_a, theta_b};
    GroupEvaluation* out[2] = {&ev.a, &ev.b};
    for (int i = 0; i < 2; ++i) {
        const GroupModel& g = *gm[i];
        out[i]->selection_rate = g.mixture_tail(th[i]);
        out[i]->tpr = g.qualified().tail(th[i]);
        out[i]->fpr = g.unqualified().tail(th[i]);
        out[i]->utility = group_utility(pop, g, th[i]);
    }
    ev.total_utility = pop.a().n() * ev.a.utility + pop.b().n() * ev.b.utility;
    ev.gap_dp = std::abs(ev.a.selection_rate - ev.b.selection_rate);
    ev.gap_tpr = std::abs(ev.a.tpr - ev.b.tpr);
    ev.gap_fpr = std::abs(ev.a.fpr - ev.b.fpr);
    return ev;
}

PolicyEvaluation evaluate_policy(const Population& pop, const ThresholdPair& t) {
    return evaluate_policy(pop, t.theta_a, t.theta_b);
}

namespace {

// Lattice argmax of one group's utility, used when gamma cannot be bisected.
double mu_grid_fallback(const Population& pop, const GroupModel& g, double step) {
    const double lo = g.x_min(), hi = g.x_max();
    if (step <= 0.0) step = (hi - lo) / kDefaultGridCells;
    const auto scan = [&](double from, double to, double h) {
        double best_t = from, best_u = -std::numeric_limits<double>::infinity();
        for (double t = from; t < to + 0.5 * h; t += h) {
            const double tt = std::min(t, to);
            const double u = group_utility(pop, g, tt);
            if (u > best_u) {
                best_u = u;
                best_t = tt;
            }
        }
        return best_t;
    };
    const double coarse = scan(lo, hi, step);
    return scan(std::max(lo, coarse - step), std::min(hi, coarse + step), step / 10.0);
}

}  // namespace

ThresholdPair solve_mu(const Population& pop, double grid_step) {
    const double target = pop.u_minus() / (pop.u_plus() + pop.u_minus());
    ThresholdPair out;
    out.solver = SolverPath::rootfind;
    double residual = 0.0;
    for (GroupId id : {GroupId::a, GroupId::b}) {
        const GroupModel& g = pop.group(id);
        double theta;
        BoundaryKind bk = BoundaryKind::interior;
        if (!check_mlr(g).holds) {
            theta = mu_grid_fallback(pop, g, grid_step);
            bk = classify_boundary(g, theta);
            out.solver = SolverPath::grid;
        } else {
            double lo = g.x_min(), hi = g.x_max();
            if (g.gamma(lo) >= target) {
                theta = lo;
                bk = BoundaryKind::accept_all;
            } else if (g.gamma(hi) < target) {
                theta = hi;
                bk = BoundaryKind::reject_all;
            } else {
                const double width = hi - lo;
                for (int it = 0; it < 200 && hi - lo > kWidthTol * width; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    if (g.gamma(mid) < target)
                        lo = mid;
                    else
                        hi = mid;
                }
                theta = 0.5 * (lo + hi);
                residual = std::max(residual, std::abs(g.gamma(theta) - target));
            }
        }
        if (id == GroupId::a) {
            out.theta_a = theta;
            out.boundary_a = bk;
        } else {
            out.theta_b = theta;
            out.boundary_b = bk;
        }
    }
    out.stationarity_residual = residual;
    return out;
}

double ConstraintCurve::theta_a_at(double tb) const {
    if (tb <= theta_b.front()) return theta_a.front();
    if (tb >= theta_b.back()) return theta_a.back();
    const auto it = std::upper_bound(theta_b.begin(), theta_b.end(), tb);
    const std::size_t i = static_cast<std::size_t>(it - theta_b.begin());
    const double t = (tb - theta_b[i - 1]) / (theta_b[i] - theta_b[i - 1]);
    return theta_a[i - 1] + t * (theta_a[i] - theta_a[i - 1]);
}

ConstraintCurve constraint_curve(const Population& pop, Criterion c, int n_points) {
    if (c == Criterion::MU || c == Criterion::EO)
        throw UnsupportedCriterion("constraint_curve: criterion has no group measure");
    if (n_points < 2) throw ValidationError("constraint_curve: need at least 2 points");
    ConstraintCurve curve;
    curve.criterion = c;
    const double lo = pop.b().x_min(), hi = pop.b().x_max();
    curve.theta_b.resize(n_points);
    curve.theta_a.resize(n_points);
    for (int i = 0; i < n_points; ++i) {
        const double tb = lo + (hi - lo) * i / (n_points - 1);
        curve.theta_b[i] = tb;
        curve.theta_a[i] =
            invert_fairness_measure(pop.a(), c, fairness_measure(pop.b(), c, tb));
    }
    return curve;
}

namespace {

// --- exact-parity solve along the constraint curve ---------------------------

struct CurveSolution {
    double tb = 0.0;
    double ta = 0.0;
    bool interior = false;
};

// Sign of dU/d(theta_b) along the curve, rescaled by the (positive) group-a
// measure density so no division is needed:
//   sign(dU/dtb) = sign(-(n_a f_b margU_a + n_b f_a margU_b))
double curve_slope(const Population& pop, Criterion c, double tb, double ta) {
    const double da = measure_density(pop.a(), c, ta);
    const double db = measure_density(pop.b(), c, tb);
    return -(pop.a().n() * db * marginal_utility(pop, pop.a(), ta) +
             pop.b().n() * da * marginal_utility(pop, pop.b(), tb));
}

CurveSolution solve_on_curve(const Population& pop, Criterion c) {
    const GroupModel& b = pop.b();
    const double lo = b.x_min(), hi = b.x_max();
    const double range = hi - lo;
    const auto phi = [&](double tb) {
        return invert_fairness_measure(pop.a(), c, fairness_measure(b, c, tb));
    };
    const auto slope = [&](double tb) { return curve_slope(pop, c, tb, phi(tb)); };
    const auto value = [&](double tb) { return pair_utility(pop, phi(tb), tb); };

    std::vector<double> t(kCurveScanIntervals + 1), s(kCurveScanIntervals + 1);
    for (int i = 0; i <= kCurveScanIntervals; ++i) {
        t[i] = lo + range * i / kCurveScanIntervals;
        s[i] = slope(t[i]);
    }

    CurveSolution best;
    double best_u = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < kCurveScanIntervals; ++i) {
        if (!(s[i] > 0.0 && s[i + 1] <= 0.0)) continue;
        // Golden-section maximization of U inside the bracket.
        const double invphi = 0.6180339887498949;
        double x1 = t[i], x2 = t[i + 1];
        double m1 = x2 - invphi * (x2 - x1);
        double m2 = x1 + invphi * (x2 - x1);
        double u1 = value(m1), u2 = value(m2);
        while (x2 - x1 > kGoldenTol * range) {
            if (u1 >= u2) {
                x2 = m2;
                m2 = m1;
                u2 = u1;
                m1 = x2 - invphi * (x2 - x1);
                u1 = value(m1);
            } else {
                x1 = m1;
                m1 = m2;
                u1 = u2;
                m2 = x1 + invphi * (x2 - x1);
                u2 = value(m2);
            }
        }
        // Polish the stationary point on the original bracket.
        double bl = t[i], bh = t[i + 1];
        for (int it = 0; it < 200 && bh - bl > kWidthTol * range; ++it) {
            const double mid = 0.5 * (bl + bh);
            if (slope(mid) > 0.0)
                bl = mid;
            else
                bh = mid;
        }
        const double tb = 0.5 * (bl + bh);
        const double u = value(tb);
        if (u > best_u) {
            best_u = u;
            best = {tb, phi(tb), true};
        }
    }
    if (best.interior) return best;

    // No interior stationary point: the optimum sits at an end of the curve.
    const double u_lo = value(lo), u_hi = value(hi);
    const double tb = u_lo >= u_hi ? lo : hi;
    return {tb, phi(tb), false};
}

// --- relaxed / compound constraints on a 2-D threshold lattice ---------------

struct Axis {
    std::vector<double> t;
    std::vector<double> dp, tpr, fpr, util;
};

Axis build_axis(const Population& pop, const GroupModel& g, double lo, double hi,
                double step) {
    Axis ax;
    const int n = std::max(1, static_cast<int>(std::ceil((hi - lo) / step - 1e-12)));
    ax.t.reserve(n + 1);
    for (int i = 0; i < n; ++i) ax.t.push_back(lo + i * step);
    ax.t.push_back(hi);
    const std::size_t m = ax.t.size();
    ax.dp.resize(m);
    ax.tpr.resize(m);
    ax.fpr.resize(m);
    ax.util.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double th = ax.t[i];
        ax.tpr[i] = g.qualified().tail(th);
        ax.fpr[i] = g.unqualified().tail(th);
        ax.dp[i] = g.alpha() * ax.tpr[i] + (1.0 - g.alpha()) * ax.fpr[i];
        ax.util[i] = group_utility(pop, g, th);
    }
    return ax;
}

bool cell_feasible(const Axis& a, const Axis& b, std::size_t i, std::size_t j,
                   Criterion c, double eps) {
    switch (c) {
        case Criterion::DP: return std::abs(a.dp[i] - b.dp[j]) <= eps;
        case Criterion::TPR: return std::abs(a.tpr[i] - b.tpr[j]) <= eps;
        case Criterion::FPR: return std::abs(a.fpr[i] - b.fpr[j]) <= eps;
        case Criterion::EO:
            return std::abs(a.tpr[i] - b.tpr[j]) <= eps &&
                   std::abs(a.fpr[i] - b.fpr[j]) <= eps;
        default: return true;
    }
}

// Smallest epsilon at which the lattice has a feasible cell, to 1e-4.
double min_feasible_epsilon(const Axis& a, const Axis& b, Criterion c, double eps_lo) {
    const auto any_feasible = [&](double eps) {
        for (std::size_t j = 0; j < b.t.size(); ++j)
            for (std::size_t i = 0; i < a.t.size(); ++i)
                if (cell_feasible(a, b, i, j, c, eps)) return true;
        return false;
    };
    double lo = eps_lo, hi = 1.0;
    if (any_feasible(lo)) return lo;
    while (!any_feasible(hi)) hi *= 2.0;  // gaps are bounded by 1, but stay safe
    for (int it = 0; it < 60 && hi - lo > 1e-4; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (any_feasible(mid))
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

ThresholdPair solve_fair_grid(const Population& pop, const FairnessSpec& spec,
                              double step) {
    const GroupModel& ga = pop.a();
    const GroupModel& gb = pop.b();
    const double step_a = step > 0.0 ? step : (ga.x_max() - ga.x_min()) / kDefaultGridCells;
    const double step_b = step > 0.0 ? step : (gb.x_max() - gb.x_min()) / kDefaultGridCells;
    Axis a = build_axis(pop, ga, ga.x_min(), ga.x_max(), step_a);
    Axis b = build_axis(pop, gb, gb.x_min(), gb.x_max(), step_b);

    std::size_t bi = 0, bj = 0;
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < b.t.size(); ++j) {
        for (std::size_t i = 0; i < a.t.size(); ++i) {
            if (!cell_feasible(a, b, i, j, spec.criterion, spec.epsilon)) continue;
            const double u = ga.n() * a.util[i] + gb.n() * b.util[j];
            if (u > best) {
                best = u;
                bi = i;
                bj = j;
            }
        }
    }
    if (best == -std::numeric_limits<double>::infinity()) {
        const double min_eps = min_feasible_epsilon(a, b, spec.criterion, spec.epsilon);
        throw InfeasibleConstraint(
            std::string("no feasible threshold pair for ") + criterion_name(spec.criterion) +
                " at epsilon " + std::to_string(spec.epsilon) +
                "; smallest workable epsilon is about " + std::to_string(min_eps),
            min_eps);
    }

    // Local refinement at a tenth of the lattice step around the winner.
    const double ra_lo = std::max(ga.x_min(), a.t[bi] - step_a);
    const double ra_hi = std::min(ga.x_max(), a.t[bi] + step_a);
    const double rb_lo = std::max(gb.x_min(), b.t[bj] - step_b);
    const double rb_hi = std::min(gb.x_max(), b.t[bj] + step_b);
    Axis ra = build_axis(pop, ga, ra_lo, ra_hi, step_a / 10.0);
    Axis rb = build_axis(pop, gb, rb_lo, rb_hi, step_b / 10.0);
    std::size_t fi = 0, fj = 0;
    double fbest = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < rb.t.size(); ++j) {
        for (std::size_t i = 0; i < ra.t.size(); ++i) {
            if (!cell_feasible(ra, rb, i, j, spec.criterion, spec.epsilon)) continue;
            const double u = ga.n() * ra.util[i] + gb.n() * rb.util[j];
            if (u > fbest) {
                fbest = u;
                fi = i;
                fj = j;
            }
        }
    }

    ThresholdPair out;
    out.solver = SolverPath::grid;
    if (fbest > -std::numeric_limits<double>::infinity()) {
        out.theta_a = ra.t[fi];
        out.theta_b = rb.t[fj];
    } else {
        out.theta_a = a.t[bi];
        out.theta_b = b.t[bj];
    }
    out.boundary_a = classify_boundary(ga, out.theta_a);
    out.boundary_b = classify_boundary(gb, out.theta_b);
    if (spec.criterion == Criterion::EO) {
        const PolicyEvaluation ev = evaluate_policy(pop, out.theta_a, out.theta_b);
        out.stationarity_residual = std::max(ev.gap_tpr, ev.gap_fpr);
    } else {
        out.stationarity_residual =
            stationarity_defect(pop, spec.criterion, out.theta_a, out.theta_b);
    }
    return out;
}

}  // namespace

ThresholdPair solve_fair(const Population& pop, const FairnessSpec& spec, double grid_step) {
    if (!(spec.epsilon >= 0.0))
        throw ValidationError("solve_fair: epsilon must be nonnegative");
    if (spec.criterion == Criterion::MU) return solve_mu(pop, grid_step);
    if (spec.criterion == Criterion::EO || spec.epsilon > 0.0)
        return solve_fair_grid(pop, spec, grid_step);

    const CurveSolution sol = solve_on_curve(pop, spec.criterion);
    ThresholdPair out;
    out.solver = SolverPath::rootfind;
    out.theta_a = sol.ta;
    out.theta_b = sol.tb;
    out.boundary_a = classify_boundary(pop.a(), sol.ta);
    out.boundary_b = classify_boundary(pop.b(), sol.tb);
    out.stationarity_residual =
        sol.interior ? stationarity_defect(pop, spec.criterion, sol.ta, sol.tb) : 0.0;
    return out;
}

GridOracleResult grid_oracle(const Population& pop, const FairnessSpec& spec, double step,
                             const ThresholdWindow* window) {
    if (!(step > 0.0)) throw ValidationError("grid_oracle: step must be positive");
    const GroupModel& ga = pop.a();
    const GroupModel& gb = pop.b();
    double lo_a = ga.x_min(), hi_a = ga.x_max();
    double lo_b = gb.x_min(), hi_b = gb.x_max();
    if (window) {
        lo_a = std::max(lo_a, window->lo_a);
        hi_a = std::min(hi_a, window->hi_a);
        lo_b = std::max(lo_b, window->lo_b);
        hi_b = std::min(hi_b, window->hi_b);
        if (!(lo_a < hi_a) || !(lo_b < hi_b))
            throw ValidationError("grid_oracle: empty threshold window");
    }
    Axis a = build_axis(pop, ga, lo_a, hi_a, step);
    Axis b = build_axis(pop, gb, lo_b, hi_b, step);

    GridOracleResult res;
    res.pair.solver = SolverPath::grid;

    // Lattice resolution: the largest one-step change of any relevant measure.
    const auto axis_resolution = [&](const Axis& ax) {
        double r = 0.0;
        const auto upd = [&](const std::vector<double>& m) {
            for (std::size_t i = 0; i + 1 < m.size(); ++i)
                r = std::max(r, std::abs(m[i] - m[i + 1]));
        };
        switch (spec.criterion) {
            case Criterion::DP: upd(ax.dp); break;
            case Criterion::TPR: upd(ax.tpr); break;
            case Criterion::FPR: upd(ax.fpr); break;
            case Criterion::EO: upd(ax.tpr); upd(ax.fpr); break;
            case Criterion::MU: break;
        }
        return r;
    };
    res.resolution = std::max(axis_resolution(a), axis_resolution(b));

    if (spec.criterion == Criterion::MU) {
        double ua = -std::numeric_limits<double>::infinity();
        double ub = ua;
        for (std::size_t i = 0; i < a.t.size(); ++i)
            if (a.util[i] > ua) {
                ua = a.util[i];
                res.pair.theta_a = a.t[i];
            }
        for (std::size_t j = 0; j < b.t.size(); ++j)
            if (b.util[j] > ub) {
                ub = b.util[j];
                res.pair.theta_b = b.t[j];
            }
        res.best_utility = ga.n() * ua + gb.n() * ub;
    } else if (spec.epsilon == 0.0 && spec.criterion != Criterion::EO) {
        // Exact parity: walk the theta_b lattice, match theta_a by inverting the
        // group-a measure at each node, and keep the utility argmax. This stays a
        // brute-force search, independent of the rootfinding route.
        const std::vector<double>& mb = spec.criterion == Criterion::DP    ? b.dp
                                        : spec.criterion == Criterion::TPR ? b.tpr
                                                                           : b.fpr;
        const double slack = 1e-9 * (ga.x_max() - ga.x_min());
        double best = -std::numeric_limits<double>::infinity();
        bool found = false;
        for (std::size_t j = 0; j < b.t.size(); ++j) {
            const double th_a = invert_fairness_measure(ga, spec.criterion, mb[j]);
            if (th_a < lo_a - slack || th_a > hi_a + slack) continue;
            const double u = ga.n() * group_utility(pop, ga, th_a) + gb.n() * b.util[j];
            if (u > best) {
                best = u;
                res.pair.theta_a = th_a;
                res.pair.theta_b = b.t[j];
                found = true;
            }
        }
        if (!found) {
            const double min_eps = min_feasible_epsilon(a, b, spec.criterion, res.resolution);
            throw InfeasibleConstraint("grid_oracle: no parity match inside the window",
                                       min_eps);
        }
        res.best_utility = best;
    } else {
        const double band = std::max(spec.epsilon, res.resolution);
        double best = -std::numeric_limits<double>::infinity();
        bool found = false;
        for (std::size_t j = 0; j < b.t.size(); ++j) {
            for (std::size_t i = 0; i < a.t.size(); ++i) {
                if (!cell_feasible(a, b, i, j, spec.criterion, band)) continue;
                const double u = ga.n() * a.util[i] + gb.n() * b.util[j];
                if (u > best) {
                    best = u;
                    res.pair.theta_a = a.t[i];
                    res.pair.theta_b = b.t[j];
                    found = true;
                }
            }
        }
        if (!found) {
            const double min_eps = min_feasible_epsilon(a, b, spec.criterion, band);
            throw InfeasibleConstraint("grid_oracle: no feasible lattice cell", min_eps);
        }
        res.best_utility = best;
    }
    res.pair.boundary_a = classify_boundary(ga, res.pair.theta_a);
    res.pair.boundary_b = classify_boundary(gb, res.pair.theta_b);
    if (spec.criterion != Criterion::MU && spec.criterion != Criterion::EO)
        res.pair.stationarity_residual =
            stationarity_defect(pop, spec.criterion, res.pair.theta_a, res.pair.theta_b);
    return res;
}

ContourResult utility_contour(const Population& pop, int n_points, double epsilon) {
    if (n_points < 2) throw ValidationError("utility_contour: need at least 2 points");
    if (!(epsilon >= 0.0)) throw ValidationError("utility_contour: epsilon must be nonnegative");
    ContourResult out;
    out.rates.resize(n_points);
    std::vector<double> ta(n_points), tb(n_points);
    std::vector<double> tpr_a(n_points), fpr_a(n_points), tpr_b(n_points), fpr_b(n_points);
    for (int i = 0; i < n_points; ++i) {
        const double s = static_cast<double>(i) / (n_points - 1);
        out.rates[i] = s;
        ta[i] = invert_fairness_measure(pop.a(), Criterion::DP, s);
        tb[i] = invert_fairness_measure(pop.b(), Criterion::DP, s);
        tpr_a[i] = pop.a().qualified().tail(ta[i]);
        fpr_a[i] = pop.a().unqualified().tail(ta[i]);
        tpr_b[i] = pop.b().qualified().tail(tb[i]);
        fpr_b[i] = pop.b().unqualified().tail(tb[i]);
    }
    out.utility.assign(n_points, std::vector<double>(n_points));
    for (int i = 0; i < n_points; ++i) {
        for (int j = 0; j < n_points; ++j) {
            out.utility[i][j] = pair_utility(pop, ta[i], tb[j]);
            const double sa = out.rates[i], sb = out.rates[j];
            const bool tpr_ok = std::abs(tpr_a[i] - tpr_b[j]) <= epsilon;
            const bool fpr_ok = std::abs(fpr_a[i] - fpr_b[j]) <= epsilon;
            if (std::abs(sa - sb) <= epsilon) out.dp_locus.emplace_back(sa, sb);
            if (tpr_ok) out.tpr_locus.emplace_back(sa, sb);
            if (fpr_ok) out.fpr_locus.emplace_back(sa, sb);
            if (tpr_ok && fpr_ok) out.eo_locus.emplace_back(sa, sb);
        }
    }
    return out;
}

} // namespace fairsweep
