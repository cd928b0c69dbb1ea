#include "fairsweep/sensitivity.hpp"

#include <algorithm>
#include <cmath>

#include "fairsweep/errors.hpp"

namespace fairsweep {

namespace {

constexpr int kShiftGridPoints = 8001;

double rel_err(double analytic, double fd) {
    return std::abs(analytic - fd) / std::max(std::abs(fd), 1e-12);
}

ThresholdPair solve_parity(const Population& pop, Criterion c) {
    return solve_fair(pop, FairnessSpec{c, 0.0});
}

void require_interior(const ThresholdPair& t) {
    if (t.boundary_a != BoundaryKind::interior || t.boundary_b != BoundaryKind::interior)
        throw SolverUnavailable(
            "sensitivity needs interior unbiased thresholds; got a boundary solution");
}

void require_mlr(const Population& pop) {
    if (!check_mlr(pop.a()).holds || !check_mlr(pop.b()).holds)
        throw SolverUnavailable(
            "sensitivity closed forms need a monotone likelihood ratio in both groups");
}

// Analytic label-bias rates at beta = 1 for exact-parity thresholds.
void label_rates(const Population& pop, Criterion c, const ThresholdPair& t,
                 double* d_b, double* d_a) {
    const GroupModel& a = pop.a();
    const GroupModel& b = pop.b();
    const double share = a.n() / b.n();
    if (c == Criterion::DP) {
        const double coupling = b.mixture_pdf(t.theta_b) / a.mixture_pdf(t.theta_a);
        const double den =
            share * coupling * a.gamma_prime(t.theta_a) + b.gamma_prime(t.theta_b);
        *d_b = -b.gamma(t.theta_b) / den;
        *d_a = coupling * *d_b;
    } else if (c == Criterion::TPR) {
        const double coupling =
            b.qualified().pdf(t.theta_b) / a.qualified().pdf(t.theta_a);
        const double ga = a.gamma(t.theta_a), gb = b.gamma(t.theta_b);
        const double den = share * (a.alpha() / b.alpha()) * coupling *
                               a.gamma_prime(t.theta_a) / (ga * ga) +
                           b.gamma_prime(t.theta_b) / (gb * gb);
        *d_b = -(1.0 + pop.u_plus() / pop.u_minus()) / den;
        *d_a = coupling * *d_b;
    } else {
        throw UnsupportedCriterion("label-bias sensitivity covers DP and TPR only");
    }
}

double lr_derivative(const GroupModel& g, double x) {
    const double f1 = g.qualified().pdf(x);
    const double f0 = g.unqualified().pdf(x);
    const double d1 = g.qualified().pdf_derivative(x);
    const double d0 = g.unqualified().pdf_derivative(x);
    if (!(f0 > 0.0))
        throw SolverUnavailable("likelihood-ratio derivative undefined where f0 vanishes");
    return (d1 * f0 - f1 * d0) / (f0 * f0);
}

// Per targeted class y: the pointwise rate of change of the believed class
// density at beta = 1,
//   D_y(x) = -shift(x) * f_y'(x) - f_y(x) * Z',  Z' = -integral(shift * f_y'),
// (the Z' term restores unit mass). Returns D on `grid` and the upper-tail
// cumulative integral of D at each node.
void class_density_rate(const ScoreDistribution& d, const ShiftSpec& shift,
                        const std::vector<double>& grid, std::vector<double>* D,
                        std::vector<double>* tail_int) {
    const std::size_t m = grid.size();
    std::vector<double> base(m);
    for (std::size_t i = 0; i < m; ++i)
        base[i] = -shift.at(grid[i]) * d.pdf_derivative(grid[i]);
    const double z_rate = trapezoid(grid, base);
    D->resize(m);
    for (std::size_t i = 0; i < m; ++i) D->at(i) = base[i] - d.pdf(grid[i]) * z_rate;
    tail_int->assign(m, 0.0);
    for (std::size_t i = m - 1; i-- > 0;)
        tail_int->at(i) = tail_int->at(i + 1) +
                          0.5 * (D->at(i) + D->at(i + 1)) * (grid[i + 1] - grid[i]);
}

double interp(const std::vector<double>& grid, const std::vector<double>& vals, double x) {
    if (x <= grid.front()) return vals.front();
    if (x >= grid.back()) return vals.back();
    const auto it = std::upper_bound(grid.begin(), grid.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - grid.begin());
    const double t = (x - grid[i - 1]) / (grid[i] - grid[i - 1]);
    return vals[i - 1] + t * (vals[i] - vals[i - 1]);
}

}  // namespace

SensitivityReport sensitivity_label_bias(const Population& pop, Criterion criterion,
                                         double fd_step) {
    if (criterion != Criterion::DP && criterion != Criterion::TPR)
        throw UnsupportedCriterion("label-bias sensitivity covers DP and TPR only");
    if (!(fd_step > 0.0 && fd_step < 0.5))
        throw ValidationError("fd_step must lie in (0, 0.5)");
    require_mlr(pop);
    const ThresholdPair base = solve_parity(pop, criterion);
    require_interior(base);

    SensitivityReport rep;
    rep.criterion = criterion;
    label_rates(pop, criterion, base, &rep.d_theta_b_d_beta, &rep.d_theta_a_d_beta);

    // One-sided second-order stencil at the right end of the beta domain:
    //   f'(1) ~ (3 f(1) - 4 f(1-h) + f(1-2h)) / (2h).
    const auto at = [&](double beta) {
        return solve_parity(apply_underestimate_b(pop, beta).biased, criterion);
    };
    const double h = fd_step;
    const ThresholdPair m1 = at(1.0 - h);
    const ThresholdPair m2 = at(1.0 - 2.0 * h);
    rep.fd_theta_b = (3.0 * base.theta_b - 4.0 * m1.theta_b + m2.theta_b) / (2.0 * h);
    rep.fd_theta_a = (3.0 * base.theta_a - 4.0 * m1.theta_a + m2.theta_a) / (2.0 * h);
    rep.rel_err_b = rel_err(rep.d_theta_b_d_beta, rep.fd_theta_b);
    rep.rel_err_a = rel_err(rep.d_theta_a_d_beta, rep.fd_theta_a);
    return rep;
}

SensitivityReport sensitivity_feature_bias(const Population& pop, Criterion criterion,
                                           const ShiftSpec& shift, double fd_step) {
    if (criterion != Criterion::TPR && criterion != Criterion::FPR)
        throw UnsupportedCriterion("feature-shift sensitivity covers TPR and FPR only");
    if (!(fd_step > 0.0 && fd_step < 0.5))
        throw ValidationError("fd_step must lie in (0, 0.5)");
    require_mlr(pop);
    const ThresholdPair base = solve_parity(pop, criterion);
    require_interior(base);

    const GroupModel& a = pop.a();
    const GroupModel& b = pop.b();
    const double ta = base.theta_a, tb = base.theta_b;

    // Rates of the believed group-b class densities on a probe grid.
    std::vector<double> grid(kShiftGridPoints);
    for (int i = 0; i < kShiftGridPoints; ++i)
        grid[i] = b.x_min() + (b.x_max() - b.x_min()) * i / (kShiftGridPoints - 1);
    std::vector<double> D1, T1, D0, T0;
    const bool touch_q = shift.target != ShiftTarget::unqualified;
    const bool touch_u = shift.target != ShiftTarget::qualified;
    if (touch_q) class_density_rate(b.qualified(), shift, grid, &D1, &T1);
    if (touch_u) class_density_rate(b.unqualified(), shift, grid, &D0, &T0);
    const auto d1_at = [&](double x) { return touch_q ? interp(grid, D1, x) : 0.0; };
    const auto t1_at = [&](double x) { return touch_q ? interp(grid, T1, x) : 0.0; };
    const auto d0_at = [&](double x) { return touch_u ? interp(grid, D0, x) : 0.0; };
    const auto t0_at = [&](double x) { return touch_u ? interp(grid, T0, x) : 0.0; };

    const double f0b = b.unqualified().pdf(tb);
    if (!(f0b > 0.0))
        throw SolverUnavailable("believed likelihood ratio undefined at the threshold");
    const double lb = b.likelihood_ratio(tb);
    const double la = a.likelihood_ratio(ta);
    const double lpa = lr_derivative(a, ta);
    const double lpb = lr_derivative(b, tb);
    // d(l_hat_b)/d(beta) at the threshold.
    const double dl_dbeta = (d1_at(tb) - lb * d0_at(tb)) / f0b;

    double A, B, C, J, K;
    if (criterion == Criterion::TPR) {
        A = a.n() * (1.0 - a.alpha()) * pop.u_minus() * lpa / (la * la);
        C = b.n() * (1.0 - b.alpha()) * pop.u_minus() * lpb / (lb * lb);
        B = b.n() * (1.0 - b.alpha()) * pop.u_minus() * dl_dbeta / (lb * lb);
        J = b.qualified().pdf(tb) / a.qualified().pdf(ta);
        K = -t1_at(tb) / a.qualified().pdf(ta);
    } else {
        A = a.n() * a.alpha() * pop.u_plus() * lpa;
        C = b.n() * b.alpha() * pop.u_plus() * lpb;
        B = b.n() * b.alpha() * pop.u_plus() * dl_dbeta;
        J = b.unqualified().pdf(tb) / a.unqualified().pdf(ta);
        K = -t0_at(tb) / a.unqualified().pdf(ta);
    }

    SensitivityReport rep;
    rep.criterion = criterion;
    rep.d_theta_b_d_beta = -(A * K + B) / (A * J + C);
    rep.d_theta_a_d_beta = J * rep.d_theta_b_d_beta + K;

    // Central finite difference: the applied shift scale is 1 - beta, so
    // beta = 1 -/+ h probes scales +h and -h.
    const auto at = [&](double scale) {
        return solve_parity(shift_population_scaled(pop, shift, scale), criterion);
    };
    const double h = fd_step;
    const ThresholdPair plus = at(-h);   // beta = 1 + h
    const ThresholdPair minus = at(+h);  // beta = 1 - h
    rep.fd_theta_b = (plus.theta_b - minus.theta_b) / (2.0 * h);
    rep.fd_theta_a = (plus.theta_a - minus.theta_a) / (2.0 * h);
    rep.rel_err_b = rel_err(rep.d_theta_b_d_beta, rep.fd_theta_b);
    rep.rel_err_a = rel_err(rep.d_theta_a_d_beta, rep.fd_theta_a);
    return rep;
}

CrossoverReport compare_dp_tpr(const Population& pop,
                               const std::vector<double>& alpha_b_grid) {
    if (alpha_b_grid.empty())
        throw ValidationError("compare_dp_tpr needs at least one alpha_b value");
    std::vector<double> grid = alpha_b_grid;
    std::sort(grid.begin(), grid.end());
    CrossoverReport rep;
    bool run_alive = true;
    for (double ab : grid) {
        if (!(ab > 0.0 && ab < 1.0))
            throw ValidationError("alpha_b values must lie in (0, 1)");
        const GroupModel& b = pop.b();
        GroupModel swapped(b.id(), b.n(), ab, b.qualified(), b.unqualified());
        Population varied(pop.a(), std::move(swapped), pop.u_plus(), pop.u_minus());

        double ddp_b, ddp_a, dtpr_b, dtpr_a;
        ThresholdPair t_dp = solve_parity(varied, Criterion::DP);
        ThresholdPair t_tpr = solve_parity(varied, Criterion::TPR);
        require_interior(t_dp);
        require_interior(t_tpr);
        label_rates(varied, Criterion::DP, t_dp, &ddp_b, &ddp_a);
        label_rates(varied, Criterion::TPR, t_tpr, &dtpr_b, &dtpr_a);

        CrossoverRow row{ab, std::abs(dtpr_b), std::abs(ddp_b)};
        rep.rows.push_back(row);
        if (run_alive && row.tpr_abs < row.dp_abs) {
            rep.prefix_nonempty = true;
            rep.alpha_bar = ab;
        } else {
            run_alive = false;
        }
    }
    return rep;
}

} // namespace fairsweep
