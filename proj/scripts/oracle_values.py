#!/usr/bin/env python3
"""Independent reference values for the test suite, computed with plain
normal-CDF arithmetic, bisection, and implicit differentiation — none of the
library's own code. Frozen constants in tests/ come from this script's output.

Synthetic two-group setup: n_a = 0.8, n_b = 0.2, alpha_a = 0.8, alpha_b = 0.3,
qualified scores ~ N(70,10), unqualified ~ N(50,10) in both groups,
u_plus = 1, u_minus = 10. Domain [-30, 150] (mean +/- 8 sd, unioned).
"""
import math

N_A, N_B = 0.8, 0.2
AL_A, AL_B = 0.8, 0.3
UP, UM = 1.0, 10.0
LO, HI = -30.0, 150.0
TARGET = UM / (UP + UM)  # 10/11


def phi_tail(z):
    return 0.5 * math.erfc(z / math.sqrt(2.0))


def npdf(x, m, s):
    return math.exp(-0.5 * ((x - m) / s) ** 2) / (s * math.sqrt(2 * math.pi))


def f1(x):
    return npdf(x, 70, 10)


def f0(x):
    return npdf(x, 50, 10)


def d_f1(x):
    return -(x - 70) / 100.0 * f1(x)


def gamma(x, al):
    # logistic in x: 1 / (1 + exp(-x/5 + 12) * (1/al - 1))
    return 1.0 / (1.0 + math.exp(-0.2 * x + 12.0) * (1.0 / al - 1.0))


def gamma_prime(x, al):
    g = gamma(x, al)
    return 0.2 * g * (1.0 - g)


def mix_pdf(x, al):
    return al * f1(x) + (1 - al) * f0(x)


def mix_tail(t, al):
    return al * phi_tail((t - 70) / 10.0) + (1 - al) * phi_tail((t - 50) / 10.0)


def tail1(t):
    return phi_tail((t - 70) / 10.0)


def tail0(t):
    return phi_tail((t - 50) / 10.0)


def util_g(t, al):
    return al * UP * tail1(t) - (1 - al) * UM * tail0(t)


def total_util(ta, tb):
    return N_A * util_g(ta, AL_A) + N_B * util_g(tb, AL_B)


def bisect(fn, lo, hi, iters=200):
    flo = fn(lo)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if fn(mid) * flo > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def main():
    print("gamma(70, alpha=0.3) = %.12f" % gamma(70, 0.3))
    print("gamma(70, alpha=0.8) = %.12f" % gamma(70, 0.8))

    th_mu_a = 60 + 5 * math.log((1 - AL_A) * UM / AL_A)
    th_mu_b = 60 + 5 * math.log((1 - AL_B) * UM / AL_B)
    print("theta_mu_a = %.12f" % th_mu_a)
    print("theta_mu_b = %.12f" % th_mu_b)
    print("mu_total_utility = %.12f" % total_util(th_mu_a, th_mu_b))

    print("dp_measure(theta=60, group b) = %.12f" % mix_tail(60, AL_B))

    # DP eps=0: theta_a = phi(theta_b) equalizes mixture tails; on that curve
    # n_a gamma_a(phi(t)) + n_b gamma_b(t) = 10/11.
    def phi_dp(tb):
        m = mix_tail(tb, AL_B)
        return bisect(lambda ta: mix_tail(ta, AL_A) - m, LO, HI)

    tb_dp = bisect(lambda t: N_A * gamma(phi_dp(t), AL_A) + N_B * gamma(t, AL_B) - TARGET,
                   LO, HI)
    ta_dp = phi_dp(tb_dp)
    print("dp_theta_a = %.12f" % ta_dp)
    print("dp_theta_b = %.12f" % tb_dp)
    print("dp_total_utility = %.12f" % total_util(ta_dp, tb_dp))

    # TPR eps=0: both qualified dists are N(70,10) so parity forces a common
    # threshold; sum n_g alpha_g / gamma_g(t) = (1 + up/um) * sum n_g alpha_g.
    rhs = (1 + UP / UM) * (N_A * AL_A + N_B * AL_B)
    t_tpr = bisect(lambda t: N_A * AL_A / gamma(t, AL_A) + N_B * AL_B / gamma(t, AL_B) - rhs,
                   HI, LO)  # LHS decreasing in t: orient bracket accordingly
    print("tpr_theta = %.12f" % t_tpr)
    print("tpr_total_utility = %.12f" % total_util(t_tpr, t_tpr))

    # FPR eps=0: both unqualified dists are N(50,10), common threshold;
    # sum n_g (1-alpha_g) [up * gamma/(1-gamma) - um] = 0.
    def fpr_res(t):
        return (N_A * (1 - AL_A) * (UP * gamma(t, AL_A) / (1 - gamma(t, AL_A)) - UM)
                + N_B * (1 - AL_B) * (UP * gamma(t, AL_B) / (1 - gamma(t, AL_B)) - UM))

    t_fpr = bisect(fpr_res, LO, HI)
    print("fpr_theta = %.12f" % t_fpr)
    print("fpr_total_utility = %.12f" % total_util(t_fpr, t_fpr))

    # Label-bias sensitivities at beta = 1 (implicit differentiation of the
    # parity-constrained stationarity identities; label flips preserve the
    # constraint curves).
    ga_p = gamma_prime(ta_dp, AL_A)
    gb_p = gamma_prime(tb_dp, AL_B)
    ratio_dp = mix_pdf(tb_dp, AL_B) / mix_pdf(ta_dp, AL_A)
    d_tb_dp = -gamma(tb_dp, AL_B) / ((N_A / N_B) * ratio_dp * ga_p + gb_p)
    print("dp_dtheta_b = %.12f" % d_tb_dp)
    print("dp_dtheta_a = %.12f" % (ratio_dp * d_tb_dp))

    t = t_tpr
    ga, gb = gamma(t, AL_A), gamma(t, AL_B)
    gap_, gbp_ = gamma_prime(t, AL_A), gamma_prime(t, AL_B)
    d_tb_tpr = -(1 + UP / UM) / ((N_A / N_B) * (AL_A / AL_B) * gap_ / ga ** 2 + gbp_ / gb ** 2)
    print("tpr_dtheta_b = %.12f" % d_tb_tpr)
    print("tpr_dtheta_a = %.12f" % d_tb_tpr)  # equal qualified densities: ratio 1

    # Feature-shift sensitivities (constant unit shift of the qualified class
    # of group b; beta = 1 unbiased, shift amount = 1 - beta). l = f1/f0,
    # dl_dbeta(theta) = -eps * f1'(theta)/f0(theta); tail perturbation
    # T1(theta) = eps * f1(theta).
    eps = 1.0

    def lr(x, al):
        return f1(x) / f0(x)

    def lr_prime(x):
        # l(x) = exp(0.2 x - 12): derivative 0.2 l
        return 0.2 * f1(x) / f0(x)

    t = t_tpr
    A = N_A * (1 - AL_A) * UM * lr_prime(t) / lr(t, AL_A) ** 2
    C = N_B * (1 - AL_B) * UM * lr_prime(t) / lr(t, AL_B) ** 2
    B = N_B * (1 - AL_B) * UM * (-eps * d_f1(t) / f0(t)) / lr(t, AL_B) ** 2
    J = 1.0  # f1_b/f1_a at the common threshold
    K = -eps * f1(t) / f1(t)
    d_tb_feat_tpr = -(A * K + B) / (A * J + C)
    print("feat_tpr_dtheta_b = %.12f" % d_tb_feat_tpr)
    print("feat_tpr_dtheta_a = %.12f" % (J * d_tb_feat_tpr + K))

    t = t_fpr
    A = N_A * AL_A * UP * lr_prime(t)
    C = N_B * AL_B * UP * lr_prime(t)
    B = N_B * AL_B * UP * (-eps * d_f1(t) / f0(t))
    d_tb_feat_fpr = -B / (A + C)  # K = 0: unqualified tails unperturbed
    print("feat_fpr_dtheta_b = %.12f" % d_tb_feat_fpr)
    print("feat_fpr_dtheta_a = %.12f" % d_tb_feat_fpr)


if __name__ == "__main__":
    main()
