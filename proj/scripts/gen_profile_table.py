#!/usr/bin/env python3
"""Generate data/fico_table.csv: a credit-score-style two-group profile table.

Scores run 300..850 in steps of 2.5 (221 rows). Qualification profiles are
floored/capped logistics; score densities are grid-renormalized truncated
normals. The logistic midpoints are calibrated by bisection so the implied
qualified fractions (trapezoid of gamma * density) hit alpha_a = 0.76 and
alpha_b = 0.34 on the emitted grid.
"""
import math

GRID = [300 + 2.5 * i for i in range(221)]
ALPHA_A, ALPHA_B = 0.76, 0.34
N_A, N_B = 0.88, 0.12
U_RATIO = 10


def logistic(z):
    return 1.0 / (1.0 + math.exp(-z))


def npdf(x, m, s):
    return math.exp(-0.5 * ((x - m) / s) ** 2) / (s * math.sqrt(2 * math.pi))


def trapz(y, x):
    return sum((y[i] + y[i + 1]) * (x[i + 1] - x[i]) * 0.5 for i in range(len(x) - 1))


def gamma_a(x, mid):
    return 0.002 + 0.991 * logistic((x - mid) / 52.0)


def gamma_b(x, mid):
    return 0.002 + 0.948 * logistic((x - mid) / 45.0)


def density(mean, sd):
    f = [npdf(x, mean, sd) for x in GRID]
    z = trapz(f, GRID)
    return [v / z for v in f]


F_A = density(700, 95)
F_B = density(610, 100)


def implied_alpha(gamma_fn, mid, f):
    return trapz([gamma_fn(x, mid) * fx for x, fx in zip(GRID, f)], GRID)


def calibrate(gamma_fn, f, target):
    lo, hi = 450.0, 750.0
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if implied_alpha(gamma_fn, mid, f) > target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def main():
    mid_a = calibrate(gamma_a, F_A, ALPHA_A)
    mid_b = calibrate(gamma_b, F_B, ALPHA_B)
    ga = [gamma_a(x, mid_a) for x in GRID]
    gb = [gamma_b(x, mid_b) for x in GRID]
    with open("data/fico_table.csv", "w") as out:
        out.write("# n_a = %.12g\n" % N_A)
        out.write("# n_b = %.12g\n" % N_B)
        out.write("# u_minus_over_u_plus = %.12g\n" % U_RATIO)
        out.write("score,gamma_a,gamma_b,density_a,density_b\n")
        for i, x in enumerate(GRID):
            out.write("%.12g,%.12g,%.12g,%.12g,%.12g\n"
                      % (x, ga[i], gb[i], F_A[i], F_B[i]))
    print("mid_a=%.6f mid_b=%.6f alpha_a=%.6f alpha_b=%.6f max_gamma_b=%.6f"
          % (mid_a, mid_b, implied_alpha(gamma_a, mid_a, F_A),
             implied_alpha(gamma_b, mid_b, F_B), max(gb)))


if __name__ == "__main__":
    main()
