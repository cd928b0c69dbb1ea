#pragma once

#include <vector>

namespace fairsweep {

double normal_pdf(double x, double mean, double sd);
double normal_cdf(double x, double mean, double sd);
double normal_tail(double x, double mean, double sd);
// Inverse standard-normal CDF, accurate to ~1e-15 over (0,1).
double normal_quantile(double p);

// Trapezoid integral of sampled values over an ascending grid.
double trapezoid(const std::vector<double>& grid, const std::vector<double>& values);

// Gaussian-kernel smoothing of a sampled curve followed by finite-difference
// differentiation. bandwidth is in grid units; the kernel is truncated at 4
// bandwidths. Used where an analytic derivative is unavailable.
std::vector<double> smoothed_derivative(const std::vector<double>& grid,
                                        const std::vector<double>& values,
                                        double bandwidth);

enum class DistKind { gaussian, empirical };

// One-dimensional score distribution over a bounded interval. Either a
// parametric gaussian (bounds mean +/- 8 sd) or a tabulated density on an
// ascending grid. Tabulated densities integrate to 1 by trapezoid rule; the
// CDF between grid nodes is linearly interpolated, which keeps it monotone
// and cheaply invertible. Immutable after construction.
class ScoreDistribution {
public:
    static ScoreDistribution gaussian(double mean, double sd);

    // Requires the trapezoid integral of `density` to be 1 within 1e-9.
    static ScoreDistribution empirical(std::vector<double> grid, std::vector<double> density);

    // Rescales `density` so it integrates to exactly 1. The pre-scale
    // integral (which must be positive) is reported through raw_integral.
    static ScoreDistribution empirical_renormalized(std::vector<double> grid,
                                                    std::vector<double> density,
                                                    double* raw_integral = nullptr);

    DistKind kind() const { return kind_; }
    double x_min() const { return lo_; }
    double x_max() const { return hi_; }

    double mean() const;
    double stddev() const;
    const std::vector<double>& grid() const;
    const std::vector<double>& density() const;

    double pdf(double x) const;            // 0 outside [x_min, x_max]
    double pdf_derivative(double x) const;
    double cdf(double x) const;
    double tail(double x) const;           // 1 - cdf; 1 below x_min, 0 above x_max
    double quantile(double p) const;       // inverse CDF, p in [0, 1]

private:
    ScoreDistribution() = default;

    DistKind kind_ = DistKind::gaussian;
    double lo_ = 0.0, hi_ = 0.0;
    double mean_ = 0.0, sd_ = 1.0;
    std::vector<double> grid_;
    std::vector<double> density_;
    std::vector<double> cum_;  // trapezoid CDF at grid nodes, cum_.back() == 1
};

// Upper tail mass 1 - F(theta) of a score distribution.
double cdf_tail(const ScoreDistribution& d, double theta);

} // namespace fairsweep
