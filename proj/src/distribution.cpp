#include "fairsweep/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "fairsweep/errors.hpp"

namespace fairsweep {

namespace {
constexpr double kGaussianHalfWidth = 8.0;  // support truncated at mean +/- 8 sd
constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kSqrt2Pi = 2.5066282746310002;
}

double normal_pdf(double x, double mean, double sd) {
    const double z = (x - mean) / sd;
    return std::exp(-0.5 * z * z) / (sd * kSqrt2Pi);
}

double normal_cdf(double x, double mean, double sd) {
    return 0.5 * std::erfc(-(x - mean) / (sd * kSqrt2));
}

double normal_tail(double x, double mean, double sd) {
    return 0.5 * std::erfc((x - mean) / (sd * kSqrt2));
}

double normal_quantile(double p) {
    if (p <= 0.0 || p >= 1.0) {
        if (p == 0.0) return -kGaussianHalfWidth;
        if (p == 1.0) return kGaussianHalfWidth;
        throw DomainError("normal_quantile: p outside [0, 1]");
    }
    // Acklam's rational approximation, then one Halley step against erfc.
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double p_low = 0.02425;
    double x;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double e = 0.5 * std::erfc(-x / kSqrt2) - p;
    const double u = e * kSqrt2Pi * std::exp(0.5 * x * x);
    x -= u / (1.0 + 0.5 * x * u);
    return x;
}

double trapezoid(const std::vector<double>& grid, const std::vector<double>& values) {
    if (grid.size() != values.size() || grid.size() < 2)
        throw ValidationError("trapezoid: need matching grids of at least 2 nodes");
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i)
        acc += 0.5 * (values[i] + values[i + 1]) * (grid[i + 1] - grid[i]);
    return acc;
}

std::vector<double> smoothed_derivative(const std::vector<double>& grid,
                                        const std::vector<double>& values,
                                        double bandwidth) {
    const std::size_t n = grid.size();
    if (values.size() != n || n < 2)
        throw ValidationError("smoothed_derivative: need matching grids of at least 2 nodes");
    std::vector<double> smooth(n);
    if (bandwidth > 0.0) {
        for (std::size_t i = 0; i < n; ++i) {
            double wsum = 0.0, vsum = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                const double dx = grid[j] - grid[i];
                if (std::abs(dx) > 4.0 * bandwidth) continue;
                const double w = std::exp(-0.5 * dx * dx / (bandwidth * bandwidth));
                wsum += w;
                vsum += w * values[j];
            }
            smooth[i] = vsum / wsum;
        }
    } else {
        smooth = values;
    }
    std::vector<double> deriv(n);
    deriv[0] = (smooth[1] - smooth[0]) / (grid[1] - grid[0]);
    deriv[n - 1] = (smooth[n - 1] - smooth[n - 2]) / (grid[n - 1] - grid[n - 2]);
    for (std::size_t i = 1; i + 1 < n; ++i)
        deriv[i] = (smooth[i + 1] - smooth[i - 1]) / (grid[i + 1] - grid[i - 1]);
    return deriv;
}

ScoreDistribution ScoreDistribution::gaussian(double mean, double sd) {
    if (!(sd > 0.0)) throw ValidationError("gaussian: sd must be positive");
    ScoreDistribution d;
    d.kind_ = DistKind::gaussian;
    d.mean_ = mean;
    d.sd_ = sd;
    d.lo_ = mean - kGaussianHalfWidth * sd;
    d.hi_ = mean + kGaussianHalfWidth * sd;
    return d;
}

namespace {
void check_table(const std::vector<double>& grid, const std::vector<double>& density) {
    if (grid.size() < 2) throw ValidationError("empirical: need at least 2 grid nodes");
    if (grid.size() != density.size())
        throw ValidationError("empirical: grid and density lengths differ");
    for (std::size_t i = 0; i + 1 < grid.size(); ++i)
        if (!(grid[i] < grid[i + 1]))
            throw ValidationError("empirical: grid must be strictly ascending");
    for (double v : density)
        if (!(v >= 0.0)) throw ValidationError("empirical: density must be nonnegative");
}
}

ScoreDistribution ScoreDistribution::empirical(std::vector<double> grid,
                                               std::vector<double> density) {
    check_table(grid, density);
    const double mass = trapezoid(grid, density);
    if (std::abs(mass - 1.0) > 1e-9)
        throw ValidationError("empirical: density must integrate to 1 within 1e-9");
    double ignored;
    return empirical_renormalized(std::move(grid), std::move(density), &ignored);
}

ScoreDistribution ScoreDistribution::empirical_renormalized(std::vector<double> grid,
                                                            std::vector<double> density,
                                                            double* raw_integral) {
    check_table(grid, density);
    const double mass = trapezoid(grid, density);
    if (raw_integral) *raw_integral = mass;
    if (!(mass > 0.0)) throw ValidationError("empirical: density mass must be positive");
    ScoreDistribution d;
    d.kind_ = DistKind::empirical;
    for (double& v : density) v /= mass;
    d.lo_ = grid.front();
    d.hi_ = grid.back();
    d.grid_ = std::move(grid);
    d.density_ = std::move(density);
    d.cum_.resize(d.grid_.size());
    d.cum_[0] = 0.0;
    for (std::size_t i = 1; i < d.grid_.size(); ++i)
        d.cum_[i] = d.cum_[i - 1] + 0.5 * (d.density_[i] + d.density_[i - 1]) *
                                        (d.grid_[i] - d.grid_[i - 1]);
    d.cum_.back() = 1.0;
    return d;
}

double ScoreDistribution::mean() const {
    if (kind_ != DistKind::gaussian) throw DomainError("mean: not a gaussian distribution");
    return mean_;
}

double ScoreDistribution::stddev() const {
    if (kind_ != DistKind::gaussian) throw DomainError("stddev: not a gaussian distribution");
    return sd_;
}

const std::vector<double>& ScoreDistribution::grid() const {
    if (kind_ != DistKind::empirical) throw DomainError("grid: not an empirical distribution");
    return grid_;
}

const std::vector<double>& ScoreDistribution::density() const {
    if (kind_ != DistKind::empirical) throw DomainError("density: not an empirical distribution");
    return density_;
}

double ScoreDistribution::pdf(double x) const {
    if (x < lo_ || x > hi_) return 0.0;
    if (kind_ == DistKind::gaussian) return normal_pdf(x, mean_, sd_);
    const auto it = std::upper_bound(grid_.begin(), grid_.end(), x);
    if (it == grid_.begin()) return density_.front();
    if (it == grid_.end()) return density_.back();
    const std::size_t i = static_cast<std::size_t>(it - grid_.begin());
    const double t = (x - grid_[i - 1]) / (grid_[i] - grid_[i - 1]);
    return density_[i - 1] + t * (density_[i] - density_[i - 1]);
}

double ScoreDistribution::pdf_derivative(double x) const {
    if (x < lo_ || x > hi_) return 0.0;
    if (kind_ == DistKind::gaussian)
        return -(x - mean_) / (sd_ * sd_) * normal_pdf(x, mean_, sd_);
    auto it = std::upper_bound(grid_.begin(), grid_.end(), x);
    if (it == grid_.begin()) ++it;
    if (it == grid_.end()) --it;
    const std::size_t i = static_cast<std::size_t>(it - grid_.begin());
    return (density_[i] - density_[i - 1]) / (grid_[i] - grid_[i - 1]);
}

double ScoreDistribution::cdf(double x) const {
    if (x <= lo_) return 0.0;
    if (x >= hi_) return 1.0;
    if (kind_ == DistKind::gaussian) return normal_cdf(x, mean_, sd_);
    const auto it = std::upper_bound(grid_.begin(), grid_.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - grid_.begin());
    const double t = (x - grid_[i - 1]) / (grid_[i] - grid_[i - 1]);
    return cum_[i - 1] + t * (cum_[i] - cum_[i - 1]);
}

double ScoreDistribution::tail(double x) const {
    if (x <= lo_) return 1.0;
    if (x >= hi_) return 0.0;
    if (kind_ == DistKind::gaussian) return normal_tail(x, mean_, sd_);
    return 1.0 - cdf(x);
}

double ScoreDistribution::quantile(double p) const {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("quantile: p outside [0, 1]");
    if (p <= 0.0) return lo_;
    if (p >= 1.0) return hi_;
    if (kind_ == DistKind::gaussian) {
        const double x = mean_ + sd_ * normal_quantile(p);
        return std::clamp(x, lo_, hi_);
    }
    const auto it = std::lower_bound(cum_.begin(), cum_.end(), p);
    std::size_t i = static_cast<std::size_t>(it - cum_.begin());
    if (i == 0) return grid_.front();
    const double span = cum_[i] - cum_[i - 1];
    if (span <= 0.0) return grid_[i - 1];
    const double t = (p - cum_[i - 1]) / span;
    return grid_[i - 1] + t * (grid_[i] - grid_[i - 1]);
}

double cdf_tail(const ScoreDistribution& d, double theta) {
    return d.tail(theta);
}

} // namespace fairsweep
