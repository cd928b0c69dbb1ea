#include "fairsweep/population.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fairsweep/errors.hpp"

namespace fairsweep {

namespace {
constexpr double kGammaClip = 1e-9;       // keeps Bayes inversion away from 0/1
constexpr double kMlrSlack = 1e-9;        // relative tolerance for ratio drops
constexpr int kProbePoints = 1025;
constexpr int kDisadvantagedProbes = 513;

double clip_gamma(double g) { return std::clamp(g, kGammaClip, 1.0 - kGammaClip); }
}

const char* group_name(GroupId g) { return g == GroupId::a ? "a" : "b"; }

GroupModel::GroupModel(GroupId id, double n, double alpha,
                       ScoreDistribution qualified, ScoreDistribution unqualified)
    : id_(id), n_(n), alpha_(alpha), q_(std::move(qualified)), u_(std::move(unqualified)) {
    if (!(n >= 0.0 && n <= 1.0))
        throw ValidationError("GroupModel: group share must lie in [0, 1]");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw ValidationError("GroupModel: alpha must lie in (0, 1)");
    lo_ = std::min(q_.x_min(), u_.x_min());
    hi_ = std::max(q_.x_max(), u_.x_max());
    if (q_.kind() == DistKind::gaussian && u_.kind() == DistKind::gaussian) return;

    // Tabulated class density: sample gamma, smooth, difference. Uses the
    // shared table grid when both class densities sit on one, else a uniform
    // probe grid across the support.
    if (q_.kind() == DistKind::empirical && u_.kind() == DistKind::empirical &&
        q_.grid() == u_.grid()) {
        dgrid_ = q_.grid();
    } else {
        dgrid_.resize(kProbePoints);
        for (int i = 0; i < kProbePoints; ++i)
            dgrid_[i] = lo_ + (hi_ - lo_) * i / (kProbePoints - 1);
    }
    std::vector<double> gvals(dgrid_.size());
    for (std::size_t i = 0; i < dgrid_.size(); ++i) gvals[i] = gamma(dgrid_[i]);
    const double step = (dgrid_.back() - dgrid_.front()) / (dgrid_.size() - 1);
    dgamma_ = smoothed_derivative(dgrid_, gvals, 2.0 * step);
}

double GroupModel::gamma(double x, bool* degenerate) const {
    if (degenerate) *degenerate = false;
    if (x < lo_ || x > hi_) throw DomainError("gamma: score outside distribution bounds");
    const auto mass = [this](double t) {
        return alpha_ * q_.pdf(t) + (1.0 - alpha_) * u_.pdf(t);
    };
    double m = mass(x);
    if (m > 0.0) return alpha_ * q_.pdf(x) / m;
    // Both class densities vanish here; fall back to the nearest score where
    // the mixture is positive.
    const double h = (hi_ - lo_) / 4096.0;
    for (int k = 1; k <= 8192; ++k) {
        const double below = std::max(lo_, x - k * h);
        if ((m = mass(below)) > 0.0) {
            if (degenerate) *degenerate = true;
            return alpha_ * q_.pdf(below) / m;
        }
        const double above = std::min(hi_, x + k * h);
        if ((m = mass(above)) > 0.0) {
            if (degenerate) *degenerate = true;
            return alpha_ * q_.pdf(above) / m;
        }
    }
    throw ValidationError("gamma: mixture density vanishes everywhere");
}

double GroupModel::gamma_clamped(double x) const { return clip_gamma(gamma(x)); }

double GroupModel::gamma_prime(double x) const {
    if (dgrid_.empty()) {
        const double f1 = q_.pdf(x), f0 = u_.pdf(x);
        const double d1 = q_.pdf_derivative(x), d0 = u_.pdf_derivative(x);
        const double mix = alpha_ * f1 + (1.0 - alpha_) * f0;
        if (mix <= 0.0) return 0.0;
        return alpha_ * (1.0 - alpha_) * (d1 * f0 - f1 * d0) / (mix * mix);
    }
    const auto it = std::upper_bound(dgrid_.begin(), dgrid_.end(), x);
    if (it == dgrid_.begin()) return dgamma_.front();
    if (it == dgrid_.end()) return dgamma_.back();
    const std::size_t i = static_cast<std::size_t>(it - dgrid_.begin());
    const double t = (x - dgrid_[i - 1]) / (dgrid_[i] - dgrid_[i - 1]);
    return dgamma_[i - 1] + t * (dgamma_[i] - dgamma_[i - 1]);
}

double GroupModel::mixture_pdf(double x) const {
    return alpha_ * q_.pdf(x) + (1.0 - alpha_) * u_.pdf(x);
}

double GroupModel::mixture_tail(double theta) const {
    return alpha_ * q_.tail(theta) + (1.0 - alpha_) * u_.tail(theta);
}

double GroupModel::likelihood_ratio(double x) const {
    const double f1 = q_.pdf(x), f0 = u_.pdf(x);
    if (f0 > 0.0) return f1 / f0;
    if (f1 > 0.0) return std::numeric_limits<double>::infinity();
    return std::numeric_limits<double>::quiet_NaN();
}

MlrReport check_mlr(const GroupModel& g) {
    MlrReport r;
    double prev = std::numeric_limits<double>::quiet_NaN();
    double prev_x = 0.0;
    for (int i = 0; i < kProbePoints; ++i) {
        const double x = g.x_min() + (g.x_max() - g.x_min()) * i / (kProbePoints - 1);
        const double cur = g.likelihood_ratio(x);
        if (std::isnan(cur)) continue;
        if (!std::isnan(prev)) {
            double drop = 0.0;
            if (std::isinf(prev) && !std::isinf(cur)) {
                drop = 1.0;
            } else if (!std::isinf(prev) && !std::isinf(cur) && cur < prev) {
                drop = (prev - cur) / std::max(prev, std::numeric_limits<double>::min());
            }
            if (drop > r.max_drop) {
                r.max_drop = drop;
                r.worst_x = prev_x;
            }
        }
        prev = cur;
        prev_x = x;
    }
    r.holds = r.max_drop <= kMlrSlack;
    return r;
}

Population::Population(GroupModel group_a, GroupModel group_b, double u_plus, double u_minus)
    : a_(std::move(group_a)), b_(std::move(group_b)), u_plus_(u_plus), u_minus_(u_minus) {
    if (a_.id() != GroupId::a || b_.id() != GroupId::b)
        throw ValidationError("Population: groups must carry ids a and b");
    if (std::abs(a_.n() + b_.n() - 1.0) > 1e-9)
        throw ValidationError("Population: group shares must sum to 1");
    if (!(u_plus > 0.0) || !(u_minus > 0.0))
        throw ValidationError("Population: utilities must be positive");
    lo_ = std::min(a_.x_min(), b_.x_min());
    hi_ = std::max(a_.x_max(), b_.x_max());
    b_disadvantaged_ = true;
    for (int i = 0; i < kDisadvantagedProbes; ++i) {
        const double x = lo_ + (hi_ - lo_) * i / (kDisadvantagedProbes - 1);
        const double ga = a_.gamma(std::clamp(x, a_.x_min(), a_.x_max()));
        const double gb = b_.gamma(std::clamp(x, b_.x_min(), b_.x_max()));
        if (gb > ga + 1e-9) {
            b_disadvantaged_ = false;
            break;
        }
    }
}

GroupModel group_from_profile(GroupId id, double n,
                              const std::vector<double>& grid,
                              const std::vector<double>& gamma,
                              const std::vector<double>& density,
                              std::optional<double> alpha_hint,
                              std::vector<std::string>* warnings) {
    if (grid.size() != gamma.size() || grid.size() != density.size())
        throw ValidationError("group_from_profile: column lengths differ");
    for (double g : gamma)
        if (!(g >= 0.0 && g <= 1.0))
            throw InconsistentInput("group_from_profile: gamma outside [0, 1]");

    double mass = 0.0;
    ScoreDistribution overall =
        ScoreDistribution::empirical_renormalized(grid, density, &mass);
    const std::vector<double>& f = overall.density();

    std::vector<double> f1(grid.size()), f0(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double g = clip_gamma(gamma[i]);
        f1[i] = g * f[i];
        f0[i] = (1.0 - g) * f[i];
    }
    const double alpha = trapezoid(grid, f1);
    if (!(alpha > 0.0 && alpha < 1.0))
        throw ValidationError("group_from_profile: implied alpha outside (0, 1)");
    if (alpha_hint && warnings) {
        const double rel = std::abs(*alpha_hint - alpha) / alpha;
        if (rel > 0.02)
            warnings->push_back(std::string("group ") + group_name(id) +
                                ": supplied alpha deviates from integral of gamma*f by more "
                                "than 2%; using the integral");
    }
    return GroupModel(id, n, alpha,
                      ScoreDistribution::empirical_renormalized(grid, std::move(f1)),
                      ScoreDistribution::empirical_renormalized(grid, std::move(f0)));
}

} // namespace fairsweep
