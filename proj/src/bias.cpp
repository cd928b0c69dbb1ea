#include "fairsweep/bias.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <random>

#include "fairsweep/errors.hpp"

namespace fairsweep {

namespace {

constexpr int kTransformGridPoints = 8001;
constexpr int kLrProbePoints = 513;
constexpr double kMassDriftTol = 1e-6;

double unit_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::string lower(const std::string& s) {
    std::string out;
    for (char ch : s)
        out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
    return out;
}

// Grid for a transformed class density: the base table when it already spans
// the group's score range, otherwise a fresh uniform grid over that range
// (a transform can place mass anywhere the mixture lives).
std::vector<double> transform_grid(double lo, double hi, const ScoreDistribution& base) {
    if (base.kind() == DistKind::empirical && base.x_min() <= lo + 1e-9 &&
        base.x_max() >= hi - 1e-9)
        return base.grid();
    std::vector<double> grid(kTransformGridPoints);
    for (int i = 0; i < kTransformGridPoints; ++i)
        grid[i] = lo + (hi - lo) * i / (kTransformGridPoints - 1);
    grid.back() = hi;
    return grid;
}

double node_mixture_defect(const GroupModel& truth, const GroupModel& believed,
                           const std::vector<double>& grid) {
    double worst = 0.0;
    for (double x : grid) {
        const double want = truth.mixture_pdf(x);
        const double got = believed.mixture_pdf(x);
        worst = std::max(worst, std::abs(want - got));
    }
    return worst;
}

}  // namespace

const char* bias_family_name(BiasFamily f) {
    switch (f) {
        case BiasFamily::underestimate_b: return "underestimate_b";
        case BiasFamily::overestimate_a: return "overestimate_a";
        case BiasFamily::feature_shift_b: return "feature_shift_b";
    }
    return "?";
}

BiasFamily bias_family_from_name(const std::string& name) {
    const std::string s = lower(name);
    if (s == "underestimate_b") return BiasFamily::underestimate_b;
    if (s == "overestimate_a") return BiasFamily::overestimate_a;
    if (s == "feature_shift_b") return BiasFamily::feature_shift_b;
    throw ValidationError("unknown bias family: " + name);
}

const char* shift_target_name(ShiftTarget t) {
    switch (t) {
        case ShiftTarget::qualified: return "qualified";
        case ShiftTarget::unqualified: return "unqualified";
        case ShiftTarget::all: return "all";
    }
    return "?";
}

ShiftTarget shift_target_from_name(const std::string& name) {
    const std::string s = lower(name);
    if (s == "qualified") return ShiftTarget::qualified;
    if (s == "unqualified") return ShiftTarget::unqualified;
    if (s == "all") return ShiftTarget::all;
    throw ValidationError("unknown shift target: " + name);
}

ShiftSpec ShiftSpec::constant(double epsilon, ShiftTarget target) {
    if (!(epsilon >= 0.0)) throw ValidationError("shift magnitude must be nonnegative");
    ShiftSpec s;
    s.kind = Kind::constant;
    s.epsilon = epsilon;
    s.target = target;
    return s;
}

ShiftSpec ShiftSpec::affine(double slope, double x0, ShiftTarget target) {
    if (!(slope >= 0.0 && slope < 1.0))
        throw ValidationError("affine shift slope must lie in [0, 1)");
    ShiftSpec s;
    s.kind = Kind::affine;
    s.slope = slope;
    s.x0 = x0;
    s.target = target;
    return s;
}

ShiftSpec ShiftSpec::tabulated(std::vector<double> grid, std::vector<double> values,
                               ShiftTarget target) {
    if (grid.size() < 2 || grid.size() != values.size())
        throw ValidationError("tabulated shift needs matching grid/value tables (>= 2 nodes)");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(values[i] >= 0.0)) throw ValidationError("shift magnitude must be nonnegative");
        if (i > 0) {
            if (!(grid[i] > grid[i - 1]))
                throw ValidationError("tabulated shift grid must be strictly ascending");
            // Keep x + shift(x) nondecreasing so the transform stays a density.
            if (grid[i] + values[i] < grid[i - 1] + values[i - 1] - 1e-9)
                throw ValidationError("tabulated shift must keep x + shift(x) nondecreasing");
        }
    }
    ShiftSpec s;
    s.kind = Kind::tabulated;
    s.grid = std::move(grid);
    s.values = std::move(values);
    s.target = target;
    return s;
}

double ShiftSpec::at(double x) const {
    switch (kind) {
        case Kind::constant: return epsilon;
        case Kind::affine: return std::max(0.0, slope * (x - x0));
        case Kind::tabulated: {
            if (x <= grid.front()) return values.front();
            if (x >= grid.back()) return values.back();
            const auto it = std::upper_bound(grid.begin(), grid.end(), x);
            const std::size_t i = static_cast<std::size_t>(it - grid.begin());
            const double t = (x - grid[i - 1]) / (grid[i] - grid[i - 1]);
            return values[i - 1] + t * (values[i] - values[i - 1]);
        }
    }
    return 0.0;
}

bool ShiftSpec::is_zero() const {
    switch (kind) {
        case Kind::constant: return epsilon == 0.0;
        case Kind::affine: return slope == 0.0;
        case Kind::tabulated:
            return std::all_of(values.begin(), values.end(),
                               [](double v) { return v == 0.0; });
    }
    return true;
}

BiasSpec BiasSpec::underestimate_b(double beta) {
    if (!(beta > 0.0 && beta <= 1.0))
        throw ValidationError("underestimate_b needs beta in (0, 1]");
    BiasSpec s;
    s.family = BiasFamily::underestimate_b;
    s.beta = beta;
    return s;
}

BiasSpec BiasSpec::overestimate_a(double beta) {
    if (!(beta >= 0.0 && beta < 1.0))
        throw ValidationError("overestimate_a needs beta in [0, 1)");
    BiasSpec s;
    s.family = BiasFamily::overestimate_a;
    s.beta = beta;
    return s;
}

BiasSpec BiasSpec::feature_shift_b(ShiftSpec shift) {
    BiasSpec s;
    s.family = BiasFamily::feature_shift_b;
    s.shift = std::move(shift);
    return s;
}

BiasedPopulation apply_underestimate_b(const Population& pop, double beta) {
    const BiasSpec spec = BiasSpec::underestimate_b(beta);
    if (beta == 1.0) return {pop, pop, spec, {}};

    const GroupModel& b = pop.b();
    const double alpha_hat = beta * b.alpha();
    if (!(alpha_hat > 0.0 && alpha_hat < 1.0))
        throw DegenerateProfile("believed qualification rate leaves (0, 1)");

    // Believed unqualified density in mixture form,
    //   f0_hat = (1 - beta * gamma) * f / (1 - beta * alpha),
    // which stays finite where gamma = 1 and integrates to 1 exactly.
    const std::vector<double> grid = transform_grid(b.x_min(), b.x_max(), b.unqualified());
    std::vector<double> vals(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        vals[i] = (1.0 - beta * b.gamma_clamped(grid[i])) * b.mixture_pdf(grid[i]) /
                  (1.0 - beta * b.alpha());

    BiasDiagnostics diag;
    diag.renorm_defect = std::abs(trapezoid(grid, vals) - 1.0);
    if (diag.renorm_defect > kMassDriftTol)
        throw ValidationError("transformed unqualified density drifts from unit mass");
    ScoreDistribution f0_hat = ScoreDistribution::empirical_renormalized(grid, vals);

    GroupModel believed(b.id(), b.n(), alpha_hat, b.qualified(), std::move(f0_hat));
    diag.mixture_defect = node_mixture_defect(b, believed, grid);
    Population biased(pop.a(), std::move(believed), pop.u_plus(), pop.u_minus());
    return {std::move(biased), pop, spec, diag};
}

BiasedPopulation apply_overestimate_a(const Population& pop, double beta) {
    const BiasSpec spec = BiasSpec::overestimate_a(beta);
    if (beta == 0.0) return {pop, pop, spec, {}};

    const GroupModel& a = pop.a();
    const double alpha_hat = (1.0 - beta) * a.alpha() + beta;
    if (!(alpha_hat > 0.0 && alpha_hat < 1.0))
        throw DegenerateProfile("believed qualification rate leaves (0, 1)");

    // Believed qualified density in mixture form,
    //   f1_hat = ((1 - beta) * gamma + beta) * f / alpha_hat,
    // finite where gamma = 0 and of unit mass by construction.
    const std::vector<double> grid = transform_grid(a.x_min(), a.x_max(), a.qualified());
    std::vector<double> vals(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        vals[i] = ((1.0 - beta) * a.gamma_clamped(grid[i]) + beta) * a.mixture_pdf(grid[i]) /
                  alpha_hat;

    BiasDiagnostics diag;
    diag.renorm_defect = std::abs(trapezoid(grid, vals) - 1.0);
    if (diag.renorm_defect > kMassDriftTol)
        throw ValidationError("transformed qualified density drifts from unit mass");
    ScoreDistribution f1_hat = ScoreDistribution::empirical_renormalized(grid, vals);

    GroupModel believed(a.id(), a.n(), alpha_hat, std::move(f1_hat), a.unqualified());
    diag.mixture_defect = node_mixture_defect(a, believed, grid);
    Population biased(std::move(believed), pop.b(), pop.u_plus(), pop.u_minus());
    return {std::move(biased), pop, spec, diag};
}

Population shift_population_scaled(const Population& pop, const ShiftSpec& shift,
                                   double scale, BiasDiagnostics* diag) {
    const GroupModel& b = pop.b();
    const auto shifted = [&](const ScoreDistribution& d) -> ScoreDistribution {
        if (d.kind() == DistKind::gaussian && shift.kind == ShiftSpec::Kind::constant)
            return ScoreDistribution::gaussian(d.mean() - scale * shift.epsilon, d.stddev());
        const std::vector<double> grid = transform_grid(d.x_min(), d.x_max(), d);
        std::vector<double> vals(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i)
            vals[i] = d.pdf(grid[i] + scale * shift.at(grid[i]));
        const double raw = trapezoid(grid, vals);
        if (!(raw > 0.0))
            throw ValidationError("shift pushes the whole class density outside the score range");
        if (diag) {
            diag->clipped_mass += std::max(0.0, 1.0 - raw);
            diag->renorm_defect = std::max(diag->renorm_defect, std::abs(raw - 1.0));
        }
        return ScoreDistribution::empirical_renormalized(grid, std::move(vals));
    };

    const bool do_q = shift.target != ShiftTarget::unqualified;
    const bool do_u = shift.target != ShiftTarget::qualified;
    ScoreDistribution q = do_q ? shifted(b.qualified()) : b.qualified();
    ScoreDistribution u = do_u ? shifted(b.unqualified()) : b.unqualified();
    GroupModel believed(b.id(), b.n(), b.alpha(), std::move(q), std::move(u));
    return Population(pop.a(), std::move(believed), pop.u_plus(), pop.u_minus());
}

BiasedPopulation apply_feature_shift_b(const Population& pop, const ShiftSpec& shift) {
    const BiasSpec spec = BiasSpec::feature_shift_b(shift);
    if (shift.is_zero()) return {pop, pop, spec, {}};

    BiasDiagnostics diag;
    Population biased = shift_population_scaled(pop, shift, 1.0, &diag);

    // How often the believed likelihood ratio stays at or below the true one
    // (informational; qualified-only downshifts push it down at high scores).
    const GroupModel& bt = pop.b();
    const GroupModel& bb = biased.b();
    int le = 0, finite = 0;
    for (int i = 0; i < kLrProbePoints; ++i) {
        const double x = bt.x_min() + (bt.x_max() - bt.x_min()) * i / (kLrProbePoints - 1);
        const double lt = bt.likelihood_ratio(x);
        const double lb = bb.likelihood_ratio(x);
        if (!std::isfinite(lt) || !std::isfinite(lb)) continue;
        ++finite;
        if (lb <= lt * (1.0 + 1e-9) + 1e-12) ++le;
    }
    diag.lr_le_true_fraction = finite > 0 ? static_cast<double>(le) / finite : 0.0;
    return {std::move(biased), pop, spec, diag};
}

BiasedPopulation apply_bias(const Population& pop, const BiasSpec& spec) {
    switch (spec.family) {
        case BiasFamily::underestimate_b: return apply_underestimate_b(pop, spec.beta);
        case BiasFamily::overestimate_a: return apply_overestimate_a(pop, spec.beta);
        case BiasFamily::feature_shift_b: return apply_feature_shift_b(pop, spec.shift);
    }
    throw ValidationError("unknown bias family");
}

std::vector<LabeledRecord> sample_dataset(const BiasedPopulation& bp, std::size_t n,
                                          std::uint64_t seed) {
    if (n < 1) throw ValidationError("sample_dataset needs n >= 1");
    std::mt19937_64 rng(seed);
    std::vector<LabeledRecord> out;
    out.reserve(n);
    const Population& truth = bp.truth;
    for (std::size_t k = 0; k < n; ++k) {
        // Fixed draw count per record keeps the stream alignment deterministic.
        const double u_group = unit_uniform(rng);
        const double u_label = unit_uniform(rng);
        const double u_score = unit_uniform(rng);
        const double u_flip = unit_uniform(rng);

        const GroupId g = u_group < truth.a().n() ? GroupId::a : GroupId::b;
        const GroupModel& tg = truth.group(g);
        const int y = u_label < tg.alpha() ? 1 : 0;
        double x;
        int label = y;
        if (bp.spec.family == BiasFamily::feature_shift_b) {
            const GroupModel& bg = bp.biased.group(g);
            x = (y ? bg.qualified() : bg.unqualified()).quantile(u_score);
        } else {
            x = (y ? tg.qualified() : tg.unqualified()).quantile(u_score);
            if (bp.spec.family == BiasFamily::underestimate_b && g == GroupId::b && y == 1 &&
                u_flip < 1.0 - bp.spec.beta)
                label = 0;
            if (bp.spec.family == BiasFamily::overestimate_a && g == GroupId::a && y == 0 &&
                u_flip < bp.spec.beta)
                label = 1;
        }
        out.push_back({g, x, label});
    }
    return out;
}

std::vector<LabeledRecord> sample_composed_flips(const Population& truth, double beta_b,
                                                 double beta_a, std::size_t n,
                                                 std::uint64_t seed) {
    if (!(beta_b > 0.0 && beta_b <= 1.0))
        throw ValidationError("composed flips need beta_b in (0, 1]");
    if (!(beta_a >= 0.0 && beta_a < 1.0))
        throw ValidationError("composed flips need beta_a in [0, 1)");
    if (n < 1) throw ValidationError("sample_composed_flips needs n >= 1");
    std::mt19937_64 rng(seed);
    std::vector<LabeledRecord> out;
    out.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double u_group = unit_uniform(rng);
        const double u_label = unit_uniform(rng);
        const double u_score = unit_uniform(rng);
        const double u_flip = unit_uniform(rng);

        const GroupId g = u_group < truth.a().n() ? GroupId::a : GroupId::b;
        const GroupModel& tg = truth.group(g);
        const int y = u_label < tg.alpha() ? 1 : 0;
        const double x = (y ? tg.qualified() : tg.unqualified()).quantile(u_score);
        int label = y;
        if (g == GroupId::b && y == 1 && u_flip < 1.0 - beta_b) label = 0;
        if (g == GroupId::a && y == 0 && u_flip < beta_a) label = 1;
        out.push_back({g, x, label});
    }
    return out;
}

} // namespace fairsweep
