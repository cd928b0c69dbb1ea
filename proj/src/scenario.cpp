#include "fairsweep/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "fairsweep/errors.hpp"

namespace fairsweep {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (value.empty() || end != value.c_str() + value.size() || !std::isfinite(v))
        throw ValidationError("bad numeric value for " + key + ": '" + value + "'");
    return v;
}

long long parse_int(const std::string& key, const std::string& value) {
    const double v = parse_double(key, value);
    if (v != std::floor(v)) throw ValidationError(key + " must be an integer");
    return static_cast<long long>(v);
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "on" || value == "true" || value == "1") return true;
    if (value == "off" || value == "false" || value == "0") return false;
    throw ValidationError("bad boolean for " + key + ": '" + value + "' (use on/off)");
}

std::vector<double> parse_list(const std::string& key, const std::string& value) {
    std::vector<double> out;
    std::stringstream ss(value);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(parse_double(key, trim(tok)));
    if (out.empty()) throw ValidationError(key + " needs at least one value");
    return out;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

const char* solver_name(SolverPath p) {
    return p == SolverPath::rootfind ? "rootfind" : "grid";
}

}  // namespace

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open scenario file: " + path);

    Scenario s;
    bool specs_set = false;
    std::string shift_kind = "constant";
    std::string shift_target = "qualified";
    double shift_slope = 0.0, shift_x0 = 0.0;

    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ParseError("expected key = value", row, 1);
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key.empty()) throw ParseError("empty key", row, 1);

        if (key == "source") {
            if (value == "synthetic")
                s.source = SourceKind::synthetic;
            else if (value == "table")
                s.source = SourceKind::table;
            else if (value == "records")
                s.source = SourceKind::records;
            else
                throw ValidationError("source must be synthetic, table, or records");
        } else if (key == "n_a") {
            s.synthetic.n_a = parse_double(key, value);
        } else if (key == "alpha_a") {
            s.synthetic.alpha_a = parse_double(key, value);
        } else if (key == "alpha_b") {
            s.synthetic.alpha_b = parse_double(key, value);
        } else if (key == "qualified_mean") {
            s.synthetic.q_mean_a = s.synthetic.q_mean_b = parse_double(key, value);
        } else if (key == "qualified_std") {
            s.synthetic.q_std_a = s.synthetic.q_std_b = parse_double(key, value);
        } else if (key == "unqualified_mean") {
            s.synthetic.u_mean_a = s.synthetic.u_mean_b = parse_double(key, value);
        } else if (key == "unqualified_std") {
            s.synthetic.u_std_a = s.synthetic.u_std_b = parse_double(key, value);
        } else if (key == "qualified_mean_a") {
            s.synthetic.q_mean_a = parse_double(key, value);
        } else if (key == "qualified_std_a") {
            s.synthetic.q_std_a = parse_double(key, value);
        } else if (key == "unqualified_mean_a") {
            s.synthetic.u_mean_a = parse_double(key, value);
        } else if (key == "unqualified_std_a") {
            s.synthetic.u_std_a = parse_double(key, value);
        } else if (key == "qualified_mean_b") {
            s.synthetic.q_mean_b = parse_double(key, value);
        } else if (key == "qualified_std_b") {
            s.synthetic.q_std_b = parse_double(key, value);
        } else if (key == "unqualified_mean_b") {
            s.synthetic.u_mean_b = parse_double(key, value);
        } else if (key == "unqualified_std_b") {
            s.synthetic.u_std_b = parse_double(key, value);
        } else if (key == "table") {
            s.table_path = value;
        } else if (key == "records") {
            s.records_path = value;
        } else if (key == "bins") {
            s.bins = static_cast<int>(parse_int(key, value));
        } else if (key == "u_ratio") {
            s.u_ratio = parse_double(key, value);
            s.u_ratio_explicit = true;
        } else if (key == "specs") {
            s.specs.clear();
            std::stringstream ss(value);
            std::string tok;
            while (std::getline(ss, tok, ','))
                s.specs.push_back(criterion_from_name(trim(tok)));
            specs_set = true;
        } else if (key == "epsilon") {
            s.epsilon = parse_double(key, value);
        } else if (key == "bias_family") {
            if (value == "none")
                s.has_bias = false;
            else
                s.family = bias_family_from_name(value);
        } else if (key == "beta_grid" || key == "shift_grid") {
            s.levels = parse_list(key, value);
        } else if (key == "shift_kind") {
            shift_kind = value;
        } else if (key == "shift_target") {
            shift_target = value;
        } else if (key == "shift_slope") {
            shift_slope = parse_double(key, value);
        } else if (key == "shift_x0") {
            shift_x0 = parse_double(key, value);
        } else if (key == "results") {
            s.results_path = value;
        } else if (key == "contour") {
            s.contour_path = value;
            s.want_contour = true;
        } else if (key == "contour_points") {
            s.contour_points = static_cast<int>(parse_int(key, value));
        } else if (key == "sensitivity") {
            s.sensitivity_path = value;
            s.want_sensitivity = true;
        } else if (key == "fd_step") {
            s.fd_step = parse_double(key, value);
        } else if (key == "crossover") {
            s.crossover_path = value;
            s.want_crossover = true;
        } else if (key == "alpha_b_grid") {
            s.alpha_b_grid = parse_list(key, value);
        } else if (key == "oracle") {
            s.oracle = parse_bool(key, value);
        } else if (key == "grid_step") {
            s.grid_step = parse_double(key, value);
        } else if (key == "seed") {
            const long long v = parse_int(key, value);
            if (v < 0) throw ValidationError("seed must be nonnegative");
            s.seed = static_cast<std::uint64_t>(v);
        } else {
            throw ValidationError("unknown scenario key: " + key);
        }
    }
    if (specs_set && s.specs.empty())
        throw ValidationError("specs must name at least one criterion");

    const ShiftTarget target = shift_target_from_name(shift_target);
    if (shift_kind == "constant")
        s.shift = ShiftSpec::constant(1.0, target);
    else if (shift_kind == "affine")
        s.shift = ShiftSpec::affine(shift_slope, shift_x0, target);
    else
        throw ValidationError("shift_kind must be constant or affine");
    return s;
}

void finalize_scenario(Scenario* sp) {
    Scenario& s = *sp;
    if (s.source == SourceKind::table && s.table_path.empty())
        throw ValidationError("source = table needs a table path");
    if (s.source == SourceKind::records && s.records_path.empty())
        throw ValidationError("source = records needs a records path");
    if (s.bins != 0 && s.bins < 2) throw ValidationError("bins must be 0 (auto) or >= 2");
    if (s.source == SourceKind::synthetic) {
        const SyntheticParams& p = s.synthetic;
        if (!(p.n_a > 0.0 && p.n_a < 1.0))
            throw ValidationError("n_a must lie in (0, 1)");
        if (!(p.alpha_a > 0.0 && p.alpha_a < 1.0) || !(p.alpha_b > 0.0 && p.alpha_b < 1.0))
            throw ValidationError("alpha values must lie in (0, 1)");
        if (!(p.q_std_a > 0.0 && p.u_std_a > 0.0 && p.q_std_b > 0.0 && p.u_std_b > 0.0))
            throw ValidationError("standard deviations must be positive");
    }
    if (!(s.u_ratio > 0.0)) throw ValidationError("u_ratio must be positive");
    if (!(s.epsilon >= 0.0)) throw ValidationError("epsilon must be nonnegative");
    if (s.specs.empty()) throw ValidationError("at least one fairness spec is required");

    // Deduplicate specs, keep first occurrences, and guarantee the MU baseline.
    std::vector<Criterion> specs;
    for (Criterion c : s.specs)
        if (std::find(specs.begin(), specs.end(), c) == specs.end()) specs.push_back(c);
    if (std::find(specs.begin(), specs.end(), Criterion::MU) == specs.end())
        specs.insert(specs.begin(), Criterion::MU);
    s.specs = std::move(specs);

    if (!s.has_bias) {
        s.levels = {1.0};
    } else if (s.levels.empty()) {
        // Default sweeps go from no bias to heavy bias in 0.05 steps: beta
        // falls from 1 for underestimate_b, rises from 0 for overestimate_a.
        switch (s.family) {
            case BiasFamily::underestimate_b:
                for (int i = 0; i <= 10; ++i) s.levels.push_back((100 - 5 * i) / 100.0);
                break;
            case BiasFamily::overestimate_a:
                for (int i = 0; i <= 10; ++i) s.levels.push_back(5 * i / 100.0);
                break;
            case BiasFamily::feature_shift_b:
                throw ValidationError("feature_shift_b needs an explicit shift_grid");
        }
    }
    bool up = true, down = true;
    for (std::size_t i = 1; i < s.levels.size(); ++i) {
        up = up && s.levels[i] >= s.levels[i - 1];
        down = down && s.levels[i] <= s.levels[i - 1];
    }
    if (!up && !down)
        throw ValidationError("sweep grid must be monotone so emitted rows are ordered");
    for (double v : s.levels) {
        if (!s.has_bias) break;
        switch (s.family) {
            case BiasFamily::underestimate_b:
                if (!(v > 0.0 && v <= 1.0))
                    throw ValidationError("underestimate_b sweep values must lie in (0, 1]");
                break;
            case BiasFamily::overestimate_a:
                if (!(v >= 0.0 && v < 1.0))
                    throw ValidationError("overestimate_a sweep values must lie in [0, 1)");
                break;
            case BiasFamily::feature_shift_b:
                if (!(v >= 0.0))
                    throw ValidationError("shift_grid values must be nonnegative");
                if (s.shift.kind == ShiftSpec::Kind::affine && !(v * s.shift.slope < 1.0))
                    throw ValidationError("scaled affine shift slope must stay below 1");
                break;
        }
    }
    if (s.contour_points < 2) throw ValidationError("contour_points must be >= 2");
    if (!(s.fd_step > 0.0 && s.fd_step < 0.5))
        throw ValidationError("fd_step must lie in (0, 0.5)");
    if (s.grid_step < 0.0) throw ValidationError("grid_step must be nonnegative");
    if (s.want_crossover && s.alpha_b_grid.empty())
        throw ValidationError("crossover output needs an alpha_b_grid");
    if (!s.alpha_b_grid.empty()) {
        s.want_crossover = true;
        for (double v : s.alpha_b_grid)
            if (!(v > 0.0 && v < 1.0))
                throw ValidationError("alpha_b_grid values must lie in (0, 1)");
    }
}

namespace {

Population build_truth(const Scenario& s, std::vector<std::string>* warnings) {
    const auto mlr_note = [&](const MlrReport& r, const char* group) {
        if (!r.holds) {
            std::ostringstream os;
            os << "group " << group << " likelihood ratio is not monotone (worst near x = "
               << r.worst_x << ", drop " << r.max_drop << ")";
            warnings->push_back(os.str());
        }
    };
    switch (s.source) {
        case SourceKind::synthetic: {
            const SyntheticParams& p = s.synthetic;
            GroupModel a(GroupId::a, p.n_a, p.alpha_a,
                         ScoreDistribution::gaussian(p.q_mean_a, p.q_std_a),
                         ScoreDistribution::gaussian(p.u_mean_a, p.u_std_a));
            GroupModel b(GroupId::b, 1.0 - p.n_a, p.alpha_b,
                         ScoreDistribution::gaussian(p.q_mean_b, p.q_std_b),
                         ScoreDistribution::gaussian(p.u_mean_b, p.u_std_b));
            mlr_note(check_mlr(a), "a");
            mlr_note(check_mlr(b), "b");
            return Population(std::move(a), std::move(b), 1.0, s.u_ratio);
        }
        case SourceKind::table: {
            ProfileTable t = load_profile_table(s.table_path);
            double ratio = s.u_ratio;
            if (!s.u_ratio_explicit && t.u_minus_over_u_plus > 0.0)
                ratio = t.u_minus_over_u_plus;
            IngestResult ir = table_to_population(t, 1.0, ratio);
            warnings->insert(warnings->end(), ir.warnings.begin(), ir.warnings.end());
            mlr_note(ir.mlr_a, "a");
            mlr_note(ir.mlr_b, "b");
            return std::move(ir.population);
        }
        case SourceKind::records: {
            ScoredRecords rec = load_records(s.records_path);
            IngestResult ir = records_to_population(rec, s.bins, 1.0, s.u_ratio);
            warnings->insert(warnings->end(), ir.warnings.begin(), ir.warnings.end());
            mlr_note(ir.mlr_a, "a");
            mlr_note(ir.mlr_b, "b");
            return std::move(ir.population);
        }
    }
    throw ValidationError("unknown population source");
}

BiasedPopulation make_biased(const Population& truth, const Scenario& s, double level) {
    if (!s.has_bias) return {truth, truth, BiasSpec{}, {}};
    switch (s.family) {
        case BiasFamily::underestimate_b: return apply_underestimate_b(truth, level);
        case BiasFamily::overestimate_a: return apply_overestimate_a(truth, level);
        case BiasFamily::feature_shift_b:
            return apply_feature_shift_b(truth, scale_shift(s.shift, level));
    }
    throw ValidationError("unknown bias family");
}

}  // namespace

Population scenario_population(const Scenario& input, std::vector<std::string>* warnings) {
    Scenario s = input;
    finalize_scenario(&s);
    std::vector<std::string> local;
    Population pop = build_truth(s, warnings ? warnings : &local);
    return pop;
}

ShiftSpec scale_shift(const ShiftSpec& base, double scale) {
    if (!(scale >= 0.0)) throw ValidationError("shift scale must be nonnegative");
    switch (base.kind) {
        case ShiftSpec::Kind::constant:
            return ShiftSpec::constant(base.epsilon * scale, base.target);
        case ShiftSpec::Kind::affine:
            return ShiftSpec::affine(base.slope * scale, base.x0, base.target);
        case ShiftSpec::Kind::tabulated: {
            std::vector<double> scaled = base.values;
            for (double& v : scaled) v *= scale;
            return ShiftSpec::tabulated(base.grid, std::move(scaled), base.target);
        }
    }
    throw ValidationError("unknown shift kind");
}

ScenarioOutcome run_scenario(const Scenario& input) {
    Scenario s = input;
    finalize_scenario(&s);
    std::vector<std::string> warnings;
    Population truth = build_truth(s, &warnings);

    SweepResult sw;
    sw.family = s.family;
    sw.has_bias = s.has_bias;
    sw.epsilon = s.epsilon;
    sw.specs = s.specs;
    sw.levels = s.levels;

    for (Criterion c : s.specs) {
        for (double level : s.levels) {
            SweepCell cell;
            cell.criterion = c;
            cell.level = level;
            try {
                const BiasedPopulation bp = make_biased(truth, s, level);
                const FairnessSpec fs{c, c == Criterion::MU ? 0.0 : s.epsilon};
                cell.trained = solve_fair(bp.biased, fs, 0.0);
                cell.on_truth = evaluate_policy(truth, cell.trained);
                cell.on_biased = evaluate_policy(bp.biased, cell.trained);
                cell.solved = true;
                if (s.oracle) {
                    const double step =
                        s.grid_step > 0.0
                            ? s.grid_step
                            : (bp.biased.x_max() - bp.biased.x_min()) / 400.0;
                    const GridOracleResult g = grid_oracle(bp.biased, fs, step);
                    cell.oracle = g.pair;
                    cell.oracle_resolution = g.resolution;
                    cell.oracle_checked = true;
                }
            } catch (const Error& e) {
                cell.error = e.what();
            }
            sw.cells.push_back(std::move(cell));
        }
    }
    return {std::move(sw), std::move(truth), std::move(warnings)};
}

double fit_violation_trend(const SweepResult& sr, Criterion criterion) {
    std::vector<double> x, y;
    for (const SweepCell& cell : sr.cells) {
        if (cell.criterion != criterion || !cell.solved) continue;
        double level = cell.level;
        if (!sr.has_bias)
            level = 0.0;
        else if (sr.family != BiasFamily::feature_shift_b)
            level = 1.0 - level;  // label families: bias level is 1 - beta
        x.push_back(level);
        y.push_back(cell.on_truth.gap(criterion));
    }
    if (x.size() < 3)
        throw ValidationError("trend fit needs at least 3 solved sweep points");
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (!(sxx > 0.0)) throw ValidationError("trend fit needs varying bias levels");
    return sxy / sxx;
}

void write_results_csv(const SweepResult& sr, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write results file: " + path);
    const bool oracle = std::any_of(sr.cells.begin(), sr.cells.end(),
                                    [](const SweepCell& c) { return c.oracle_checked; });
    out << "spec,beta,theta_a,theta_b,sel_a,sel_b,gap_dp,gap_tpr,gap_fpr,"
           "util_a,util_b,util_total,solver,residual";
    if (oracle) out << ",oracle_theta_a,oracle_theta_b,oracle_resolution";
    out << "\n";
    const double nan = std::nan("");
    for (const SweepCell& c : sr.cells) {
        out << criterion_name(c.criterion) << ',' << fmt(c.level) << ',';
        if (c.solved) {
            out << fmt(c.trained.theta_a) << ',' << fmt(c.trained.theta_b) << ','
                << fmt(c.on_truth.a.selection_rate) << ',' << fmt(c.on_truth.b.selection_rate)
                << ',' << fmt(c.on_truth.gap_dp) << ',' << fmt(c.on_truth.gap_tpr) << ','
                << fmt(c.on_truth.gap_fpr) << ',' << fmt(c.on_truth.a.utility) << ','
                << fmt(c.on_truth.b.utility) << ',' << fmt(c.on_truth.total_utility) << ','
                << solver_name(c.trained.solver) << ','
                << fmt(c.trained.stationarity_residual);
        } else {
            for (int i = 0; i < 10; ++i) out << fmt(nan) << ',';
            out << "error," << fmt(nan);
        }
        if (oracle) {
            if (c.oracle_checked)
                out << ',' << fmt(c.oracle.theta_a) << ',' << fmt(c.oracle.theta_b) << ','
                    << fmt(c.oracle_resolution);
            else
                out << ',' << fmt(nan) << ',' << fmt(nan) << ',' << fmt(nan);
        }
        out << "\n";
    }
    if (!out.good()) throw IoError("failed while writing results file: " + path);
}

void write_contour_csv(const Population& truth, int n_points, double epsilon,
                       const std::string& path) {
    const ContourResult c = utility_contour(truth, n_points, epsilon);
    std::ofstream out(path);
    if (!out) throw IoError("cannot write contour file: " + path);
    out << "s_a,s_b,utility,dp_ok,tpr_ok,fpr_ok,eo_ok\n";
    std::size_t idp = 0, itpr = 0, ifpr = 0, ieo = 0;
    const auto take = [](const std::vector<std::pair<double, double>>& locus,
                         std::size_t* idx, double sa, double sb) {
        if (*idx < locus.size() && locus[*idx].first == sa && locus[*idx].second == sb) {
            ++*idx;
            return 1;
        }
        return 0;
    };
    const int n = static_cast<int>(c.rates.size());
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double sa = c.rates[i], sb = c.rates[j];
            out << fmt(sa) << ',' << fmt(sb) << ',' << fmt(c.utility[i][j]) << ','
                << take(c.dp_locus, &idp, sa, sb) << ',' << take(c.tpr_locus, &itpr, sa, sb)
                << ',' << take(c.fpr_locus, &ifpr, sa, sb) << ','
                << take(c.eo_locus, &ieo, sa, sb) << "\n";
        }
    }
    if (!out.good()) throw IoError("failed while writing contour file: " + path);
}

void write_sensitivity_csv(const std::vector<SensitivityReport>& reports,
                           const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write sensitivity file: " + path);
    out << "criterion,d_theta_b,d_theta_a,fd_theta_b,fd_theta_a,rel_err_b,rel_err_a\n";
    for (const SensitivityReport& r : reports) {
        out << criterion_name(r.criterion) << ',' << fmt(r.d_theta_b_d_beta) << ','
            << fmt(r.d_theta_a_d_beta) << ',' << fmt(r.fd_theta_b) << ','
            << fmt(r.fd_theta_a) << ',' << fmt(r.rel_err_b) << ',' << fmt(r.rel_err_a)
            << "\n";
    }
    if (!out.good()) throw IoError("failed while writing sensitivity file: " + path);
}

void write_crossover_csv(const CrossoverReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write crossover file: " + path);
    out << "alpha_b,abs_tpr_rate,abs_dp_rate\n";
    for (const CrossoverRow& r : report.rows)
        out << fmt(r.alpha_b) << ',' << fmt(r.tpr_abs) << ',' << fmt(r.dp_abs) << "\n";
    if (!out.good()) throw IoError("failed while writing crossover file: " + path);
}

} // namespace fairsweep
