// Command-line front end: loads a declarative scenario file, runs bias sweeps
// or standalone analyses, and writes CSV outputs.
//
// Verbs:
//   run <scenario>          bias sweep over all requested fairness specs
//   contour <scenario>      utility surface over selection-rate pairs
//   sensitivity <scenario>  threshold derivatives wrt bias level (+ crossover)
//   validate <scenario>     parse, finalize, and build the population only
//
// Exit codes: 0 success, 2 invalid scenario or input data, 3 no sweep cell
// solvable (or sensitivity solver unavailable), 4 output I/O failure,
// 1 unexpected error.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fairsweep/errors.hpp"
#include "fairsweep/scenario.hpp"

namespace {

struct CliOptions {
    std::string scenario_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
    bool oracle = false;
    double grid_step = -1.0;
};

void add_common(CLI::App* sub, CliOptions* o) {
    sub->add_option("scenario", o->scenario_path, "Scenario file (key = value lines)")
        ->required();
    sub->add_option("--out-dir", o->out_dir,
                    "Directory that relative output paths are placed under");
    sub->add_option("--seed", o->seed, "Override the scenario seed")
        ->each([o](const std::string&) { o->seed_set = true; });
    sub->add_flag("--oracle", o->oracle,
                  "Cross-check every solved cell against the exhaustive lattice solver");
    sub->add_option("--grid-step", o->grid_step,
                    "Lattice step for the oracle cross-check (default: range / 400)");
}

std::string resolve(const std::string& out_dir, const std::string& path) {
    if (out_dir.empty() || path.empty() || path.front() == '/') return path;
    return out_dir + "/" + path;
}

// Input files named by a scenario are looked up next to the scenario file,
// so runs do not depend on the current directory.
std::string anchor_to_scenario(const std::string& scenario_path, const std::string& path) {
    if (path.empty() || std::filesystem::path(path).is_absolute()) return path;
    return (std::filesystem::path(scenario_path).parent_path() / path).string();
}

fairsweep::Scenario load(const CliOptions& o) {
    fairsweep::Scenario s = fairsweep::load_scenario(o.scenario_path);
    s.table_path = anchor_to_scenario(o.scenario_path, s.table_path);
    s.records_path = anchor_to_scenario(o.scenario_path, s.records_path);
    if (o.seed_set) s.seed = o.seed;
    if (o.oracle) s.oracle = true;
    if (o.grid_step >= 0.0) s.grid_step = o.grid_step;
    if (!o.out_dir.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(o.out_dir, ec);
        if (ec)
            throw fairsweep::IoError("cannot create output directory " + o.out_dir + ": " +
                                     ec.message());
        s.results_path = resolve(o.out_dir, s.results_path);
        s.contour_path = resolve(o.out_dir, s.contour_path);
        s.sensitivity_path = resolve(o.out_dir, s.sensitivity_path);
        s.crossover_path = resolve(o.out_dir, s.crossover_path);
    }
    return s;
}

void print_warnings(const std::vector<std::string>& warnings) {
    for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";
}

int cmd_validate(const CliOptions& o) {
    fairsweep::Scenario s = load(o);
    fairsweep::finalize_scenario(&s);
    std::vector<std::string> warnings;
    (void)fairsweep::scenario_population(s, &warnings);
    print_warnings(warnings);
    std::cout << "scenario OK: " << o.scenario_path << "\n";
    return 0;
}

int cmd_run(const CliOptions& o) {
    fairsweep::Scenario s = load(o);
    fairsweep::finalize_scenario(&s);
    const fairsweep::ScenarioOutcome outcome = fairsweep::run_scenario(s);
    print_warnings(outcome.warnings);

    std::size_t solved = 0;
    for (const fairsweep::SweepCell& c : outcome.sweep.cells) {
        if (c.solved) {
            ++solved;
        } else {
            std::cerr << "cell error [" << fairsweep::criterion_name(c.criterion) << ", "
                      << c.level << "]: " << c.error << "\n";
        }
    }

    fairsweep::write_results_csv(outcome.sweep, s.results_path);
    std::cout << "wrote " << s.results_path << " (" << solved << "/"
              << outcome.sweep.cells.size() << " cells solved)\n";
    if (s.want_contour) {
        fairsweep::write_contour_csv(outcome.truth, s.contour_points, s.epsilon,
                                     s.contour_path);
        std::cout << "wrote " << s.contour_path << "\n";
    }
    for (fairsweep::Criterion c : outcome.sweep.specs) {
        try {
            const double slope = fairsweep::fit_violation_trend(outcome.sweep, c);
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.6g", slope);
            std::cout << "trend " << fairsweep::criterion_name(c)
                      << ": gap slope vs bias level = " << buf << "\n";
        } catch (const fairsweep::ValidationError&) {
            // fewer than 3 solved points, or a single bias level: no trend
        }
    }
    if (!outcome.sweep.cells.empty() && solved == 0) {
        std::cerr << "no sweep cell could be solved\n";
        return 3;
    }
    return 0;
}

int cmd_contour(const CliOptions& o) {
    fairsweep::Scenario s = load(o);
    fairsweep::finalize_scenario(&s);
    std::vector<std::string> warnings;
    const fairsweep::Population truth = fairsweep::scenario_population(s, &warnings);
    print_warnings(warnings);
    fairsweep::write_contour_csv(truth, s.contour_points, s.epsilon, s.contour_path);
    std::cout << "wrote " << s.contour_path << "\n";
    return 0;
}

int cmd_sensitivity(const CliOptions& o) {
    fairsweep::Scenario s = load(o);
    fairsweep::finalize_scenario(&s);
    std::vector<std::string> warnings;
    const fairsweep::Population truth = fairsweep::scenario_population(s, &warnings);
    print_warnings(warnings);

    std::vector<fairsweep::SensitivityReport> reports;
    if (s.has_bias && s.family == fairsweep::BiasFamily::feature_shift_b) {
        // Feature-measurement rates, per unit of the configured shift profile.
        reports.push_back(fairsweep::sensitivity_feature_bias(
            truth, fairsweep::Criterion::TPR, s.shift, s.fd_step));
        reports.push_back(fairsweep::sensitivity_feature_bias(
            truth, fairsweep::Criterion::FPR, s.shift, s.fd_step));
    } else {
        reports.push_back(
            fairsweep::sensitivity_label_bias(truth, fairsweep::Criterion::DP, s.fd_step));
        reports.push_back(
            fairsweep::sensitivity_label_bias(truth, fairsweep::Criterion::TPR, s.fd_step));
    }
    fairsweep::write_sensitivity_csv(reports, s.sensitivity_path);
    std::cout << "wrote " << s.sensitivity_path << "\n";
    for (const fairsweep::SensitivityReport& r : reports) {
        std::printf("%s: d theta_b = %.6g (fd %.6g), d theta_a = %.6g (fd %.6g)\n",
                    fairsweep::criterion_name(r.criterion), r.d_theta_b_d_beta,
                    r.fd_theta_b, r.d_theta_a_d_beta, r.fd_theta_a);
    }

    if (s.want_crossover) {
        const fairsweep::CrossoverReport rep =
            fairsweep::compare_dp_tpr(truth, s.alpha_b_grid);
        fairsweep::write_crossover_csv(rep, s.crossover_path);
        std::cout << "wrote " << s.crossover_path << "\n";
        if (rep.prefix_nonempty)
            std::printf("TPR moves less than DP for alpha_b up to %.6g\n", rep.alpha_bar);
        else
            std::cout << "TPR moves less than DP nowhere on the given alpha_b grid\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Threshold fairness policies under statistically biased training data"};
    app.require_subcommand(1);
    CliOptions o;
    CLI::App* run = app.add_subcommand("run", "Run the bias sweep and emit result tables");
    CLI::App* contour =
        app.add_subcommand("contour", "Emit the utility surface over selection-rate pairs");
    CLI::App* sens = app.add_subcommand(
        "sensitivity", "Emit threshold sensitivities to bias (and the DP/TPR crossover)");
    CLI::App* validate =
        app.add_subcommand("validate", "Check the scenario file and its data sources");
    for (CLI::App* sub : {run, contour, sens, validate}) add_common(sub, &o);

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(o);
        if (contour->parsed()) return cmd_contour(o);
        if (sens->parsed()) return cmd_sensitivity(o);
        if (validate->parsed()) return cmd_validate(o);
        std::cerr << "no command given\n";
        return 1;
    } catch (const fairsweep::IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 4;
    } catch (const fairsweep::SolverUnavailable& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return 3;
    } catch (const fairsweep::InfeasibleConstraint& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return 3;
    } catch (const fairsweep::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 1;
    }
}
