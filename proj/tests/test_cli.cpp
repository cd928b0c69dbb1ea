#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "test_helpers.hpp"

namespace {

int run_cli(const std::string& args, const std::string& capture = "/dev/null") {
    const std::string cmd =
        std::string(TEST_CLI_PATH) + " " + args + " > " + capture + " 2>&1";
    const int rc = std::system(cmd.c_str());
    REQUIRE(rc != -1);
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -2;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

const std::string kLabelCfg = std::string(TEST_SCENARIO_DIR) + "/synthetic_label.cfg";

}  // namespace

TEST_CASE("cli validate accepts the shipped scenarios") {
    CHECK(run_cli("validate " + kLabelCfg, "tmp_cli_validate.txt") == 0);
    CHECK(slurp("tmp_cli_validate.txt").find("scenario OK") != std::string::npos);
    for (const char* name :
         {"synthetic_over_a.cfg", "fico.cfg", "feature_shift.cfg", "crossover.cfg"}) {
        const std::string cfg = std::string(TEST_SCENARIO_DIR) + "/" + name;
        CHECK(run_cli("validate " + cfg) == 0);
    }
}

TEST_CASE("cli run writes a results file") {
    CHECK(run_cli("run " + kLabelCfg + " --out-dir tmp_cli_run") == 0);
    CHECK(std::filesystem::exists("tmp_cli_run/results.csv"));
    const std::string text = slurp("tmp_cli_run/results.csv");
    CHECK(text.rfind("spec,beta,", 0) == 0);
    // 5 specs x 11 default sweep levels plus the header
    std::size_t lines = 0;
    for (char c : text) lines += c == '\n';
    CHECK(lines == 1 + 5 * 11);
}

TEST_CASE("cli run is deterministic at the byte level") {
    const std::string cfg = testkit::write_temp_file(
        "cli_small.cfg", "specs = mu, dp, fpr\nbeta_grid = 1.0, 0.9\nepsilon = 0.01\n");
    CHECK(run_cli("run " + cfg + " --out-dir tmp_cli_det1") == 0);
    CHECK(run_cli("run " + cfg + " --out-dir tmp_cli_det2") == 0);
    CHECK(slurp("tmp_cli_det1/results.csv") == slurp("tmp_cli_det2/results.csv"));
}

TEST_CASE("cli sensitivity writes rate and comparison files") {
    const std::string cfg = std::string(TEST_SCENARIO_DIR) + "/crossover.cfg";
    CHECK(run_cli("sensitivity " + cfg + " --out-dir tmp_cli_sens") == 0);
    const std::string sens = slurp("tmp_cli_sens/sensitivity.csv");
    CHECK(sens.rfind("criterion,d_theta_b,d_theta_a,", 0) == 0);
    CHECK(slurp("tmp_cli_sens/crossover.csv").rfind("alpha_b,", 0) == 0);
}

TEST_CASE("cli contour writes the feasibility grid") {
    CHECK(run_cli("contour " + kLabelCfg + " --out-dir tmp_cli_contour") == 0);
    CHECK(slurp("tmp_cli_contour/contour.csv").rfind("s_a,s_b,utility,", 0) == 0);
}

TEST_CASE("cli failure modes map to distinct exit codes") {
    SUBCASE("invalid scenario key") {
        const std::string cfg = testkit::write_temp_file("cli_bad.cfg", "frob = 1\n");
        CHECK(run_cli("validate " + cfg) == 2);
    }
    SUBCASE("missing scenario file") {
        CHECK(run_cli("run no_such_scenario.cfg") == 4);
    }
    SUBCASE("blocked results path") {
        const std::string cfg = testkit::write_temp_file(
            "cli_tiny.cfg", "specs = mu\nbias_family = none\n");
        std::filesystem::create_directories("tmp_cli_block/results.csv");
        CHECK(run_cli("run " + cfg + " --out-dir tmp_cli_block") == 4);
    }
    SUBCASE("unusable output directory") {
        testkit::write_temp_file("cli_blockfile", "x");
        const std::string cfg = testkit::write_temp_file(
            "cli_tiny2.cfg", "specs = mu\nbias_family = none\n");
        CHECK(run_cli("run " + cfg + " --out-dir tmp_cli_blockfile/x") == 4);
    }
}
