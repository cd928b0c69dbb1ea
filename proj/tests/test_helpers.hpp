#pragma once

// Shared fixtures for the test suites. The reference constants pinned in the
// suites were produced by scripts/oracle_values.py (plain normal-CDF
// arithmetic + bisection, independent of the library).

#include <cstdio>
#include <fstream>
#include <string>

#include "fairsweep/population.hpp"

namespace testkit {

// Two-group setup used throughout: n_a=0.8, n_b=0.2, alpha_a=0.8,
// alpha_b=0.3, qualified N(70,10), unqualified N(50,10), u_-/u_+ = 10.
inline fairsweep::Population synthetic_population() {
    using namespace fairsweep;
    GroupModel a(GroupId::a, 0.8, 0.8, ScoreDistribution::gaussian(70, 10),
                 ScoreDistribution::gaussian(50, 10));
    GroupModel b(GroupId::b, 0.2, 0.3, ScoreDistribution::gaussian(70, 10),
                 ScoreDistribution::gaussian(50, 10));
    return Population(std::move(a), std::move(b), 1.0, 10.0);
}

// Fully symmetric groups (equal shares, equal alpha, same distributions).
inline fairsweep::Population identical_population(double alpha = 0.3,
                                                  double u_minus = 10.0) {
    using namespace fairsweep;
    GroupModel a(GroupId::a, 0.5, alpha, ScoreDistribution::gaussian(70, 10),
                 ScoreDistribution::gaussian(50, 10));
    GroupModel b(GroupId::b, 0.5, alpha, ScoreDistribution::gaussian(70, 10),
                 ScoreDistribution::gaussian(50, 10));
    return Population(std::move(a), std::move(b), 1.0, u_minus);
}

inline std::string write_temp_file(const std::string& name, const std::string& body) {
    const std::string path = "tmp_" + name;
    std::ofstream out(path);
    out << body;
    return path;
}

}  // namespace testkit
