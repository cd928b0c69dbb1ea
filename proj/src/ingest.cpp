#include "fairsweep/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "fairsweep/distribution.hpp"
#include "fairsweep/errors.hpp"

namespace fairsweep {

namespace {

constexpr int kMaxAutoBins = 200;
constexpr double kDensityDriftWarn = 1e-3;

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) out.push_back(trim(field));
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

double parse_number(const std::string& tok, std::size_t row, std::size_t col) {
    const std::string t = trim(tok);
    if (t.empty()) throw ParseError("empty numeric field", row, col);
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size() || !std::isfinite(v))
        throw ParseError("not a finite number: '" + t + "'", row, col);
    return v;
}

// `# key = value` comment line; returns false for plain comments.
bool parse_metadata(const std::string& line, std::string* key, double* value) {
    std::string body = trim(line.substr(1));
    const std::size_t eq = body.find('=');
    if (eq == std::string::npos) return false;
    *key = trim(body.substr(0, eq));
    const std::string val = trim(body.substr(eq + 1));
    char* end = nullptr;
    *value = std::strtod(val.c_str(), &end);
    if (key->empty() || val.empty() || end != val.c_str() + val.size()) return false;
    return true;
}

void check_probability(double v, const char* name, std::size_t row, std::size_t col) {
    if (!(v >= 0.0 && v <= 1.0)) {
        std::ostringstream os;
        os << name << " out of [0, 1] at row " << row << ", column " << col << ": " << v;
        throw ValidationError(os.str());
    }
}

void renormalize_density(std::vector<double>* density, const std::vector<double>& grid,
                         const char* name, std::vector<std::string>* warnings) {
    const double mass = trapezoid(grid, *density);
    if (!(mass > 0.0))
        throw ValidationError(std::string(name) + " has no positive mass");
    if (std::abs(mass - 1.0) > kDensityDriftWarn) {
        std::ostringstream os;
        os << name << " integrates to " << mass << "; renormalized";
        warnings->push_back(os.str());
    }
    for (double& v : *density) v /= mass;
}

}  // namespace

ProfileTable load_profile_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open profile table: " + path);

    ProfileTable t;
    bool have_na = false, have_nb = false;
    bool header_seen = false;
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        const std::string s = trim(line);
        if (s.empty()) continue;
        if (s[0] == '#') {
            std::string key;
            double value = 0.0;
            if (!parse_metadata(s, &key, &value)) continue;
            if (key == "n_a") {
                t.n_a = value;
                have_na = true;
            } else if (key == "n_b") {
                t.n_b = value;
                have_nb = true;
            } else if (key == "u_minus_over_u_plus") {
                t.u_minus_over_u_plus = value;
            } else {
                t.warnings.push_back("ignored metadata key: " + key);
            }
            continue;
        }
        if (!header_seen) {
            const std::vector<std::string> h = split_csv(s);
            const std::vector<std::string> want = {"score", "gamma_a", "gamma_b",
                                                   "density_a", "density_b"};
            if (h.size() != want.size())
                throw ParseError("expected header score,gamma_a,gamma_b,density_a,density_b",
                                 row, 1);
            for (std::size_t i = 0; i < want.size(); ++i)
                if (h[i] != want[i])
                    throw ParseError("unexpected header field '" + h[i] + "', wanted '" +
                                         want[i] + "'",
                                     row, i + 1);
            header_seen = true;
            continue;
        }
        const std::vector<std::string> f = split_csv(s);
        if (f.size() != 5)
            throw ParseError("expected 5 fields, found " + std::to_string(f.size()), row, 1);
        const double score = parse_number(f[0], row, 1);
        const double ga = parse_number(f[1], row, 2);
        const double gb = parse_number(f[2], row, 3);
        const double da = parse_number(f[3], row, 4);
        const double db = parse_number(f[4], row, 5);
        if (!t.score.empty() && !(score > t.score.back())) {
            std::ostringstream os;
            os << "score grid must be strictly ascending at row " << row << ": " << score;
            throw ValidationError(os.str());
        }
        check_probability(ga, "gamma_a", row, 2);
        check_probability(gb, "gamma_b", row, 3);
        if (!(da >= 0.0)) {
            std::ostringstream os;
            os << "density_a negative at row " << row << ", column 4: " << da;
            throw ValidationError(os.str());
        }
        if (!(db >= 0.0)) {
            std::ostringstream os;
            os << "density_b negative at row " << row << ", column 5: " << db;
            throw ValidationError(os.str());
        }
        t.score.push_back(score);
        t.gamma_a.push_back(ga);
        t.gamma_b.push_back(gb);
        t.density_a.push_back(da);
        t.density_b.push_back(db);
    }
    if (!header_seen) throw ParseError("missing header line", row, 1);
    if (t.score.size() < 2) throw ValidationError("profile table needs at least 2 rows");

    if (have_na && have_nb) {
        if (std::abs(t.n_a + t.n_b - 1.0) > 1e-6)
            throw ValidationError("group fractions n_a + n_b must sum to 1");
    } else if (have_na) {
        t.n_b = 1.0 - t.n_a;
    } else if (have_nb) {
        t.n_a = 1.0 - t.n_b;
    } else {
        t.warnings.push_back("no group fractions in metadata; defaulting to n_a = n_b = 0.5");
    }
    if (!(t.n_a > 0.0 && t.n_a < 1.0 && t.n_b > 0.0 && t.n_b < 1.0))
        throw ValidationError("group fractions must lie in (0, 1)");
    if (t.u_minus_over_u_plus < 0.0)
        throw ValidationError("u_minus_over_u_plus must be nonnegative");

    renormalize_density(&t.density_a, t.score, "density_a", &t.warnings);
    renormalize_density(&t.density_b, t.score, "density_b", &t.warnings);
    return t;
}

IngestResult table_to_population(const ProfileTable& t, double u_plus, double u_minus) {
    std::vector<std::string> warnings = t.warnings;
    GroupModel a = group_from_profile(GroupId::a, t.n_a, t.score, t.gamma_a, t.density_a,
                                      std::nullopt, &warnings);
    GroupModel b = group_from_profile(GroupId::b, t.n_b, t.score, t.gamma_b, t.density_b,
                                      std::nullopt, &warnings);
    MlrReport ma = check_mlr(a);
    MlrReport mb = check_mlr(b);
    Population pop(std::move(a), std::move(b), u_plus, u_minus);
    return {std::move(pop), ma, mb, std::move(warnings)};
}

ScoredRecords load_records(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open records file: " + path);
    ScoredRecords out;
    std::string line;
    std::size_t row = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++row;
        const std::string s = trim(line);
        if (s.empty() || s[0] == '#') continue;
        const std::vector<std::string> f = split_csv(s);
        if (!header_seen) {
            if (f.size() != 3 || f[0] != "group" || f[1] != "score" || f[2] != "label")
                throw ParseError("expected header group,score,label", row, 1);
            header_seen = true;
            continue;
        }
        if (f.size() != 3)
            throw ParseError("expected 3 fields, found " + std::to_string(f.size()), row, 1);
        GroupId g;
        if (f[0] == "a")
            g = GroupId::a;
        else if (f[0] == "b")
            g = GroupId::b;
        else
            throw ParseError("group must be 'a' or 'b', got '" + f[0] + "'", row, 1);
        const double score = parse_number(f[1], row, 2);
        const double label_raw = parse_number(f[2], row, 3);
        if (label_raw != 0.0 && label_raw != 1.0) {
            std::ostringstream os;
            os << "label must be 0 or 1 at row " << row << ", column 3: " << label_raw;
            throw ValidationError(os.str());
        }
        out.push_back({g, score, static_cast<int>(label_raw)});
    }
    if (!header_seen) throw ParseError("missing header line", row, 1);
    return out;
}

namespace {

// Freedman-Diaconis bin count over one histogram cell, capped and floored.
int auto_bins(std::vector<double> scores) {
    std::sort(scores.begin(), scores.end());
    const std::size_t n = scores.size();
    const auto quantile = [&](double p) {
        const double pos = p * static_cast<double>(n - 1);
        const std::size_t i = static_cast<std::size_t>(pos);
        const double frac = pos - static_cast<double>(i);
        return i + 1 < n ? scores[i] + frac * (scores[i + 1] - scores[i]) : scores[i];
    };
    const double iqr = quantile(0.75) - quantile(0.25);
    const double range = scores.back() - scores.front();
    double width = 2.0 * iqr / std::cbrt(static_cast<double>(n));
    if (!(width > 0.0)) width = range / std::sqrt(static_cast<double>(n));
    int bins = static_cast<int>(std::ceil(range / width));
    return std::clamp(bins, 2, kMaxAutoBins);
}

ScoreDistribution cell_histogram(const std::vector<double>& scores, int bins,
                                 const char* cell_name) {
    if (scores.size() < 2)
        throw InsufficientData(std::string("cell ") + cell_name + " has fewer than 2 rows");
    const auto [mn, mx] = std::minmax_element(scores.begin(), scores.end());
    if (!(*mx > *mn))
        throw InsufficientData(std::string("cell ") + cell_name +
                               " needs at least 2 distinct scores");
    const int k = bins > 0 ? bins : auto_bins(scores);
    const double lo = *mn, hi = *mx;
    const double width = (hi - lo) / k;
    std::vector<double> counts(k, 0.0);
    for (double x : scores) {
        int idx = static_cast<int>((x - lo) / width);
        idx = std::clamp(idx, 0, k - 1);
        counts[idx] += 1.0;
    }
    std::vector<double> grid(k), density(k);
    const double n = static_cast<double>(scores.size());
    for (int i = 0; i < k; ++i) {
        grid[i] = lo + (i + 0.5) * width;
        density[i] = counts[i] / (n * width);
    }
    return ScoreDistribution::empirical_renormalized(std::move(grid), std::move(density));
}

}  // namespace

IngestResult records_to_population(const ScoredRecords& r, int bins, double u_plus,
                                   double u_minus) {
    if (bins != 0 && bins < 2) throw ValidationError("bins must be 0 (auto) or >= 2");
    std::vector<double> cell[2][2];  // [group][label]
    std::size_t count[2] = {0, 0};
    std::size_t qualified[2] = {0, 0};
    for (const LabeledRecord& rec : r) {
        const int g = rec.group == GroupId::a ? 0 : 1;
        cell[g][rec.label].push_back(rec.score);
        ++count[g];
        qualified[g] += static_cast<std::size_t>(rec.label);
    }
    if (count[0] == 0 || count[1] == 0)
        throw InsufficientData("both groups need at least one record");

    const double total = static_cast<double>(r.size());
    const char* names[2][2] = {{"(a, label 0)", "(a, label 1)"},
                               {"(b, label 0)", "(b, label 1)"}};
    GroupModel a(GroupId::a, count[0] / total,
                 static_cast<double>(qualified[0]) / count[0],
                 cell_histogram(cell[0][1], bins, names[0][1]),
                 cell_histogram(cell[0][0], bins, names[0][0]));
    GroupModel b(GroupId::b, count[1] / total,
                 static_cast<double>(qualified[1]) / count[1],
                 cell_histogram(cell[1][1], bins, names[1][1]),
                 cell_histogram(cell[1][0], bins, names[1][0]));
    MlrReport ma = check_mlr(a);
    MlrReport mb = check_mlr(b);
    Population pop(std::move(a), std::move(b), u_plus, u_minus);
    return {std::move(pop), ma, mb, {}};
}

} // namespace fairsweep
