#include <cmath>
#include <vector>

#include "doctest.h"
#include "fairsweep/distribution.hpp"
#include "fairsweep/errors.hpp"

using namespace fairsweep;

TEST_CASE("gaussian basics") {
    const ScoreDistribution d = ScoreDistribution::gaussian(70, 10);
    CHECK(d.cdf(70) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(d.tail(70) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(d.x_min() == doctest::Approx(70 - 80));
    CHECK(d.x_max() == doctest::Approx(70 + 80));
    CHECK(d.tail(d.x_min()) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(d.tail(d.x_max()) == doctest::Approx(0.0).epsilon(1e-9));
    // pdf peak value 1/(10 sqrt(2 pi))
    CHECK(d.pdf(70) == doctest::Approx(0.039894228040143).epsilon(1e-12));
    // analytic derivative: -(x-mean)/sd^2 * pdf
    CHECK(d.pdf_derivative(75) == doctest::Approx(-(5.0 / 100.0) * d.pdf(75)).epsilon(1e-9));
    CHECK(d.quantile(d.cdf(63.2)) == doctest::Approx(63.2).epsilon(1e-9));
}

TEST_CASE("gaussian cdf nondecreasing and tail nonincreasing") {
    const ScoreDistribution d = ScoreDistribution::gaussian(70, 10);
    double prev_cdf = -1.0, prev_tail = 2.0;
    for (double x = d.x_min(); x <= d.x_max(); x += 2.5) {
        const double c = d.cdf(x), t = d.tail(x);
        CHECK(c >= prev_cdf);
        CHECK(t <= prev_tail);
        CHECK(c + t == doctest::Approx(1.0).epsilon(1e-12));
        prev_cdf = c;
        prev_tail = t;
    }
}

TEST_CASE("empirical uniform tail and cdf endpoints") {
    std::vector<double> grid, dens;
    for (int i = 0; i <= 100; ++i) {
        grid.push_back(i / 100.0);
        dens.push_back(1.0);
    }
    const ScoreDistribution d = ScoreDistribution::empirical(grid, dens);
    CHECK(d.tail(0.25) == doctest::Approx(0.75).epsilon(1e-9));
    CHECK(d.cdf(d.x_min()) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(d.cdf(d.x_max()) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(d.quantile(0.4) == doctest::Approx(0.4).epsilon(1e-9));
    CHECK(trapezoid(d.grid(), d.density()) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("empirical construction validates") {
    CHECK_THROWS_AS(ScoreDistribution::empirical({1.0}, {1.0}), ValidationError);
    CHECK_THROWS_AS(ScoreDistribution::empirical({0.0, 0.0, 1.0}, {1.0, 1.0, 1.0}),
                    ValidationError);  // non-ascending grid
    CHECK_THROWS_AS(ScoreDistribution::empirical({0.0, 1.0}, {-0.5, 1.0}),
                    ValidationError);  // negative density
}

TEST_CASE("empirical_renormalized reports the raw integral") {
    std::vector<double> grid = {0.0, 0.5, 1.0};
    std::vector<double> dens = {2.0, 2.0, 2.0};  // integrates to 2
    double raw = 0.0;
    const ScoreDistribution d = ScoreDistribution::empirical_renormalized(grid, dens, &raw);
    CHECK(raw == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(trapezoid(d.grid(), d.density()) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("gridded empirical matches its gaussian source closely") {
    const ScoreDistribution g = ScoreDistribution::gaussian(70, 10);
    std::vector<double> grid, dens;
    const int n = 8000;
    for (int i = 0; i <= n; ++i) {
        const double x = g.x_min() + (g.x_max() - g.x_min()) * i / n;
        grid.push_back(x);
        dens.push_back(g.pdf(x));
    }
    const ScoreDistribution e = ScoreDistribution::empirical(grid, dens);
    for (double x : {40.0, 55.0, 70.0, 83.0, 110.0}) {
        CHECK(e.pdf(x) == doctest::Approx(g.pdf(x)).epsilon(1e-4));
        CHECK(e.tail(x) == doctest::Approx(g.tail(x)).epsilon(1e-6));
    }
}

TEST_CASE("smoothed_derivative tracks a smooth density's slope") {
    const ScoreDistribution g = ScoreDistribution::gaussian(70, 10);
    std::vector<double> grid, vals;
    const int n = 1000;
    for (int i = 0; i <= n; ++i) {
        const double x = 20.0 + 100.0 * i / n;
        grid.push_back(x);
        vals.push_back(g.pdf(x));
    }
    const std::vector<double> der = smoothed_derivative(grid, vals, 0.2);
    // compare at an interior sample
    const std::size_t k = 500;  // x = 70
    CHECK(der[k] == doctest::Approx(g.pdf_derivative(grid[k])).epsilon(1e-3));
}

TEST_CASE("normal helpers") {
    CHECK(normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(normal_cdf(normal_quantile(0.8413447460685429), 0.0, 1.0) ==
          doctest::Approx(0.8413447460685429).epsilon(1e-9));
    CHECK(normal_pdf(0.0, 0.0, 1.0) == doctest::Approx(0.3989422804014327).epsilon(1e-12));
    CHECK(normal_tail(1.0, 0.0, 1.0) ==
          doctest::Approx(1.0 - 0.8413447460685429).epsilon(1e-9));
}
