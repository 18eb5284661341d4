#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "drcirp/ambiguity.hpp"
#include "drcirp/lp.hpp"

using namespace drcirp;

TEST_CASE("worst-case VaR closed form") {
    CHECK(worst_case_var({5, 15, 10, 0}, 0.3) == doctest::Approx(10.0));
    // terms {5, 23.33, 10} -> min 5
    CHECK(worst_case_var({0, 15, 10, 6}, 0.3) == doctest::Approx(15.0));
    // terms {5, 5, 2} -> min 2
    CHECK(worst_case_var({5, 15, 10, 2}, 0.5) == doctest::Approx(12.0));
    CHECK_THROWS_AS(worst_case_var({5, 15, 10, 2}, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(worst_case_var({5, 15, 10, 2}, 1.0), std::invalid_argument);
}

TEST_CASE("worst-case left quantile closed form") {
    CHECK(worst_case_lq({5, 15, 10, 0}, 0.1) == doctest::Approx(10.0));
    // terms {45, 5, 10} -> min 5
    CHECK(worst_case_lq({5, 15, 10, 2}, 0.1) == doctest::Approx(5.0));
    // terms {10, 2, 1} -> min 1
    CHECK(worst_case_lq({8, 20, 10, 1}, 0.5) == doctest::Approx(9.0));
    // hard-constraint limit
    CHECK(worst_case_lq({5, 15, 10, 2}, 0.0) == doctest::Approx(5.0));
}

TEST_CASE("monotonicity and sandwich over an epsilon grid") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        AmbiguityCell c;
        c.lo = 10.0 * u(rng);
        c.hi = c.lo + 1.0 + 10.0 * u(rng);
        c.mean = c.lo + (c.hi - c.lo) * (0.1 + 0.8 * u(rng));
        c.mad = 3.0 * u(rng);
        double prev_var = 1e18, prev_lq = -1e18;
        for (double eps = 0.05; eps < 1.0; eps += 0.05) {
            double v = worst_case_var(c, eps);
            double l = worst_case_lq(c, eps);
            CHECK(v <= prev_var + 1e-12);   // non-increasing in eps1
            CHECK(l >= prev_lq - 1e-12);    // non-decreasing in eps2
            prev_var = v;
            prev_lq = l;
            CHECK(c.lo <= l + 1e-12);
            CHECK(l <= c.mean + 1e-12);
            CHECK(c.mean <= v + 1e-12);
            CHECK(v <= c.hi + 1e-12);
        }
    }
}

namespace {

// Discretized single-period quantile moment problem: the independent oracle
// for the closed forms. The grid carries the closed-form candidate points so
// the optimum is representable exactly.
std::vector<double> oracle_grid(const AmbiguityCell& c, double eps1, double eps2) {
    std::vector<double> g;
    for (int k = 0; k <= 40; ++k) g.push_back(c.lo + (c.hi - c.lo) * k / 40.0);
    g.push_back(c.mean);
    g.push_back(std::min(c.hi, c.mean + (1 - eps1) / eps1 * (c.mean - c.lo)));
    g.push_back(std::min(c.hi, c.mean + c.mad / (2 * eps1)));
    g.push_back(std::max(c.lo, c.mean - (1 - eps2) / eps2 * (c.hi - c.mean)));
    g.push_back(std::max(c.lo, c.mean - c.mad / (2 * eps2)));
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end(),
                        [](double a, double b) { return std::abs(a - b) < 1e-12; }),
            g.end());
    return g;
}

// min / max of P(Z <= tau) over distributions on the grid with the cell's
// mean and MAD bound.
double extreme_cdf(const AmbiguityCell& c, const std::vector<double>& grid, double tau,
                   bool maximize) {
    LpProblem p(maximize);
    int mass = p.add_row(RowSense::EQ, 1.0);
    int mean = p.add_row(RowSense::EQ, c.mean);
    int mad = p.add_row(RowSense::LE, c.mad);
    for (double z : grid) {
        int v = p.add_var(z <= tau + 1e-12 ? 1.0 : 0.0);
        p.add_coeff(mass, v, 1.0);
        p.add_coeff(mean, v, z);
        p.add_coeff(mad, v, std::abs(z - c.mean));
    }
    LpSolution s = solve_lp(p);
    REQUIRE(s.optimal());
    return s.objective;
}

double oracle_var(const AmbiguityCell& c, const std::vector<double>& grid, double eps1) {
    for (double tau : grid)
        if (extreme_cdf(c, grid, tau, /*maximize=*/false) >= 1.0 - eps1 - 1e-7) return tau;
    return c.hi;
}

double oracle_lq(const AmbiguityCell& c, const std::vector<double>& grid, double eps2) {
    double best = c.lo;
    for (double tau : grid)
        if (extreme_cdf(c, grid, tau, /*maximize=*/true) <= eps2 + 1e-7) best = tau;
    return best;
}

}  // namespace

TEST_CASE("closed forms match the discretized LP oracle") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        AmbiguityCell c;
        c.lo = 8.0 * u(rng);
        c.hi = c.lo + 2.0 + 10.0 * u(rng);
        c.mean = c.lo + (c.hi - c.lo) * (0.15 + 0.7 * u(rng));
        c.mad = 2.5 * u(rng);
        double eps1 = 0.1 + 0.5 * u(rng);
        double eps2 = 0.05 + 0.4 * u(rng);
        auto grid = oracle_grid(c, eps1, eps2);
        CHECK(worst_case_var(c, eps1) == doctest::Approx(oracle_var(c, grid, eps1)).epsilon(1e-5));
        CHECK(worst_case_lq(c, eps2) == doctest::Approx(oracle_lq(c, grid, eps2)).epsilon(1e-5));
    }
}

TEST_CASE("capacity coefficient sums interval terms per departure period") {
    // two periods, two visits: the level terms cancel
    BoundsGrid g;
    g.u = {{12.0, 7.0}};
    g.l = {{0.0, 0.0}};
    ReplenishmentPlan plan{{0, 1}, {10, 10}};
    CHECK(capacity_coefficient({plan}, 0, g, 2) == doctest::Approx(12.0));

    // one visit covering the whole cycle
    BoundsGrid g3;
    g3.u = {{10.0, 10.0, 10.0}};
    g3.l = {{0.0, 0.0, 0.0}};
    ReplenishmentPlan single{{0}, {30}};
    CHECK(capacity_coefficient({single}, 0, g3, 3) == doctest::Approx(30.0));

    // additivity over retailers
    BoundsGrid g2;
    g2.u = {{12.0, 7.0}, {8.0, 9.0}};
    g2.l = {{0.0, 0.0}, {0.0, 0.0}};
    ReplenishmentPlan pa{{0, 1}, {10, 10}}, pb{{0, 1}, {4, 4}};
    CHECK(capacity_coefficient({pa, pb}, 0, g2, 2) == doctest::Approx(20.0));
}

TEST_CASE("ambiguity estimation from samples") {
    AmbiguityCell c = estimate_ambiguity({4, 6});
    CHECK(c.lo == doctest::Approx(4));
    CHECK(c.hi == doctest::Approx(6));
    CHECK(c.mean == doctest::Approx(5));
    CHECK(c.mad == doctest::Approx(1));

    c = estimate_ambiguity({7, 7, 7});
    CHECK(c.mean == doctest::Approx(7));
    CHECK(c.lo == doctest::Approx(6));
    CHECK(c.hi == doctest::Approx(8));
    CHECK(c.mad == doctest::Approx(0));

    c = estimate_ambiguity({0, 10, 20});
    CHECK(c.lo == doctest::Approx(0));
    CHECK(c.hi == doctest::Approx(20));
    CHECK(c.mean == doctest::Approx(10));
    CHECK(c.mad == doctest::Approx(20.0 / 3));

    CHECK_THROWS_AS(estimate_ambiguity({1}), std::invalid_argument);

    // estimator output is always a valid cell
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 20.0);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> samples;
        for (int k = 0; k < 2 + trial % 20; ++k) samples.push_back(std::floor(u(rng)));
        CHECK(estimate_ambiguity(samples).valid());
    }
}
