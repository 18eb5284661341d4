#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "drcirp/lp.hpp"

using namespace drcirp;

TEST_CASE("one-variable lower-bounded minimum") {
    LpProblem p;
    int x = p.add_var(1.0);
    int r = p.add_row(RowSense::GE, 3.0);
    p.add_coeff(r, x, 1.0);
    LpSolution s = solve_lp(p);
    REQUIRE(s.optimal());
    CHECK(s.x[x] == doctest::Approx(3.0));
    CHECK(s.objective == doctest::Approx(3.0));
    CHECK(s.duals[r] == doctest::Approx(1.0));
}

TEST_CASE("two-variable maximization with a shared cap") {
    LpProblem p(/*maximize=*/true);
    int x = p.add_var(1.0), y = p.add_var(1.0);
    int r = p.add_row(RowSense::LE, 1.0);
    p.add_coeff(r, x, 1.0);
    p.add_coeff(r, y, 1.0);
    LpSolution s = solve_lp(p);
    REQUIRE(s.optimal());
    CHECK(s.objective == doctest::Approx(1.0));
    CHECK(s.duals[r] == doctest::Approx(1.0));
}

TEST_CASE("set-partitioning relaxation picks the cheap double cover") {
    // columns {1},{2},{1,2} with costs 3,3,5: the pair column wins with
    // objective 5 (the only alternatives are 3+3=6 by hand enumeration)
    LpProblem p;
    int a = p.add_var(3.0), b = p.add_var(3.0), c = p.add_var(5.0);
    int r1 = p.add_row(RowSense::EQ, 1.0), r2 = p.add_row(RowSense::EQ, 1.0);
    p.add_coeff(r1, a, 1.0);
    p.add_coeff(r2, b, 1.0);
    p.add_coeff(r1, c, 1.0);
    p.add_coeff(r2, c, 1.0);
    LpSolution s = solve_lp(p);
    REQUIRE(s.optimal());
    CHECK(s.objective == doctest::Approx(5.0));
    CHECK(s.x[c] == doctest::Approx(1.0));
    CHECK(s.duals[r1] + s.duals[r2] == doctest::Approx(5.0));
}

TEST_CASE("infeasible and unbounded are certified") {
    {
        LpProblem p;
        int x = p.add_var(1.0, 0.0, 2.0);
        int r = p.add_row(RowSense::GE, 5.0);
        p.add_coeff(r, x, 1.0);
        CHECK(solve_lp(p).status == LpStatus::Infeasible);
    }
    {
        LpProblem p;
        int x = p.add_var(-1.0);
        (void)x;
        CHECK(solve_lp(p).status == LpStatus::Unbounded);
    }
}

TEST_CASE("variable bounds are honored at basic solutions") {
    LpProblem p;
    int x = p.add_var(-1.0, 1.0, 4.0);
    int y = p.add_var(-2.0, 0.0, 3.0);
    int r = p.add_row(RowSense::LE, 6.0);
    p.add_coeff(r, x, 1.0);
    p.add_coeff(r, y, 1.0);
    LpSolution s = solve_lp(p);
    REQUIRE(s.optimal());
    CHECK(s.x[y] == doctest::Approx(3.0));
    CHECK(s.x[x] == doctest::Approx(3.0));
    CHECK(s.objective == doctest::Approx(-9.0));
}

namespace {

// Random bounded LPs with a known feasible point.
LpProblem random_lp(std::mt19937_64& rng, int n, int m) {
    std::uniform_real_distribution<double> coef(-3.0, 3.0), obj(-2.0, 2.0);
    std::uniform_int_distribution<int> sense(0, 2);
    LpProblem p;
    std::vector<double> x0(n);
    for (int j = 0; j < n; ++j) {
        p.add_var(obj(rng), 0.0, 5.0);
        x0[j] = 1.0;
    }
    for (int i = 0; i < m; ++i) {
        double lhs = 0.0;
        std::vector<double> row(n);
        for (int j = 0; j < n; ++j) {
            row[j] = coef(rng);
            lhs += row[j] * x0[j];
        }
        RowSense s = sense(rng) == 0 ? RowSense::LE : sense(rng) == 1 ? RowSense::GE
                                                                      : RowSense::EQ;
        double rhs = s == RowSense::LE ? lhs + 1.0 : s == RowSense::GE ? lhs - 1.0 : lhs;
        int r = p.add_row(s, rhs);
        for (int j = 0; j < n; ++j) p.add_coeff(r, j, row[j]);
    }
    return p;
}

}  // namespace

TEST_CASE("strong duality and complementary slackness on random solvable LPs") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        LpProblem p = random_lp(rng, 2 + trial % 5, 1 + trial % 4);
        LpSolution s = solve_lp(p);
        REQUIRE(s.optimal());

        // primal feasibility
        std::vector<double> act(p.n_rows(), 0.0);
        for (const auto& t : p.coeffs()) act[t.row] += t.value * s.x[t.var];
        for (int i = 0; i < p.n_rows(); ++i) {
            if (p.sense(i) == RowSense::LE) CHECK(act[i] <= p.rhs(i) + 1e-6);
            if (p.sense(i) == RowSense::GE) CHECK(act[i] >= p.rhs(i) - 1e-6);
            if (p.sense(i) == RowSense::EQ)
                CHECK(act[i] == doctest::Approx(p.rhs(i)).epsilon(1e-6));
        }
        for (int j = 0; j < p.n_vars(); ++j) {
            CHECK(s.x[j] >= p.lb(j) - 1e-9);
            CHECK(s.x[j] <= p.ub(j) + 1e-9);
        }

        // strong duality: y'b + bound terms equals the primal objective
        double dual_obj = 0.0;
        for (int i = 0; i < p.n_rows(); ++i) dual_obj += s.duals[i] * p.rhs(i);
        for (int j = 0; j < p.n_vars(); ++j) {
            double d = s.reduced_cost[j];
            if (d > 1e-7) dual_obj += d * p.lb(j);
            if (d < -1e-7) dual_obj += d * p.ub(j);
        }
        CHECK(dual_obj == doctest::Approx(s.objective).epsilon(1e-5));

        // complementary slackness on rows
        for (int i = 0; i < p.n_rows(); ++i)
            CHECK(std::abs(s.duals[i] * (act[i] - p.rhs(i))) < 1e-5);
    }
}

TEST_CASE("identical inputs give identical solutions") {
    std::mt19937_64 rng(11);
    LpProblem p = random_lp(rng, 6, 4);
    LpSolution a = solve_lp(p), b = solve_lp(p);
    REQUIRE(a.optimal());
    REQUIRE(b.optimal());
    CHECK(a.objective == b.objective);
    for (int j = 0; j < p.n_vars(); ++j) CHECK(a.x[j] == b.x[j]);
    for (int i = 0; i < p.n_rows(); ++i) CHECK(a.duals[i] == b.duals[i]);
}

TEST_CASE("problem dump lists variables, rows and coefficients") {
    LpProblem p;
    p.add_var(1.0, 0.0, 2.0, "width");
    int r = p.add_row(RowSense::LE, 7.0, "cap");
    p.add_coeff(r, 0, 3.0);
    std::string text = p.dump();
    CHECK(text.find("width") != std::string::npos);
    CHECK(text.find("cap") != std::string::npos);
    CHECK(text.find("3") != std::string::npos);
}
