#include "drcirp/inventory.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace drcirp {

namespace {

// Variable layout of the LOP: for each turning index a in 0..H (positions
// 0..H-1 are real turning periods, a == H is the "stock suffices" index),
// one pi variable followed by H pairs (lplus, lminus) realizing
// lambda_{a,q} = pi_a * mu_q + lplus - lminus.
struct LopLayout {
    int H = 0;
    int pi(int a) const { return a * (1 + 2 * H); }
    int lp(int a, int q) const { return pi(a) + 1 + 2 * q; }
    int lm(int a, int q) const { return pi(a) + 2 + 2 * q; }
    int n_vars() const { return (H + 1) * (1 + 2 * H); }
};

}  // namespace

int max_order_up_to(const InventoryCostQuery& q, const Instance& inst) {
    double sum = 0.0;
    for (int t : q.interval.demand_periods()) sum += inst.cell(q.retailer, t).hi;
    return static_cast<int>(std::floor(sum + 1e-9));
}

LpProblem build_lop(const InventoryCostQuery& q, const Instance& inst) {
    const std::vector<int> dp = q.interval.demand_periods();
    const int H = static_cast<int>(dp.size());
    const double s = q.order_up_to;
    const double h = inst.hold_cost;
    const double b = inst.backorder_cost;
    const int i = q.retailer;
    LopLayout L{H};

    std::vector<double> mu(H), lo(H), hi(H), sig(H);
    for (int t = 0; t < H; ++t) {
        const AmbiguityCell& c = inst.cell(i, dp[t]);
        mu[t] = c.mean;
        lo[t] = c.lo;
        hi[t] = c.hi;
        sig[t] = c.mad;
    }

    LpProblem p(/*maximize=*/true);
    for (int a = 0; a <= H; ++a) {
        // Objective weight of lambda_{a,q}: cumulative sums put lambda_q in
        // every period cost from q onward; holding before the turning
        // position, backorder from it on.
        std::vector<double> w(H);
        for (int qq = 0; qq < H; ++qq) {
            if (a < H)
                w[qq] = -h * std::max(0, a - qq) + b * (H - std::max(qq, a));
            else
                w[qq] = -h * (H - qq);
        }
        double pi_obj = a < H ? s * (h * a - b * (H - a)) : s * h * H;
        for (int qq = 0; qq < H; ++qq) pi_obj += w[qq] * mu[qq];
        p.add_var(pi_obj, 0.0, kInf, "pi" + std::to_string(a));
        for (int qq = 0; qq < H; ++qq) {
            p.add_var(w[qq], 0.0, kInf);
            p.add_var(-w[qq], 0.0, kInf);
        }
    }

    int row = p.add_row(RowSense::EQ, 1.0, "prob");
    for (int a = 0; a <= H; ++a) p.add_coeff(row, L.pi(a), 1.0);

    for (int qq = 0; qq < H; ++qq) {
        row = p.add_row(RowSense::EQ, mu[qq], "mean" + std::to_string(qq));
        for (int a = 0; a <= H; ++a) {
            p.add_coeff(row, L.pi(a), mu[qq]);
            p.add_coeff(row, L.lp(a, qq), 1.0);
            p.add_coeff(row, L.lm(a, qq), -1.0);
        }
        row = p.add_row(RowSense::LE, sig[qq], "mad" + std::to_string(qq));
        for (int a = 0; a <= H; ++a) {
            p.add_coeff(row, L.lp(a, qq), 1.0);
            p.add_coeff(row, L.lm(a, qq), 1.0);
        }
    }

    for (int a = 0; a <= H; ++a) {
        for (int qq = 0; qq < H; ++qq) {
            row = p.add_row(RowSense::GE, 0.0);  // lambda >= pi * lo
            p.add_coeff(row, L.pi(a), mu[qq] - lo[qq]);
            p.add_coeff(row, L.lp(a, qq), 1.0);
            p.add_coeff(row, L.lm(a, qq), -1.0);
            row = p.add_row(RowSense::GE, 0.0);  // lambda <= pi * hi
            p.add_coeff(row, L.pi(a), hi[qq] - mu[qq]);
            p.add_coeff(row, L.lp(a, qq), -1.0);
            p.add_coeff(row, L.lm(a, qq), 1.0);
        }
    }

    // Turning brackets: demand before the turning position stays below s,
    // demand through it reaches s (closure of the strict form).
    for (int a = 0; a < H; ++a) {
        if (a > 0) {
            row = p.add_row(RowSense::LE, 0.0);
            double mu_cum = 0.0;
            for (int qq = 0; qq < a; ++qq) {
                mu_cum += mu[qq];
                p.add_coeff(row, L.lp(a, qq), 1.0);
                p.add_coeff(row, L.lm(a, qq), -1.0);
            }
            p.add_coeff(row, L.pi(a), mu_cum - s);
        }
        row = p.add_row(RowSense::LE, 0.0);
        double mu_cum = 0.0;
        for (int qq = 0; qq <= a; ++qq) {
            mu_cum += mu[qq];
            p.add_coeff(row, L.lp(a, qq), -1.0);
            p.add_coeff(row, L.lm(a, qq), 1.0);
        }
        p.add_coeff(row, L.pi(a), s - mu_cum);
    }
    {
        // Suffices index: total demand stays below s.
        row = p.add_row(RowSense::LE, 0.0);
        double mu_cum = 0.0;
        for (int qq = 0; qq < H; ++qq) {
            mu_cum += mu[qq];
            p.add_coeff(row, L.lp(H, qq), 1.0);
            p.add_coeff(row, L.lm(H, qq), -1.0);
        }
        p.add_coeff(row, L.pi(H), mu_cum - s);
    }
    return p;
}

double f_inv_once(const InventoryCostQuery& q, const Instance& inst) {
    LpProblem p = build_lop(q, inst);
    LpSolution sol = solve_lp(p);
    if (!sol.optimal())
        throw std::logic_error("worst-case inventory LP did not solve to optimality");
    return sol.objective;
}

double f_inv(const InventoryCostQuery& q, const Instance& inst, FInvCache& cache) {
    std::array<int, 4> key{q.retailer, q.interval.start(), q.interval.end(),
                           q.order_up_to};
    double v;
    if (cache.lookup(key, v)) return v;
    v = f_inv_once(q, inst);
    cache.store(key, v);
    return v;
}

WorstCaseDistribution extract_worst_distribution(const InventoryCostQuery& q,
                                                 const Instance& inst) {
    const std::vector<int> dp = q.interval.demand_periods();
    const int H = static_cast<int>(dp.size());
    LopLayout L{H};

    LpProblem p1 = build_lop(q, inst);
    LpSolution s1 = solve_lp(p1);
    if (!s1.optimal())
        throw std::logic_error("worst-case inventory LP did not solve to optimality");

    // Keep the objective optimal, then concentrate probability mass on the
    // dominant turning index; among alternate optima this selects the
    // distribution with the fewest active turning periods.
    int amax = 0;
    for (int a = 1; a <= H; ++a)
        if (s1.x[L.pi(a)] > s1.x[L.pi(amax)] + 1e-12) amax = a;

    LpProblem p2(/*maximize=*/false);
    for (int j = 0; j < p1.n_vars(); ++j) {
        bool off_mass = false;
        for (int a = 0; a <= H; ++a)
            if (a != amax && j == L.pi(a)) off_mass = true;
        p2.add_var(off_mass ? 1.0 : 0.0, p1.lb(j), p1.ub(j));
    }
    for (int i = 0; i < p1.n_rows(); ++i) p2.add_row(p1.sense(i), p1.rhs(i));
    for (const auto& t : p1.coeffs()) p2.add_coeff(t.row, t.var, t.value);
    int obj_row = p2.add_row(RowSense::GE,
                             s1.objective - 1e-8 * std::max(1.0, std::abs(s1.objective)));
    for (int j = 0; j < p1.n_vars(); ++j)
        if (p1.obj(j) != 0.0) p2.add_coeff(obj_row, j, p1.obj(j));
    LpSolution s2 = solve_lp(p2);
    const LpSolution& sol = s2.optimal() ? s2 : s1;

    WorstCaseDistribution out;
    for (int a = 0; a <= H; ++a) {
        double pi = sol.x[L.pi(a)];
        if (pi <= 1e-7) continue;
        WorstCaseAtom atom;
        atom.prob = pi;
        atom.turning = a < H ? dp[a] : kNoTurning;
        atom.demand.resize(H);
        for (int qq = 0; qq < H; ++qq) {
            const AmbiguityCell& c = inst.cell(q.retailer, dp[qq]);
            atom.demand[qq] = c.mean + (sol.x[L.lp(a, qq)] - sol.x[L.lm(a, qq)]) / pi;
        }
        out.atoms.push_back(std::move(atom));
    }
    return out;
}

double interval_cost_of_path(const std::vector<double>& demand, double s, double h,
                             double b) {
    double cum = 0.0, cost = 0.0;
    for (double d : demand) {
        cum += d;
        double inv = s - cum;
        cost += inv >= 0 ? h * inv : -b * inv;
    }
    return cost;
}

double expected_interval_cost(const WorstCaseDistribution& dist, double s, double h,
                              double b) {
    double e = 0.0;
    for (const auto& atom : dist.atoms)
        e += atom.prob * interval_cost_of_path(atom.demand, s, h, b);
    return e;
}

ValidationReport check_convexity(int retailer, const CyclicInterval& iv,
                                 const Instance& inst, const std::vector<int>& s_grid,
                                 FInvCache& cache, double tol) {
    ValidationReport rep;
    for (size_t k = 1; k + 1 < s_grid.size(); ++k) {
        if (s_grid[k] - s_grid[k - 1] != 1 || s_grid[k + 1] - s_grid[k] != 1) continue;
        double fm = f_inv({retailer, iv, s_grid[k - 1]}, inst, cache);
        double f0 = f_inv({retailer, iv, s_grid[k]}, inst, cache);
        double fp = f_inv({retailer, iv, s_grid[k + 1]}, inst, cache);
        if (fm + fp < 2.0 * f0 - tol)
            rep.add("midpoint convexity violated at s=" + std::to_string(s_grid[k]));
    }
    return rep;
}

}  // namespace drcirp
