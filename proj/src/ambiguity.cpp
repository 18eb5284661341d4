#include "drcirp/ambiguity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace drcirp {

double worst_case_var(const AmbiguityCell& cell, double eps1) {
    if (!(eps1 > 0.0 && eps1 < 1.0)) throw std::invalid_argument("eps1 must lie in (0,1)");
    double a = cell.hi - cell.mean;
    double b = (1.0 - eps1) / eps1 * (cell.mean - cell.lo);
    double c = cell.mad / (2.0 * eps1);
    return cell.mean + std::min({a, b, c});
}

double worst_case_lq(const AmbiguityCell& cell, double eps2) {
    if (eps2 == 0.0) return cell.lo;  // hard no-overshoot limit
    if (!(eps2 > 0.0 && eps2 < 1.0)) throw std::invalid_argument("eps2 must lie in [0,1)");
    double a = (1.0 - eps2) / eps2 * (cell.hi - cell.mean);
    double b = cell.mean - cell.lo;
    double c = cell.mad / (2.0 * eps2);
    return cell.mean - std::min({a, b, c});
}

RobustBounds robust_bounds(const AmbiguityCell& cell, double eps1, double eps2) {
    return {worst_case_var(cell, eps1), worst_case_lq(cell, eps2)};
}

BoundsGrid compute_bounds(const Instance& inst) {
    return compute_bounds(inst, inst.eps_capacity, inst.eps_overshoot);
}

BoundsGrid compute_bounds(const Instance& inst, double eps1, double eps2) {
    BoundsGrid g;
    g.u.resize(inst.n_retailers);
    g.l.resize(inst.n_retailers);
    for (int i = 0; i < inst.n_retailers; ++i) {
        g.u[i].resize(inst.cycle_len);
        g.l[i].resize(inst.cycle_len);
        for (int t = 0; t < inst.cycle_len; ++t) {
            g.u[i][t] = worst_case_var(inst.cell(i, t), eps1);
            g.l[i][t] = worst_case_lq(inst.cell(i, t), eps2);
        }
    }
    return g;
}

namespace {

double interval_term(const ReplenishmentPlan& plan, const CyclicInterval& iv,
                     const std::vector<double>& u_row) {
    double sum = plan.level_at(iv.end()) - plan.level_at(iv.start());
    for (int t : iv.demand_periods()) sum += u_row[t];
    return sum;
}

}  // namespace

double capacity_coefficient(const std::vector<ReplenishmentPlan>& plans, int period,
                            const BoundsGrid& bounds, int cycle_len) {
    double total = 0.0;
    for (size_t i = 0; i < plans.size(); ++i) {
        for (const CyclicInterval& iv : plans[i].intervals(cycle_len))
            if (iv.start() == period) total += interval_term(plans[i], iv, bounds.u[i]);
    }
    return total;
}

double delivery_coefficient(const std::vector<ReplenishmentPlan>& plans, int period,
                            const BoundsGrid& bounds, int cycle_len) {
    double total = 0.0;
    for (size_t i = 0; i < plans.size(); ++i) {
        for (const CyclicInterval& iv : plans[i].intervals(cycle_len))
            if (iv.end() == period) total += interval_term(plans[i], iv, bounds.u[i]);
    }
    return total;
}

AmbiguityCell estimate_ambiguity(const std::vector<double>& samples) {
    if (samples.size() < 2) throw std::invalid_argument("need at least two samples per cell");
    AmbiguityCell c;
    c.lo = *std::min_element(samples.begin(), samples.end());
    c.hi = *std::max_element(samples.begin(), samples.end());
    double sum = 0.0;
    for (double s : samples) sum += s;
    c.mean = sum / static_cast<double>(samples.size());
    double dev = 0.0;
    for (double s : samples) dev += std::abs(s - c.mean);
    c.mad = dev / static_cast<double>(samples.size());
    // The sample mean can only touch the support when all samples coincide;
    // widen by one demand unit per side to keep the mean strictly interior.
    if (c.mean <= c.lo || c.mean >= c.hi) {
        c.lo -= 1.0;
        c.hi += 1.0;
        if (c.lo < 0.0) {
            c.lo = 0.0;
            if (c.mean <= c.lo) c.mean = 0.5 * (c.lo + c.hi);
        }
    }
    return c;
}

std::vector<std::vector<AmbiguityCell>> estimate_ambiguity_grid(
    const std::vector<std::vector<std::vector<double>>>& samples) {
    std::vector<std::vector<AmbiguityCell>> grid(samples.size());
    for (size_t i = 0; i < samples.size(); ++i) {
        grid[i].reserve(samples[i].size());
        for (const auto& cell_samples : samples[i])
            grid[i].push_back(estimate_ambiguity(cell_samples));
    }
    return grid;
}

}  // namespace drcirp
