#pragma once

#include <vector>

#include "drcirp/core.hpp"

namespace drcirp {

// Worst-case quantile coefficients of one cell: u is the robust
// value-at-risk bound, l the robust left-quantile bound, with
// lo <= l <= mean <= u <= hi.
struct RobustBounds {
    double u = 0.0;
    double l = 0.0;
};

// mean + min{ hi-mean, (1-eps)/eps (mean-lo), mad/(2 eps) }.
double worst_case_var(const AmbiguityCell& cell, double eps1);

// mean - min{ (1-eps)/eps (hi-mean), mean-lo, mad/(2 eps) }.
// eps2 == 0 is the hard-constraint limit and returns lo.
double worst_case_lq(const AmbiguityCell& cell, double eps2);

RobustBounds robust_bounds(const AmbiguityCell& cell, double eps1, double eps2);

// Precomputed U and L grids for a whole instance.
struct BoundsGrid {
    std::vector<std::vector<double>> u;  // [retailer][period]
    std::vector<std::vector<double>> l;
};

BoundsGrid compute_bounds(const Instance& inst);
BoundsGrid compute_bounds(const Instance& inst, double eps1, double eps2);

// Left side of the deterministic capacity constraint at the given period:
// the sum over retailers of y*(s_{t2} - s_{t1} + sum U) for the plan
// interval departing at that period.
double capacity_coefficient(const std::vector<ReplenishmentPlan>& plans, int period,
                            const BoundsGrid& bounds, int cycle_len);

// Worst-case delivery received at the given period: same interval terms,
// indexed by the interval that ends there. This is the quantity the master
// capacity rows bound, matching the per-period vehicle load.
double delivery_coefficient(const std::vector<ReplenishmentPlan>& plans, int period,
                            const BoundsGrid& bounds, int cycle_len);

// Sample min/max support, sample mean and sample mean absolute deviation.
// Degenerate support (mean hitting an endpoint) is widened by one demand
// unit on each side so the mean stays strictly interior.
AmbiguityCell estimate_ambiguity(const std::vector<double>& samples);

std::vector<std::vector<AmbiguityCell>> estimate_ambiguity_grid(
    const std::vector<std::vector<std::vector<double>>>& samples);

}  // namespace drcirp
