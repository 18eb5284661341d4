#pragma once

#include <cstdint>
#include <vector>

#include "drcirp/ambiguity.hpp"
#include "drcirp/core.hpp"
#include "drcirp/inventory.hpp"
#include "drcirp/replenishment.hpp"

namespace drcirp {

// An elementary route closed at the warehouse, with its accumulated
// resource values and reduced-cost contribution along the arcs.
struct EspRoute {
    std::vector<int> nodes;  // 0, r1, ..., rk, 0
    double length = 0.0;
    double cost = 0.0;  // sum of arc costs including the closing arc
};

struct EspprcConfig {
    double max_len = kInf;
    double load_capacity = kInf;
    const std::vector<double>* load = nullptr;  // per node, index 0 unused
    double constant = 0.0;  // added to every closed route before filtering
    double keep_below = -1e-7;
    int max_routes = 50;
    bool use_dominance = true;
};

// Label-correcting ESPPRC over the complete graph minus +inf arcs.
// Dominance: same end node, unreachable-set inclusion, componentwise
// resource and cost dominance.
std::vector<EspRoute> espprc(const std::vector<std::vector<double>>& dist,
                             const std::vector<std::vector<double>>& arc_cost,
                             const EspprcConfig& cfg);

// Reduced cost of a routing column under the column-dependent-row duals:
// -iota + sum_t min{(1/T) c_r - sum_i o_r^i delta_it, 0}, and the execution
// periods where the first argument attains the min.
struct Theorem2Eval {
    double reduced_cost = 0.0;
    uint32_t exec_mask = 0;
};

Theorem2Eval theorem2_reduced_cost(double route_cost,
                                   const std::vector<int>& covered_retailers,
                                   const std::vector<std::vector<double>>& delta,
                                   double iota, int cycle_len);

// A priced routing column. For the consistent policy exec_mask is the
// execution-period set; for the flexible policy the column binds to the
// single period in exec_mask.
struct RouteColumn {
    std::vector<int> nodes;
    double length = 0.0;
    double trans_cost = 0.0;  // rho * length
    uint32_t exec_mask = 0;
    double reduced_cost = 0.0;
};

struct RoutePricingMods {
    std::vector<std::vector<char>> forbidden_arc;   // (N+1)^2, 1 = banned
    std::vector<std::vector<double>> arc_credit;    // forced-arc duals
    int max_routes = 50;
    bool use_dominance = true;
};

RoutePricingMods default_mods(int n_nodes, int max_routes = 50);

// Consistent policy: enumerate execution-period subsets (increasing
// popcount), solve one ESPPRC per subset, keep Theorem-2-consistent
// negative columns deduplicated by (node set, execution set).
std::vector<RouteColumn> generate_consistent_routes(
    const Instance& inst, const std::vector<std::vector<double>>& delta, double iota,
    const RoutePricingMods& mods, int subset_cap = 8);

// Flexible policy: one ESPPRC per period with that period's duals.
std::vector<RouteColumn> generate_flexible_routes(
    const Instance& inst, const std::vector<std::vector<double>>& delta,
    const std::vector<double>& iota, const RoutePricingMods& mods);

// Fixed-interval policy: whole first-level patterns, one pricing pass per
// admissible visit frequency kappa (divisors of T keep the plan cyclic).
struct FixedIntervalColumn {
    std::vector<int> nodes;
    int kappa = 1;
    std::vector<int> levels;   // order-up-to level per visited retailer
    double pattern_cost = 0.0; // p + (rho*len + sum inv) / kappa
    double reduced_cost = 0.0;
};

std::vector<FixedIntervalColumn> generate_fixed_interval_patterns(
    const Instance& inst, const std::vector<double>& pi, const BoundsGrid& bounds,
    FInvCache& cache, const RoutePricingMods& mods, double fleet_dual = 0.0,
    const std::vector<double>* retailer_constant = nullptr);

std::vector<int> divisors_of(int n);

}  // namespace drcirp
