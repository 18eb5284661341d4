#pragma once

// Internal machinery of the nested branch-and-price; not installed.

#include <chrono>
#include <optional>
#include <set>

#include "drcirp/ambiguity.hpp"
#include "drcirp/core.hpp"
#include "drcirp/inventory.hpp"
#include "drcirp/lp.hpp"
#include "drcirp/replenishment.hpp"
#include "drcirp/routing.hpp"
#include "drcirp/solver.hpp"

namespace drcirp::detail {

constexpr double kBigM = 1e6;

struct Deadline {
    std::chrono::steady_clock::time_point at;
    bool expired() const { return std::chrono::steady_clock::now() >= at; }
    static Deadline in(double seconds) {
        return {std::chrono::steady_clock::now() +
                std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                    std::chrono::duration<double>(seconds))};
    }
};

// A first-level column.
struct Pattern {
    std::vector<int> retailers;              // sorted 0-based ids
    std::map<int, std::vector<int>> routes;  // executed period -> node seq
    std::vector<ReplenishmentPlan> plans;    // aligned with retailers
    int kappa = 0;
    double cost = 0.0;       // c_omega incl. per-retailer constants
    double transport = 0.0;  // per-period average transport cost
    double inventory = 0.0;  // per-period average worst-case inventory cost

    std::set<std::pair<int, int>> arc_set() const;
};

struct PlanColumn {
    int retailer = 0;
    ReplenishmentPlan plan;
    double inv_cost = 0.0;  // sum of f_inv over the plan intervals
};

// Branching state of a first-level node.
struct FirstNodeCtx {
    std::set<std::pair<int, int>> forbidden_arcs;
    std::vector<std::pair<int, int>> forced_arcs;
    std::vector<double> forced_arc_duals;           // aligned with forced_arcs
    std::set<size_t> forbidden_patterns;            // exact pool entries
    std::vector<std::vector<int>> banned_clusters;  // sorted retailer sets
    std::vector<size_t> forced_patterns;            // pool entries fixed to one
};

// Branching state of a second-level node.
struct SecondNodeCtx {
    std::vector<char> forced_serve;     // per retailer
    std::vector<char> forbidden_serve;  // per retailer
    std::vector<std::vector<std::pair<int, int>>> forced_intervals;
    std::vector<std::vector<std::pair<int, int>>> forbidden_intervals;
    std::vector<LevelRules> level_rules;

    explicit SecondNodeCtx(int n_retailers = 0, int cycle_len = 0)
        : forced_serve(n_retailers, 0),
          forbidden_serve(n_retailers, 0),
          forced_intervals(n_retailers),
          forbidden_intervals(n_retailers),
          level_rules(n_retailers, LevelRules(cycle_len)) {}
};

struct Workspace {
    const Instance* inst = nullptr;
    BoundsGrid bounds;
    FInvCache cache;
    std::vector<RetailerPricingCache> warm;  // per retailer
    std::vector<double> retailer_constant;   // emergency adjustment per retailer
    double emergency_constant = 0.0;         // e * Q * V
    SolverConfig cfg;
    SolveStats stats;
    Deadline total_deadline;
};

struct SecondLevelResult {
    std::optional<Pattern> pattern;
    double reduced_cost = 0.0;
    bool timed_out = false;
};

// Prices one new pattern against the first-level duals by a branch-and-price
// over the second-level master (consistent and flexible policies).
SecondLevelResult second_level_solve(Workspace& ws, const std::vector<double>& pi,
                                     double fleet_dual, const FirstNodeCtx& node,
                                     const std::vector<char>& excluded_retailers,
                                     std::vector<PlanColumn>& plan_pool,
                                     std::vector<RouteColumn>& route_pool);

double plan_inventory_cost(const Instance& inst, int retailer,
                           const ReplenishmentPlan& plan, FInvCache& cache);

// Delivery-period capacity coefficient of one plan at one period.
double plan_delivery_coeff(const Instance& inst, const ReplenishmentPlan& plan,
                           int period, const std::vector<double>& u_row);

bool plan_satisfies_overshoot(const Instance& inst, const ReplenishmentPlan& plan,
                              const std::vector<double>& l_row);

// Clarke-Wright style savings tours under capacity and length limits.
std::vector<std::vector<int>> savings_cvrp(const Instance& inst,
                                           const std::vector<double>& demand);

std::vector<Pattern> initial_columns(Workspace& ws);

}  // namespace drcirp::detail
