#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "drcirp/core.hpp"
#include "drcirp/inventory.hpp"

namespace drcirp {

enum class Policy { FixedInterval, Consistent, Flexible };

Policy parse_policy(const std::string& name);
std::string policy_name(Policy p);

struct SolverConfig {
    Policy policy = Policy::Flexible;
    double time_limit = 3600.0;     // seconds, whole solve
    double pp_time_limit = 300.0;   // seconds per second-level call
    int early_stop_nodes = 50;      // the paper's m
    int max_routes_per_round = 50;
    int subset_cap = 8;             // execution-subset enumeration limit
    double tol = 1e-7;
    uint64_t seed = 0;
    bool random_arc_branching = false;  // opt-in seeded arc selection
    bool debug_lazy_dump = false;
};

// One selected pattern: a vehicle's retailer cluster with its routes and
// replenishment plans.
struct ClusterSolution {
    std::vector<int> retailers;              // 0-based retailer ids
    std::map<int, std::vector<int>> routes;  // executed period -> node sequence
    std::vector<ReplenishmentPlan> plans;    // aligned with retailers
    int kappa = 0;                           // fixed-interval visit frequency
    double cost = 0.0;
};

enum class SolveStatus { Optimal, Feasible, Infeasible };

struct SolveStats {
    long first_level_nodes = 0;
    long columns = 0;
    double pp_time = 0.0;
    long second_level_nodes = 0;
    long routes = 0;
    double route_time = 0.0;
    long replenishments = 0;
    double replenishment_time = 0.0;
    double wall_time = 0.0;
    bool hit_time_limit = false;
    long timed_out_pricing_calls = 0;
};

struct Solution {
    SolveStatus status = SolveStatus::Infeasible;
    Policy policy = Policy::Flexible;
    double objective = 0.0;
    double lower_bound = 0.0;
    double gap = 0.0;
    double cost_vehicle = 0.0;
    double cost_transport = 0.0;
    double cost_inventory = 0.0;
    double cost_emergency = 0.0;
    std::vector<ClusterSolution> clusters;
    SolveStats stats;
};

Solution solve(const Instance& inst, const SolverConfig& cfg);

// Aggregates a cyclic instance into its stationary counterpart used by the
// fixed-interval policy: mean of means, mean of MAD bounds, support hull.
Instance aggregate_stationary(const Instance& inst);

}  // namespace drcirp
