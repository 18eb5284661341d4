#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "drcirp/core.hpp"
#include "drcirp/solver.hpp"

namespace drcirp {

enum class CycleType { Stationary, Cyclic };

struct GeneratorConfig {
    int n_retailers = 5;
    int cycle_len = 5;
    int n_vehicles = 5;
    CycleType cycle = CycleType::Cyclic;
    double mean_lo = 6.0, mean_hi = 14.0;  // ground-truth mean range
    double mad_lo = 1.0, mad_hi = 3.0;     // ground-truth deviation range
    int samples = 100000;                  // estimation samples per cell
    int test_periods = 100;                // held-out horizon
    double capacity = 70.0;
    double max_tour_len = 1e18;            // effectively unconstrained
    double hold_cost = 1.0;
    double backorder_cost = 4.0;
    double trans_cost = 0.25;
    double vehicle_cost = 10.0;
    double eps1 = 0.3;
    double eps2 = 0.1;
    uint64_t seed = 0;
};

struct GeneratedInstance {
    Instance instance;
    std::vector<std::vector<double>> traces;      // [retailer][test period]
    std::vector<std::vector<double>> true_mean;   // ground truth per cell
    std::vector<std::vector<double>> true_sigma;
};

// Synthetic instance: ground-truth moments drawn from the config ranges,
// integer demand samples from the half-normal/half-uniform mixture, ambiguity
// estimated from the samples, held-out traces from the same ground truth,
// haversine distances from random coordinates.
GeneratedInstance generate_instance(const GeneratorConfig& cfg);

// One demand draw from the ground-truth mixture of a cell.
double sample_mixture_demand(double mu, double sigma, std::mt19937_64& rng);

double haversine_km(double lat1, double lon1, double lat2, double lon2);

struct SimulationReport {
    double service_level = 0.0;
    double vehicle_utilization = 0.0;
    double overshoot_rate = 0.0;
    double avg_overshoot = 0.0;      // conditional on an overshoot event
    double emergency_rate = 0.0;
    double avg_emergency = 0.0;      // conditional on an emergency event
    double realized_transport = 0.0;  // per period
    double realized_inventory = 0.0;  // per period holding+backorder
    double realized_emergency = 0.0;  // per period
    long periods_measured = 0;
    long visits = 0;
    long tours = 0;
    std::vector<std::vector<long>> capacity_events;  // [vehicle][period in cycle]
    std::vector<std::vector<long>> capacity_trials;
};

// Replays the cyclic plan against demand traces. The first cycle warms up
// inventories (initial stock equals the first-visit order-up-to level) and is
// excluded from the KPIs.
SimulationReport simulate(const Solution& sol, const std::vector<std::vector<double>>& traces,
                          const Instance& inst);

struct OracleCaps {
    int max_retailers = 4;
    int max_periods = 4;
    int max_level = 30;
};

// Exhaustive optimum over retailer partitions, visit sets, integer level
// vectors and per-period optimal tours under the same deterministic
// constraints and worst-case costs as the solver.
Solution brute_force_solve(const Instance& inst, Policy policy, FInvCache& cache,
                           const OracleCaps& caps = {});

}  // namespace drcirp
