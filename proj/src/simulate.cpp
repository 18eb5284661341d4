#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "drcirp/harness.hpp"

namespace drcirp {

SimulationReport simulate(const Solution& sol, const std::vector<std::vector<double>>& traces,
                          const Instance& inst) {
    const int N = inst.n_retailers;
    const int T = inst.cycle_len;
    if (static_cast<int>(traces.size()) != N)
        throw std::invalid_argument("trace count does not match the retailer count");
    const int periods = traces.empty() ? 0 : static_cast<int>(traces[0].size());
    for (const auto& tr : traces)
        if (static_cast<int>(tr.size()) != periods)
            throw std::invalid_argument("trace lengths differ");

    // Per-retailer plan lookup and owning cluster.
    std::vector<const ReplenishmentPlan*> plan(N, nullptr);
    std::vector<int> vehicle_of(N, -1);
    for (size_t v = 0; v < sol.clusters.size(); ++v) {
        const ClusterSolution& cs = sol.clusters[v];
        for (size_t k = 0; k < cs.retailers.size(); ++k) {
            plan[cs.retailers[k]] = &cs.plans[k];
            vehicle_of[cs.retailers[k]] = static_cast<int>(v);
        }
    }
    for (int i = 0; i < N; ++i)
        if (!plan[i]) throw std::invalid_argument("solution does not cover every retailer");

    SimulationReport rep;
    rep.capacity_events.assign(sol.clusters.size(), std::vector<long>(T, 0));
    rep.capacity_trials.assign(sol.clusters.size(), std::vector<long>(T, 0));

    // Cyclic steady state: stock enters the horizon at the first-visit
    // order-up-to level; the first cycle is measured as warm-up only.
    std::vector<double> stock(N, 0.0);
    for (int i = 0; i < N; ++i) {
        int first = plan[i]->visits.front();
        stock[i] = plan[i]->level_at(first);
    }

    const int warmup = std::min(T, periods);
    double demand_total = 0.0, demand_met = 0.0;
    double load_total = 0.0;
    long overshoot_events = 0, emergency_events = 0;
    double overshoot_sum = 0.0, emergency_sum = 0.0;
    double util_sum = 0.0;
    long util_tours = 0;

    for (int k = 0; k < periods; ++k) {
        const int t = k % T;
        const bool measured = k >= warmup;
        std::vector<double> vehicle_load(sol.clusters.size(), 0.0);
        // deliveries
        for (int i = 0; i < N; ++i) {
            const auto& visits = plan[i]->visits;
            if (std::find(visits.begin(), visits.end(), t) == visits.end()) continue;
            double target = plan[i]->level_at(t);
            double delivery = std::max(0.0, target - stock[i]);
            bool overshoot = stock[i] > target + 1e-9;
            stock[i] += delivery;
            vehicle_load[vehicle_of[i]] += delivery;
            if (measured) {
                ++rep.visits;
                if (overshoot) {
                    ++overshoot_events;
                    overshoot_sum += stock[i] - delivery - target;
                }
            }
        }
        // tours, capacity and emergency transport
        for (size_t v = 0; v < sol.clusters.size(); ++v) {
            bool executes = sol.clusters[v].routes.count(t) > 0;
            if (!executes) continue;
            if (measured) {
                ++rep.tours;
                ++rep.capacity_trials[v][t];
                util_sum += std::min(vehicle_load[v], inst.capacity) / inst.capacity;
                ++util_tours;
                if (vehicle_load[v] > inst.capacity + 1e-9) {
                    ++rep.capacity_events[v][t];
                    ++emergency_events;
                    emergency_sum += vehicle_load[v] - inst.capacity;
                }
            }
        }
        // demand and inventory evolution
        for (int i = 0; i < N; ++i) {
            double d = traces[i][k];
            double available = std::max(0.0, stock[i]);
            double met = std::min(d, available);
            stock[i] -= d;
            if (measured) {
                demand_total += d;
                demand_met += met;
                rep.realized_inventory += stock[i] >= 0
                                              ? inst.hold_cost * stock[i]
                                              : -inst.backorder_cost * stock[i];
            }
        }
        if (measured) {
            for (size_t v = 0; v < sol.clusters.size(); ++v) {
                auto it = sol.clusters[v].routes.find(t);
                if (it == sol.clusters[v].routes.end()) continue;
                double len = 0.0;
                for (size_t a = 0; a + 1 < it->second.size(); ++a)
                    len += inst.dist[it->second[a]][it->second[a + 1]];
                rep.realized_transport += inst.trans_cost * len;
            }
            load_total += 0.0;
        }
    }

    long measured_periods = periods - warmup;
    rep.periods_measured = measured_periods;
    rep.service_level = demand_total > 0 ? demand_met / demand_total : 1.0;
    rep.vehicle_utilization = util_tours > 0 ? util_sum / util_tours : 0.0;
    rep.overshoot_rate = rep.visits > 0 ? double(overshoot_events) / rep.visits : 0.0;
    rep.avg_overshoot = overshoot_events > 0 ? overshoot_sum / overshoot_events : 0.0;
    rep.emergency_rate = rep.tours > 0 ? double(emergency_events) / rep.tours : 0.0;
    rep.avg_emergency = emergency_events > 0 ? emergency_sum / emergency_events : 0.0;
    if (measured_periods > 0) {
        rep.realized_transport /= measured_periods;
        rep.realized_inventory /= measured_periods;
        rep.realized_emergency =
            inst.has_emergency_cost
                ? inst.emergency_cost * emergency_sum / measured_periods
                : 0.0;
    }
    (void)load_total;
    return rep;
}

}  // namespace drcirp
