#include "drcirp/routing.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <deque>
#include <map>
#include <set>

namespace drcirp {

namespace {

struct Label {
    int node = 0;
    uint64_t unreachable = 0;
    double dist = 0.0;
    double load = 0.0;
    double cost = 0.0;
    int parent = -1;
};

bool dominates(const Label& a, const Label& b) {
    return (a.unreachable & ~b.unreachable) == 0 && a.dist <= b.dist + 1e-12 &&
           a.load <= b.load + 1e-12 && a.cost <= b.cost + 1e-12;
}

}  // namespace

std::vector<EspRoute> espprc(const std::vector<std::vector<double>>& dist,
                             const std::vector<std::vector<double>>& arc_cost,
                             const EspprcConfig& cfg) {
    const int n = static_cast<int>(dist.size());  // nodes incl. warehouse
    std::vector<Label> arena;
    std::vector<std::vector<int>> bucket(n);
    std::deque<int> queue;

    arena.push_back({});  // root at the warehouse
    queue.push_back(0);

    struct Candidate {
        double cost;
        int label;
        double closing;
    };
    std::vector<Candidate> closed;

    auto try_insert = [&](Label&& lab) -> int {
        auto& bucketed = bucket[lab.node];
        if (cfg.use_dominance) {
            for (int idx : bucketed)
                if (dominates(arena[idx], lab)) return -1;
            std::vector<int> kept;
            kept.reserve(bucketed.size());
            for (int idx : bucketed)
                if (!dominates(lab, arena[idx])) kept.push_back(idx);
            bucketed = std::move(kept);
        }
        arena.push_back(std::move(lab));
        int id = static_cast<int>(arena.size()) - 1;
        bucketed.push_back(id);
        return id;
    };

    while (!queue.empty()) {
        int cur = queue.front();
        queue.pop_front();
        Label lab = arena[cur];
        if (lab.node != 0 && cfg.use_dominance) {
            // skip labels that were dominated after being queued
            bool alive = false;
            for (int idx : bucket[lab.node])
                if (idx == cur) alive = true;
            if (!alive) continue;
        }
        for (int j = 1; j < n; ++j) {
            if (j == lab.node) continue;
            if (lab.unreachable & (1ull << j)) continue;
            double a = arc_cost[lab.node][j];
            if (!std::isfinite(a)) continue;
            double d = lab.dist + dist[lab.node][j];
            if (d + dist[j][0] > cfg.max_len + 1e-9) continue;
            double ld = lab.load + (cfg.load ? (*cfg.load)[j] : 0.0);
            if (ld > cfg.load_capacity + 1e-9) continue;
            Label nxt;
            nxt.node = j;
            nxt.dist = d;
            nxt.load = ld;
            nxt.cost = lab.cost + a;
            nxt.parent = cur;
            nxt.unreachable = lab.unreachable | (1ull << j);
            for (int k = 1; k < n; ++k) {
                if (nxt.unreachable & (1ull << k)) continue;
                if (d + dist[j][k] + dist[k][0] > cfg.max_len + 1e-9 ||
                    (cfg.load && ld + (*cfg.load)[k] > cfg.load_capacity + 1e-9))
                    nxt.unreachable |= 1ull << k;
            }
            int id = try_insert(std::move(nxt));
            if (id < 0) continue;
            queue.push_back(id);
            double back = arc_cost[j][0];
            if (std::isfinite(back)) {
                double total = arena[id].cost + back + cfg.constant;
                if (total < cfg.keep_below) closed.push_back({total, id, back});
            }
        }
    }

    std::stable_sort(closed.begin(), closed.end(),
                     [](const Candidate& a, const Candidate& b) { return a.cost < b.cost; });
    std::vector<EspRoute> routes;
    std::set<std::vector<int>> seen;
    for (const Candidate& c : closed) {
        if (static_cast<int>(routes.size()) >= cfg.max_routes) break;
        EspRoute r;
        int cur = c.label;
        while (cur > 0) {
            r.nodes.push_back(arena[cur].node);
            cur = arena[cur].parent;
        }
        r.nodes.push_back(0);
        std::reverse(r.nodes.begin(), r.nodes.end());
        r.nodes.push_back(0);
        if (!seen.insert(r.nodes).second) continue;
        r.length = arena[c.label].dist + dist[arena[c.label].node][0];
        r.cost = c.cost;
        routes.push_back(std::move(r));
    }
    return routes;
}

Theorem2Eval theorem2_reduced_cost(double route_cost,
                                   const std::vector<int>& covered_retailers,
                                   const std::vector<std::vector<double>>& delta,
                                   double iota, int cycle_len) {
    Theorem2Eval out;
    out.reduced_cost = -iota;
    for (int t = 0; t < cycle_len; ++t) {
        double term = route_cost / cycle_len;
        for (int i : covered_retailers) term -= delta[i][t];
        if (term < 0.0) {
            out.reduced_cost += term;
            out.exec_mask |= 1u << t;
        }
    }
    return out;
}

RoutePricingMods default_mods(int n_nodes, int max_routes) {
    RoutePricingMods m;
    m.forbidden_arc.assign(n_nodes, std::vector<char>(n_nodes, 0));
    m.arc_credit.assign(n_nodes, std::vector<double>(n_nodes, 0.0));
    m.max_routes = max_routes;
    return m;
}

namespace {

std::vector<std::vector<double>> base_arc_costs(const Instance& inst,
                                                const RoutePricingMods& mods) {
    const int n = inst.n_retailers + 1;
    std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            a[i][j] = mods.forbidden_arc[i][j] ? kInf : -mods.arc_credit[i][j];
    return a;
}

std::vector<int> route_retailers(const std::vector<int>& nodes) {
    std::vector<int> r;
    for (int v : nodes)
        if (v != 0) r.push_back(v);
    std::sort(r.begin(), r.end());
    return r;
}

}  // namespace

std::vector<RouteColumn> generate_consistent_routes(
    const Instance& inst, const std::vector<std::vector<double>>& delta, double iota,
    const RoutePricingMods& mods, int subset_cap) {
    const int T = inst.cycle_len;
    const int n = inst.n_retailers + 1;
    if (T > subset_cap)
        throw std::invalid_argument("execution-subset enumeration cap exceeded");

    std::vector<uint32_t> subsets;
    for (uint32_t m = 1; m < (1u << T); ++m) subsets.push_back(m);
    std::stable_sort(subsets.begin(), subsets.end(), [](uint32_t a, uint32_t b) {
        int pa = std::popcount(a), pb = std::popcount(b);
        return pa != pb ? pa < pb : a < b;
    });

    std::map<std::pair<std::vector<int>, uint32_t>, RouteColumn> pool;
    for (uint32_t mask : subsets) {
        auto arc = base_arc_costs(inst, mods);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (!std::isfinite(arc[i][j])) continue;
                double c = 0.0;
                for (int t = 0; t < T; ++t)
                    if (mask & (1u << t)) {
                        c += inst.trans_cost * inst.dist[i][j] / T;
                        if (j != 0) c -= delta[j][t];
                    }
                arc[i][j] += c;
            }
        EspprcConfig cfg;
        cfg.max_len = inst.max_tour_len;
        cfg.constant = -iota;
        cfg.max_routes = mods.max_routes;
        cfg.use_dominance = mods.use_dominance;
        for (const EspRoute& r : espprc(inst.dist, arc, cfg)) {
            std::vector<int> retailers = route_retailers(r.nodes);
            if (retailers.empty()) continue;
            double trans = inst.trans_cost * r.length;
            Theorem2Eval ev = theorem2_reduced_cost(trans, retailers, delta, iota, T);
            if (ev.exec_mask == 0) continue;
            double credit = 0.0;
            for (size_t k = 0; k + 1 < r.nodes.size(); ++k)
                credit += mods.arc_credit[r.nodes[k]][r.nodes[k + 1]];
            ev.reduced_cost -= credit;
            if (ev.reduced_cost >= -1e-7) continue;
            RouteColumn col;
            col.nodes = r.nodes;
            col.length = r.length;
            col.trans_cost = trans;
            col.exec_mask = ev.exec_mask;
            col.reduced_cost = ev.reduced_cost;
            auto key = std::make_pair(retailers, ev.exec_mask);
            auto it = pool.find(key);
            if (it == pool.end() || col.reduced_cost < it->second.reduced_cost - 1e-12)
                pool[key] = std::move(col);
        }
    }
    std::vector<RouteColumn> out;
    out.reserve(pool.size());
    for (auto& [k, v] : pool) out.push_back(std::move(v));
    std::stable_sort(out.begin(), out.end(), [](const RouteColumn& a, const RouteColumn& b) {
        return a.reduced_cost < b.reduced_cost;
    });
    if (static_cast<int>(out.size()) > mods.max_routes) out.resize(mods.max_routes);
    return out;
}

std::vector<RouteColumn> generate_flexible_routes(
    const Instance& inst, const std::vector<std::vector<double>>& delta,
    const std::vector<double>& iota, const RoutePricingMods& mods) {
    const int T = inst.cycle_len;
    const int n = inst.n_retailers + 1;
    std::vector<RouteColumn> out;
    for (int t = 0; t < T; ++t) {
        auto arc = base_arc_costs(inst, mods);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (!std::isfinite(arc[i][j])) continue;
                arc[i][j] += inst.trans_cost * inst.dist[i][j] / T;
                if (j != 0) arc[i][j] -= delta[j][t];
            }
        EspprcConfig cfg;
        cfg.max_len = inst.max_tour_len;
        cfg.constant = -iota[t];
        cfg.max_routes = mods.max_routes;
        cfg.use_dominance = mods.use_dominance;
        for (const EspRoute& r : espprc(inst.dist, arc, cfg)) {
            if (route_retailers(r.nodes).empty()) continue;
            RouteColumn col;
            col.nodes = r.nodes;
            col.length = r.length;
            col.trans_cost = inst.trans_cost * r.length;
            col.exec_mask = 1u << t;
            col.reduced_cost = r.cost;
            out.push_back(std::move(col));
        }
    }
    std::stable_sort(out.begin(), out.end(), [](const RouteColumn& a, const RouteColumn& b) {
        return a.reduced_cost < b.reduced_cost;
    });
    if (static_cast<int>(out.size()) > mods.max_routes) out.resize(mods.max_routes);
    return out;
}

std::vector<int> divisors_of(int n) {
    std::vector<int> d;
    for (int k = 1; k <= n; ++k)
        if (n % k == 0) d.push_back(k);
    return d;
}

std::vector<FixedIntervalColumn> generate_fixed_interval_patterns(
    const Instance& inst, const std::vector<double>& pi, const BoundsGrid& bounds,
    FInvCache& cache, const RoutePricingMods& mods, double fleet_dual,
    const std::vector<double>* retailer_constant) {
    const int T = inst.cycle_len;
    const int n = inst.n_retailers + 1;
    std::vector<FixedIntervalColumn> out;

    for (int kappa : divisors_of(T)) {
        CyclicInterval iv(0, kappa % T, T);
        // Per-retailer optimal stationary order-up-to level for this kappa.
        std::vector<int> best_s(n, 0);
        std::vector<double> inv_cost(n, 0.0), load(n, 0.0);
        for (int j = 1; j < n; ++j) {
            IntervalCostEntry entry{j - 1, iv, -1};
            // zero duals: pure (1/T) f_inv minimization, rescaled below
            LevelRules none;
            IntervalDuals zero;
            auto [s, c] = interval_cost(entry, zero, inst, bounds, cache, nullptr);
            (void)c;
            best_s[j] = s;
            inv_cost[j] = f_inv({j - 1, iv, s}, inst, cache);
            load[j] = 0.0;
            for (int t : iv.demand_periods()) load[j] += bounds.u[j - 1][t];
        }
        auto arc = base_arc_costs(inst, mods);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (!std::isfinite(arc[i][j])) continue;
                arc[i][j] += inst.trans_cost * inst.dist[i][j] / kappa;
                if (j != 0) {
                    arc[i][j] += inv_cost[j] / kappa - pi[j - 1];
                    if (retailer_constant) arc[i][j] += (*retailer_constant)[j - 1];
                }
            }
        EspprcConfig cfg;
        cfg.max_len = inst.max_tour_len;
        cfg.load_capacity = inst.capacity;
        cfg.load = &load;
        cfg.constant = inst.vehicle_cost - fleet_dual;
        cfg.max_routes = mods.max_routes;
        cfg.use_dominance = mods.use_dominance;
        for (const EspRoute& r : espprc(inst.dist, arc, cfg)) {
            std::vector<int> retailers = route_retailers(r.nodes);
            if (retailers.empty()) continue;
            FixedIntervalColumn col;
            col.nodes = r.nodes;
            col.kappa = kappa;
            double inv_total = 0.0;
            for (int j : retailers) {
                col.levels.push_back(best_s[j]);
                inv_total += inv_cost[j];
            }
            col.pattern_cost = inst.vehicle_cost +
                               (inst.trans_cost * r.length + inv_total) / kappa;
            if (retailer_constant)
                for (int j : retailers) col.pattern_cost += (*retailer_constant)[j - 1];
            col.reduced_cost = r.cost;
            out.push_back(std::move(col));
        }
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const FixedIntervalColumn& a, const FixedIntervalColumn& b) {
                         return a.reduced_cost < b.reduced_cost;
                     });
    if (static_cast<int>(out.size()) > mods.max_routes) out.resize(mods.max_routes);
    return out;
}

}  // namespace drcirp
