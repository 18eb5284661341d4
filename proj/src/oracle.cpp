#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>

#include "drcirp/ambiguity.hpp"
#include "drcirp/harness.hpp"
#include "drcirp/inventory.hpp"
#include "drcirp/routing.hpp"

namespace drcirp {

namespace {

constexpr double kBig = std::numeric_limits<double>::infinity();

// Shortest tour through the given retailers (brute-force permutations).
double tsp_length(const Instance& inst, const std::vector<int>& retailers) {
    if (retailers.empty()) return 0.0;
    std::vector<int> order = retailers;
    std::sort(order.begin(), order.end());
    double best = kBig;
    do {
        double len = inst.dist[0][order.front() + 1];
        for (size_t k = 0; k + 1 < order.size(); ++k)
            len += inst.dist[order[k] + 1][order[k + 1] + 1];
        len += inst.dist[order.back() + 1][0];
        best = std::min(best, len);
    } while (std::next_permutation(order.begin(), order.end()));
    return best;
}

std::vector<int> tsp_tour(const Instance& inst, const std::vector<int>& retailers) {
    if (retailers.empty()) return {};
    std::vector<int> order = retailers, best_order = retailers;
    std::sort(order.begin(), order.end());
    std::sort(best_order.begin(), best_order.end());
    double best = kBig;
    do {
        double len = inst.dist[0][order.front() + 1];
        for (size_t k = 0; k + 1 < order.size(); ++k)
            len += inst.dist[order[k] + 1][order[k + 1] + 1];
        len += inst.dist[order.back() + 1][0];
        if (len < best - 1e-15) {
            best = len;
            best_order = order;
        }
    } while (std::next_permutation(order.begin(), order.end()));
    std::vector<int> seq{0};
    for (int i : best_order) seq.push_back(i + 1);
    seq.push_back(0);
    return seq;
}

// One admissible (levels, cost, per-period worst-case delivery) choice for a
// retailer and visit set.
struct LevelChoice {
    std::vector<int> levels;
    double inv_cost = 0.0;              // sum f_inv / T
    std::vector<double> load;           // per period
};

struct RetailerOptions {
    std::vector<int> visits;
    std::vector<LevelChoice> choices;  // sorted by inv_cost
};

void enumerate_levels(const Instance& inst, const BoundsGrid& bounds, FInvCache& cache,
                      int retailer, const std::vector<int>& visits, int max_level,
                      std::vector<LevelChoice>& out) {
    const int T = inst.cycle_len;
    ReplenishmentPlan plan;
    plan.visits = visits;
    plan.levels.assign(visits.size(), 0);
    auto intervals = plan.intervals(T);
    std::vector<int> bound(visits.size());
    std::vector<double> slack(visits.size());  // sum L over interval k
    for (size_t k = 0; k < visits.size(); ++k) {
        bound[k] = std::min(max_level, max_order_up_to({retailer, intervals[k], 0}, inst));
        double l = 0.0;
        for (int t : intervals[k].demand_periods()) l += bounds.l[retailer][t];
        slack[k] = l;
    }
    std::vector<int> lv(visits.size(), 0);
    while (true) {
        // no-overshoot on every interval, including the wrap-around
        bool ok = true;
        for (size_t k = 0; k < visits.size() && ok; ++k) {
            int nxt = static_cast<int>((k + 1) % visits.size());
            if (lv[nxt] - lv[k] + slack[k] < -1e-9) ok = false;
        }
        if (ok) {
            LevelChoice ch;
            ch.levels = lv;
            ch.load.assign(T, 0.0);
            double inv = 0.0;
            for (size_t k = 0; k < visits.size(); ++k) {
                inv += f_inv({retailer, intervals[k], lv[k]}, inst, cache);
                int nxt = static_cast<int>((k + 1) % visits.size());
                double u = 0.0;
                for (int t : intervals[k].demand_periods()) u += bounds.u[retailer][t];
                ch.load[intervals[k].end()] += lv[nxt] - lv[k] + u;
            }
            ch.inv_cost = inv / T;
            out.push_back(std::move(ch));
        }
        // odometer
        size_t k = 0;
        while (k < lv.size()) {
            if (lv[k] < bound[k]) {
                ++lv[k];
                break;
            }
            lv[k] = 0;
            ++k;
        }
        if (k == lv.size()) break;
    }
    std::stable_sort(out.begin(), out.end(), [](const LevelChoice& a, const LevelChoice& b) {
        return a.inv_cost < b.inv_cost;
    });
}

// Best joint level assignment for a cluster under the per-period capacity.
double best_levels(const Instance& inst, const std::vector<RetailerOptions>& opts,
                   std::vector<int>& pick, double budget) {
    const int T = inst.cycle_len;
    const size_t n = opts.size();
    std::vector<double> tail_min(n + 1, 0.0);
    for (size_t k = n; k-- > 0;) {
        if (opts[k].choices.empty()) return kBig;
        tail_min[k] = tail_min[k + 1] + opts[k].choices.front().inv_cost;
    }
    std::vector<double> residual(T, inst.capacity);
    std::vector<int> cur(n, -1);
    double best = budget;
    std::vector<int> best_pick;
    // depth-first with cost bound over cost-sorted choice lists
    std::vector<size_t> idx(n, 0);
    double acc = 0.0;
    size_t depth = 0;
    while (true) {
        if (depth == n) {
            if (acc < best - 1e-12) {
                best = acc;
                best_pick.assign(cur.begin(), cur.end());
            }
            --depth;
            goto unwind;
        }
        {
            bool advanced = false;
            for (size_t& j = idx[depth]; j < opts[depth].choices.size(); ++j) {
                const LevelChoice& ch = opts[depth].choices[j];
                if (acc + ch.inv_cost + tail_min[depth + 1] >= best - 1e-12) break;
                bool fits = true;
                for (int t = 0; t < T && fits; ++t)
                    if (ch.load[t] > residual[t] + 1e-9) fits = false;
                if (!fits) continue;
                for (int t = 0; t < T; ++t) residual[t] -= ch.load[t];
                acc += ch.inv_cost;
                cur[depth] = static_cast<int>(j);
                ++j;
                ++depth;
                if (depth < n) idx[depth] = 0;
                advanced = true;
                break;
            }
            if (advanced) continue;
        }
        if (depth == 0) break;
        --depth;
    unwind: {
            const LevelChoice& ch = opts[depth].choices[cur[depth]];
            for (int t = 0; t < T; ++t) residual[t] += ch.load[t];
            acc -= ch.inv_cost;
            cur[depth] = -1;
        }
        continue;
    }
    if (best_pick.empty()) return kBig;
    pick = best_pick;
    return best;
}

struct ClusterBest {
    double cost = kBig;
    std::vector<std::vector<int>> visits;  // per member
    std::vector<std::vector<int>> levels;
    std::map<int, std::vector<int>> routes;
    double transport = 0.0;
    double inventory = 0.0;
    int kappa = 0;
};

ClusterBest best_cluster_service(const Instance& inst, const BoundsGrid& bounds,
                                 FInvCache& cache, const std::vector<int>& members,
                                 Policy policy, const OracleCaps& caps,
                                 const std::vector<double>& retailer_constant) {
    const int T = inst.cycle_len;
    ClusterBest best;
    double const_part = inst.vehicle_cost;
    for (int i : members) const_part += retailer_constant[i];

    // Superset-minimal tour cost per needed subset of the cluster.
    const size_t m = members.size();
    std::vector<double> sub_len(1 << m, kBig);
    std::vector<std::vector<int>> sub_tour(1 << m);
    for (uint32_t s = 0; s < (1u << m); ++s) {
        std::vector<int> set;
        for (size_t k = 0; k < m; ++k)
            if (s & (1u << k)) set.push_back(members[k]);
        double len = tsp_length(inst, set);
        if (len <= inst.max_tour_len + 1e-9) {
            sub_len[s] = len;
            sub_tour[s] = tsp_tour(inst, set);
        }
    }
    std::vector<double> cover_len = sub_len;
    std::vector<uint32_t> cover_arg(1 << m);
    for (uint32_t s = 0; s < (1u << m); ++s) cover_arg[s] = s;
    for (size_t k = 0; k < m; ++k)
        for (uint32_t s = 0; s < (1u << m); ++s)
            if (!(s & (1u << k)) && cover_len[s | (1u << k)] < cover_len[s]) {
                cover_len[s] = cover_len[s | (1u << k)];
                cover_arg[s] = cover_arg[s | (1u << k)];
            }

    if (policy == Policy::FixedInterval) {
        if (!sub_tour.empty() && sub_len[(1u << m) - 1] == kBig) return best;
        double len = sub_len[(1u << m) - 1];
        for (int kappa : divisors_of(T)) {
            CyclicInterval iv(0, kappa % T, T);
            double load = 0.0, inv = 0.0;
            std::vector<int> levels;
            bool ok = true;
            for (int i : members) {
                int hi = std::min(caps.max_level, max_order_up_to({i, iv, 0}, inst));
                double bc = kBig;
                int bs = -1;
                for (int s = 0; s <= hi; ++s) {
                    double c = f_inv({i, iv, s}, inst, cache);
                    if (c < bc - 1e-12) {
                        bc = c;
                        bs = s;
                    }
                }
                if (bs < 0) ok = false;
                levels.push_back(bs);
                inv += bc / kappa;
                double u = 0.0;
                for (int t : iv.demand_periods()) u += bounds.u[i][t];
                load += u;
            }
            if (!ok || load > inst.capacity + 1e-9) continue;
            double cost = const_part + inst.trans_cost * len / kappa + inv;
            if (cost < best.cost - 1e-12) {
                best.cost = cost;
                best.kappa = kappa;
                best.transport = inst.trans_cost * len / kappa;
                best.inventory = inv;
                best.visits.clear();
                best.levels.clear();
                best.routes.clear();
                for (size_t k = 0; k < m; ++k) {
                    std::vector<int> vis, lv;
                    for (int t = 0; t < T; t += kappa) {
                        vis.push_back(t);
                        lv.push_back(levels[k]);
                    }
                    best.visits.push_back(vis);
                    best.levels.push_back(lv);
                }
                for (int t = 0; t < T; t += kappa) best.routes[t] = sub_tour[(1u << m) - 1];
            }
        }
        return best;
    }

    // visit-set combinations per member
    std::vector<uint32_t> visit_sets;
    for (uint32_t w = 1; w < (1u << T); ++w) visit_sets.push_back(w);

    // level options per member and visit set
    std::vector<std::vector<RetailerOptions>> options(m);
    for (size_t k = 0; k < m; ++k) {
        for (uint32_t w : visit_sets) {
            RetailerOptions opt;
            for (int t = 0; t < T; ++t)
                if (w & (1u << t)) opt.visits.push_back(t);
            enumerate_levels(inst, bounds, cache, members[k], opt.visits, caps.max_level,
                             opt.choices);
            options[k].push_back(std::move(opt));
        }
    }

    std::vector<size_t> combo(m, 0);
    while (true) {
        // transport for this combination of visit sets
        double trans = 0.0;
        bool feasible = true;
        std::map<int, std::vector<int>> routes;
        if (policy == Policy::Consistent) {
            uint32_t full = (1u << m) - 1;
            if (sub_len[full] == kBig) feasible = false;
            uint32_t exec = 0;
            for (size_t k = 0; k < m && feasible; ++k)
                exec |= options[k][combo[k]].visits.empty()
                            ? 0u
                            : [&] {
                                  uint32_t e = 0;
                                  for (int t : options[k][combo[k]].visits) e |= 1u << t;
                                  return e;
                              }();
            if (feasible) {
                int execs = std::popcount(exec);
                trans = inst.trans_cost * sub_len[full] * execs / T;
                for (int t = 0; t < T; ++t)
                    if (exec & (1u << t)) routes[t] = sub_tour[full];
            }
        } else {
            for (int t = 0; t < T && feasible; ++t) {
                uint32_t need = 0;
                for (size_t k = 0; k < m; ++k) {
                    const auto& vis = options[k][combo[k]].visits;
                    if (std::find(vis.begin(), vis.end(), t) != vis.end()) need |= 1u << k;
                }
                if (need == 0) continue;
                if (cover_len[need] == kBig) {
                    feasible = false;
                    break;
                }
                trans += inst.trans_cost * cover_len[need] / T;
                routes[t] = sub_tour[cover_arg[need]];
            }
        }
        if (feasible && const_part + trans < best.cost - 1e-12) {
            std::vector<RetailerOptions> opts;
            for (size_t k = 0; k < m; ++k) opts.push_back(options[k][combo[k]]);
            std::vector<int> pick;
            double inv = best_levels(inst, opts, pick, best.cost - const_part - trans);
            if (inv < kBig) {
                double cost = const_part + trans + inv;
                if (cost < best.cost - 1e-12) {
                    best.cost = cost;
                    best.transport = trans;
                    best.inventory = inv;
                    best.routes = routes;
                    best.visits.clear();
                    best.levels.clear();
                    for (size_t k = 0; k < m; ++k) {
                        best.visits.push_back(opts[k].visits);
                        best.levels.push_back(opts[k].choices[pick[k]].levels);
                    }
                }
            }
        }
        // next combination
        size_t k = 0;
        while (k < m) {
            if (++combo[k] < options[k].size()) break;
            combo[k] = 0;
            ++k;
        }
        if (k == m) break;
    }
    return best;
}

void enumerate_partitions(int n, int max_parts,
                          std::vector<std::vector<std::vector<int>>>& out) {
    std::vector<std::vector<int>> parts;
    std::function<void(int)> rec = [&](int i) {
        if (i == n) {
            out.push_back(parts);
            return;
        }
        for (auto& p : parts) {
            p.push_back(i);
            rec(i + 1);
            p.pop_back();
        }
        if (static_cast<int>(parts.size()) < max_parts) {
            parts.push_back({i});
            rec(i + 1);
            parts.pop_back();
        }
    };
    rec(0);
}

}  // namespace

Solution brute_force_solve(const Instance& inst_in, Policy policy, FInvCache& cache,
                           const OracleCaps& caps) {
    if (inst_in.n_retailers > caps.max_retailers || inst_in.cycle_len > caps.max_periods)
        throw std::invalid_argument("oracle caps exceeded");
    const bool fixed = policy == Policy::FixedInterval;
    Instance inst = fixed ? aggregate_stationary(inst_in) : inst_in;
    BoundsGrid bounds = compute_bounds(inst);
    const int N = inst.n_retailers;

    std::vector<double> retailer_constant(N, 0.0);
    double emergency_constant = 0.0;
    if (inst.has_emergency_cost && inst.emergency_cost != 0.0) {
        for (int i = 0; i < N; ++i) {
            double mu = 0.0;
            for (int t = 0; t < inst.cycle_len; ++t) mu += inst.cell(i, t).mean;
            retailer_constant[i] = -inst.emergency_cost * mu / inst.cycle_len;
        }
        emergency_constant = inst.emergency_cost * inst.capacity * inst.n_vehicles;
    }

    std::vector<std::vector<std::vector<int>>> partitions;
    enumerate_partitions(N, inst.n_vehicles, partitions);

    std::map<std::vector<int>, ClusterBest> memo;
    Solution best;
    best.status = SolveStatus::Infeasible;
    best.policy = policy;
    double best_cost = kBig;

    for (const auto& partition : partitions) {
        double total = emergency_constant;
        bool ok = true;
        std::vector<const ClusterBest*> chosen;
        for (const auto& members : partition) {
            auto it = memo.find(members);
            if (it == memo.end())
                it = memo.emplace(members,
                                  best_cluster_service(inst, bounds, cache, members, policy,
                                                       caps, retailer_constant))
                         .first;
            if (it->second.cost == kBig) {
                ok = false;
                break;
            }
            total += it->second.cost;
            chosen.push_back(&it->second);
        }
        if (!ok || total >= best_cost - 1e-12) continue;
        best_cost = total;
        best.status = SolveStatus::Optimal;
        best.objective = total;
        best.gap = 0.0;
        best.lower_bound = total;
        best.cost_vehicle = inst.vehicle_cost * partition.size();
        best.cost_transport = 0.0;
        best.cost_inventory = 0.0;
        best.cost_emergency = emergency_constant;
        best.clusters.clear();
        for (size_t c = 0; c < partition.size(); ++c) {
            const ClusterBest& cb = *chosen[c];
            ClusterSolution cs;
            cs.retailers = partition[c];
            cs.routes = cb.routes;
            cs.kappa = cb.kappa;
            cs.cost = cb.cost;
            for (size_t k = 0; k < partition[c].size(); ++k) {
                ReplenishmentPlan plan;
                plan.visits = cb.visits[k];
                plan.levels = cb.levels[k];
                cs.plans.push_back(std::move(plan));
                best.cost_emergency += retailer_constant[partition[c][k]];
            }
            best.cost_transport += cb.transport;
            best.cost_inventory += cb.inventory;
            best.clusters.push_back(std::move(cs));
        }
    }
    return best;
}

}  // namespace drcirp
