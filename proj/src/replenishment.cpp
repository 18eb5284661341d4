#include "drcirp/replenishment.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <queue>
#include <set>

namespace drcirp {

namespace {

constexpr double kBig = std::numeric_limits<double>::infinity();

double sum_over(const CyclicInterval& iv, const std::vector<double>& row) {
    double s = 0.0;
    for (int t : iv.demand_periods()) s += row[t];
    return s;
}

// Dual-adjusted convex level cost of one interval:
//   g(s) = (1/T) f_inv(s) + (psi_start - psi_end) s.
struct LevelCost {
    const Instance* inst;
    FInvCache* cache;
    int retailer;
    CyclicInterval iv;
    double dual;  // psi_start - psi_end

    double raw(int s) const { return f_inv({retailer, iv, s}, *inst, *cache); }
    double g(int s) const { return raw(s) / inst->cycle_len + dual * s; }
};

// Exact integer minimizer of a convex g over [lo, hi]; golden-section probes
// shrink the range to at most four integers which are then swept.
std::pair<int, double> golden_min(const LevelCost& ev, int lo, int hi) {
    static const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    double L = lo, R = hi;
    if (R - L > 3.0) {
        double s1 = R - (R - L) / phi, s2 = L + (R - L) / phi;
        double c1 = ev.g(static_cast<int>(std::floor(s1)));
        double c2 = ev.g(static_cast<int>(std::ceil(s2)));
        while (R - L > 3.0) {
            if (c1 < c2) {
                R = std::ceil(s2);
                s2 = s1;
                s1 = R - (R - L) / phi;
            } else {
                L = std::floor(s1);
                s1 = s2;
                s2 = L + (R - L) / phi;
            }
            c1 = ev.g(static_cast<int>(std::floor(s1)));
            c2 = ev.g(static_cast<int>(std::ceil(s2)));
        }
    }
    int best_s = -1;
    double best = kBig;
    for (int s = static_cast<int>(std::ceil(L)); s <= static_cast<int>(std::floor(R)); ++s) {
        double c = ev.g(s);
        if (c < best - 1e-15) {
            best = c;
            best_s = s;
        }
    }
    return {best_s, best};
}

// Minimizer restricted by forced / forbidden level values at the interval
// start period. Convexity reduces the forbidden case to the nearest allowed
// level on each side of the unconstrained optimum.
std::pair<int, double> constrained_min(const LevelCost& ev, int lo, int hi,
                                       const LevelRules* rules, int period) {
    if (lo > hi) return {-1, kBig};
    if (rules && rules->forced[period] >= 0) {
        int s = rules->forced[period];
        if (s < lo || s > hi || !rules->allows(period, s)) return {-1, kBig};
        return {s, ev.g(s)};
    }
    auto [s, c] = golden_min(ev, lo, hi);
    if (s < 0) return {-1, kBig};
    if (!rules || rules->allows(period, s)) return {s, c};
    int best_s = -1;
    double best = kBig;
    for (int d = s - 1; d >= lo; --d)
        if (rules->allows(period, d)) {
            double cd = ev.g(d);
            if (cd < best) best = cd, best_s = d;
            break;
        }
    for (int d = s + 1; d <= hi; ++d)
        if (rules->allows(period, d)) {
            double cd = ev.g(d);
            if (cd < best) best = cd, best_s = d;
            break;
        }
    return {best_s, best};
}

}  // namespace

bool LevelRules::allows(int period, int level) const {
    if (forced.empty()) return true;
    if (forced[period] >= 0 && forced[period] != level) return false;
    for (int f : forbidden[period])
        if (f == level) return false;
    return true;
}

bool LevelRules::unrestricted(int period) const {
    if (forced.empty()) return true;
    return forced[period] < 0 && forbidden[period].empty();
}

std::pair<int, double> interval_cost(IntervalCostEntry& entry, const IntervalDuals& duals,
                                     const Instance& inst, const BoundsGrid& bounds,
                                     FInvCache& cache, const LevelRules* rules) {
    LevelCost ev{&inst, &cache, entry.retailer, entry.interval,
                 duals.psi_start - duals.psi_end};
    int hi = max_order_up_to({entry.retailer, entry.interval, 0}, inst);
    auto [s, c] = constrained_min(ev, 0, hi, rules, entry.interval.start());
    if (s < 0) return {-1, kBig};
    if (entry.zero_dual_s < 0 && duals.psi_start == duals.psi_end &&
        (!rules || rules->unrestricted(entry.interval.start())))
        entry.zero_dual_s = s;
    double constant =
        duals.delta_start + duals.psi_end * sum_over(entry.interval, bounds.u[entry.retailer]);
    return {s, c + constant};
}

std::pair<int, double> warm_update(IntervalCostEntry& entry, const IntervalDuals& duals,
                                   const Instance& inst, const BoundsGrid& bounds,
                                   FInvCache& cache, const LevelRules* rules) {
    const int start = entry.interval.start();
    if (rules && !rules->unrestricted(start))
        return interval_cost(entry, duals, inst, bounds, cache, rules);
    if (entry.zero_dual_s < 0) {
        IntervalDuals zero;
        interval_cost(entry, zero, inst, bounds, cache, rules);
        if (entry.zero_dual_s < 0) return {-1, kBig};
    }
    LevelCost ev{&inst, &cache, entry.retailer, entry.interval,
                 duals.psi_start - duals.psi_end};
    const double dual = ev.dual;
    const double invT = 1.0 / inst.cycle_len;
    const int hi = max_order_up_to({entry.retailer, entry.interval, 0}, inst);
    const std::array<int, 4> base{entry.retailer, entry.interval.start(),
                                  entry.interval.end(), 0};

    int s_star = std::min(entry.zero_dual_s, hi);
    bool done = false;
    while (!done) {
        if (s_star == 0 && dual > 0) break;
        if (s_star == hi && dual <= 0) break;
        int s_next = dual > 0 ? s_star - 1 : s_star + 1;
        std::array<int, 4> key = base, key_star = base;
        key[3] = s_next;
        key_star[3] = s_star;
        double f_next, f_star;
        if (cache.lookup(key, f_next) && cache.lookup(key_star, f_star)) {
            double diff = invT * (f_next - f_star);
            if (diff >= std::abs(dual)) {
                done = true;  // moving further can only worsen the total
            } else if (diff <= 1e-12 || std::abs(dual) <= 5.0 * diff) {
                s_star = s_next;
            } else {
                // Optimum is far from the anchor; fall back to the search.
                return interval_cost(entry, duals, inst, bounds, cache, rules);
            }
        } else {
            ev.raw(s_next);  // solve and cache, then re-test
            ev.raw(s_star);
        }
    }
    double constant =
        duals.delta_start + duals.psi_end * sum_over(entry.interval, bounds.u[entry.retailer]);
    return {s_star, ev.g(s_star) + constant};
}

double overshoot_slack(const ReplenishmentPlan& plan, const CyclicInterval& iv,
                       const std::vector<double>& l_row) {
    return plan.level_at(iv.end()) - plan.level_at(iv.start()) + sum_over(iv, l_row);
}

ChainResult chain_dp(const std::vector<CyclicInterval>& chain, int retailer,
                     const PlanDuals& duals, const Instance& inst,
                     const BoundsGrid& bounds, FInvCache& cache, bool cyclic,
                     const LevelRules* rules) {
    ChainResult res;
    const int k = static_cast<int>(chain.size());
    if (k == 0) return res;
    const double invT = 1.0 / inst.cycle_len;

    // Per-stage data: admissible levels, stage cost per level, slack bound.
    std::vector<int> max_s(k);
    std::vector<double> slack(k);  // sum of L over the interval
    std::vector<std::vector<double>> cost(k);
    for (int j = 0; j < k; ++j) {
        const CyclicInterval& iv = chain[j];
        max_s[j] = max_order_up_to({retailer, iv, 0}, inst);
        slack[j] = sum_over(iv, bounds.l[retailer]);
        cost[j].assign(max_s[j] + 1, kBig);
        double constant = duals.delta[iv.start()] +
                          duals.psi[iv.end()] * sum_over(iv, bounds.u[retailer]);
        double dual = duals.psi[iv.start()] - duals.psi[iv.end()];
        for (int s = 0; s <= max_s[j]; ++s) {
            if (rules && !rules->allows(iv.start(), s)) continue;
            cost[j][s] =
                invT * f_inv({retailer, iv, s}, inst, cache) + dual * s + constant;
        }
    }

    auto run_linear = [&](int s0_min, int s0_max, std::vector<int>* out_levels,
                          int wrap_cap) -> double {
        // Forward DP with prefix minima: stage j holds the best cost of
        // levels s_0..s_j with s_{j+1} >= s_j - slack_j.
        std::vector<std::vector<double>> f(k);
        std::vector<std::vector<int>> arg(k);
        f[0].assign(max_s[0] + 1, kBig);
        for (int s = std::max(0, s0_min); s <= std::min(max_s[0], s0_max); ++s)
            f[0][s] = cost[0][s];
        for (int j = 1; j < k; ++j) {
            // prefix_min[v] = min over s' <= v of f[j-1][s']
            std::vector<double> prefix(max_s[j - 1] + 1, kBig);
            std::vector<int> prefix_arg(max_s[j - 1] + 1, -1);
            double best = kBig;
            int best_arg = -1;
            for (int v = 0; v <= max_s[j - 1]; ++v) {
                if (f[j - 1][v] < best) best = f[j - 1][v], best_arg = v;
                prefix[v] = best;
                prefix_arg[v] = best_arg;
            }
            f[j].assign(max_s[j] + 1, kBig);
            arg[j].assign(max_s[j] + 1, -1);
            for (int s = 0; s <= max_s[j]; ++s) {
                if (cost[j][s] == kBig) continue;
                int cap = static_cast<int>(std::floor(s + slack[j - 1] + 1e-9));
                cap = std::min(cap, max_s[j - 1]);
                if (cap < 0) continue;
                if (prefix[cap] == kBig) continue;
                f[j][s] = prefix[cap] + cost[j][s];
                arg[j][s] = prefix_arg[cap];
            }
        }
        int last_cap = max_s[k - 1];
        if (wrap_cap >= 0) last_cap = std::min(last_cap, wrap_cap);
        double best = kBig;
        int best_s = -1;
        for (int s = 0; s <= last_cap; ++s)
            if (f[k - 1][s] < best) best = f[k - 1][s], best_s = s;
        if (out_levels && best_s >= 0) {
            out_levels->assign(k, -1);
            (*out_levels)[k - 1] = best_s;
            for (int j = k - 1; j > 0; --j) (*out_levels)[j - 1] = arg[j][(*out_levels)[j]];
        }
        return best;
    };

    if (!cyclic) {
        std::vector<int> levels;
        double best = run_linear(0, max_s[0], &levels, -1);
        if (best == kBig) return res;
        res.feasible = true;
        res.cost = best;
        res.levels = std::move(levels);
        return res;
    }

    // Cyclic chain: fix the opening level, demand the closing level to obey
    // the wrap-around constraint s_0 >= s_{k-1} - slack_{k-1}.
    double best = kBig;
    std::vector<int> best_levels;
    for (int v = 0; v <= max_s[0]; ++v) {
        if (cost[0][v] == kBig) continue;
        std::vector<int> levels;
        int wrap_cap = static_cast<int>(std::floor(v + slack[k - 1] + 1e-9));
        double c = k == 1 ? cost[0][v]
                          : run_linear(v, v, &levels, wrap_cap);
        if (k == 1) {
            // single self-interval: wrap constraint is s_0 >= s_0 - slack, free
            levels = {v};
        }
        if (c < best - 1e-15) {
            best = c;
            best_levels = std::move(levels);
        }
    }
    if (best == kBig) return res;
    res.feasible = true;
    res.cost = best;
    res.levels = std::move(best_levels);
    return res;
}

namespace {

// Effective arc table of the temporal pricing graph under enforced and
// forbidden interval sets. Enforced chains collapse into super-arcs whose
// joint levels come from the chain DP.
struct ArcEval {
    double cost = kBig;
    std::vector<std::pair<int, int>> visit_levels;  // (period, level) owned
};

struct ArcTable {
    int T = 0;
    std::vector<ArcEval> entry;  // T*T, (start,end)
    bool infeasible = false;
    bool fixed_full_cycle = false;
    ArcEval full_cycle;

    ArcEval& at(int a, int b) { return entry[a * T + b]; }
    const ArcEval& at(int a, int b) const { return entry[a * T + b]; }
};

// Periods strictly inside the cyclic interval (a,b).
bool strictly_inside(int t, int a, int b, int T) {
    CyclicInterval iv(a, b, T);
    if (!iv.contains(t)) return false;
    return t != a && !(iv.steps_between(a, t) == iv.len());
}

std::vector<std::vector<int>> link_chains(const std::vector<std::pair<int, int>>& enforced,
                                          int T, bool& conflict, bool& full_cycle) {
    conflict = false;
    full_cycle = false;
    std::map<int, int> succ;
    std::set<int> starts, ends;
    for (auto [a, b] : enforced) {
        if (succ.count(a)) {
            conflict = true;
            return {};
        }
        succ[a] = b;
    }
    // Overlap check: no enforced interval may start strictly inside another.
    for (auto [a, b] : enforced)
        for (auto [a2, b2] : enforced) {
            if (a == a2 && b == b2) continue;
            if (strictly_inside(a2, a, b, T)) {
                conflict = true;
                return {};
            }
        }
    std::set<int> is_end;
    for (auto [a, b] : enforced) is_end.insert(b);
    std::vector<std::vector<int>> chains;
    std::set<int> used;
    for (auto [a, b] : enforced) {
        (void)b;
        if (used.count(a)) continue;
        if (is_end.count(a) && succ.count(a)) continue;  // interior of a chain
        // walk the chain from a
        std::vector<int> nodes{a};
        used.insert(a);
        int cur = a;
        while (succ.count(cur)) {
            int nxt = succ.at(cur);
            nodes.push_back(nxt);
            if (nxt == nodes.front()) break;  // closed cycle
            if (used.count(nxt)) { conflict = true; return {}; }
            used.insert(nxt);
            cur = nxt;
        }
        chains.push_back(std::move(nodes));
    }
    if (used.size() != succ.size()) {
        // Some enforced start was not reached from any chain head, so a
        // closed subcycle exists. Legal only when it is the whole plan.
        if (!chains.empty()) {
            conflict = true;
            return {};
        }
        std::vector<int> nodes;
        int a0 = enforced.front().first;
        nodes.push_back(a0);
        int cur = a0;
        while (true) {
            int nxt = succ.at(cur);
            if (nxt == a0) break;
            nodes.push_back(nxt);
            cur = nxt;
            if (nodes.size() > succ.size()) { conflict = true; return {}; }
        }
        nodes.push_back(a0);
        if (nodes.size() != succ.size() + 1) {
            conflict = true;  // more than one closed subcycle
            return {};
        }
        full_cycle = true;
        chains.push_back(std::move(nodes));
    }
    return chains;
}

ArcTable build_arc_table(int retailer, const PlanDuals& duals, const Instance& inst,
                         const BoundsGrid& bounds, FInvCache& cache,
                         const std::vector<std::pair<int, int>>& enforced,
                         const std::vector<std::pair<int, int>>& forbidden,
                         const LevelRules* rules,
                         std::map<std::pair<int, int>, IntervalCostEntry>& anchors) {
    const int T = inst.cycle_len;
    ArcTable tab;
    tab.T = T;
    tab.entry.assign(static_cast<size_t>(T) * T, {});

    bool conflict = false, closed = false;
    auto chains = link_chains(enforced, T, conflict, closed);
    if (conflict) {
        tab.infeasible = true;
        return tab;
    }

    if (closed) {
        // The enforced intervals already fix the whole plan.
        if (chains.size() != 1) {
            tab.infeasible = true;
            return tab;
        }
        std::vector<int> nodes = chains.front();  // c0 ... c0
        std::vector<CyclicInterval> ivs;
        double span = 0;
        for (size_t j = 0; j + 1 < nodes.size(); ++j) {
            ivs.emplace_back(nodes[j], nodes[j + 1], T);
            span += ivs.back().len();
        }
        if (static_cast<int>(span) != T) {
            tab.infeasible = true;
            return tab;
        }
        for (auto [a, b] : forbidden)
            for (const auto& iv : ivs)
                if (iv.start() == a && iv.end() == b) {
                    tab.infeasible = true;
                    return tab;
                }
        ChainResult cr =
            chain_dp(ivs, retailer, duals, inst, bounds, cache, /*cyclic=*/true, rules);
        if (!cr.feasible) {
            tab.infeasible = true;
            return tab;
        }
        tab.fixed_full_cycle = true;
        tab.full_cycle.cost = cr.cost;
        for (size_t j = 0; j + 1 < nodes.size(); ++j)
            tab.full_cycle.visit_levels.push_back({nodes[j], cr.levels[j]});
        return tab;
    }

    std::set<int> chain_members, chain_heads;
    for (const auto& ch : chains) {
        chain_heads.insert(ch.front());
        for (int t : ch) chain_members.insert(t);
    }
    std::set<std::pair<int, int>> banned(forbidden.begin(), forbidden.end());

    auto arc_conflicts = [&](int a, int b) {
        for (const auto& ch : chains) {
            for (int c : ch)
                if (strictly_inside(c, a, b, T)) return true;
            for (size_t j = 0; j < ch.size(); ++j) {
                if (a == ch[j]) return true;                   // must leave via the chain
                if (b == ch[j] && j > 0) return true;          // may only enter at the head
            }
        }
        return false;
    };

    for (int a = 0; a < T; ++a) {
        for (int b = 0; b < T; ++b) {
            if (banned.count({a, b})) continue;
            if (arc_conflicts(a, b)) continue;
            CyclicInterval iv(a, b, T);
            auto key = std::make_pair(a, b);
            auto it = anchors.find(key);
            if (it == anchors.end())
                it = anchors.emplace(key, IntervalCostEntry{retailer, iv, -1}).first;
            IntervalDuals d{duals.psi[a], duals.psi[b], duals.delta[a]};
            auto [s, c] = warm_update(it->second, d, inst, bounds, cache, rules);
            if (s < 0) continue;
            ArcEval& e = tab.at(a, b);
            e.cost = c;
            e.visit_levels = {{a, s}};
        }
    }

    // Category-1 super-arcs: traverse a chain and the free interval that
    // follows it, with levels optimized jointly.
    for (const auto& ch : chains) {
        const int head = ch.front(), tail = ch.back();
        // e == head is allowed: the super-arc then closes the cycle through
        // this chain alone and acts as the wrapping self-entry.
        for (int e = 0; e < T; ++e) {
            if (banned.count({tail, e})) continue;
            if (chain_members.count(e) && !chain_heads.count(e)) continue;
            CyclicInterval tail_iv(tail, e, T);
            bool crosses = false;
            for (const auto& ch2 : chains)
                for (int c : ch2)
                    if (strictly_inside(c, tail, e, T)) crosses = true;
            if (crosses) continue;
            double span = tail_iv.len();
            std::vector<CyclicInterval> ivs;
            for (size_t j = 0; j + 1 < ch.size(); ++j) {
                ivs.emplace_back(ch[j], ch[j + 1], T);
                span += ivs.back().len();
            }
            if (span > T) continue;  // super-arc longer than the cycle
            ivs.push_back(tail_iv);
            ChainResult cr = chain_dp(ivs, retailer, duals, inst, bounds, cache,
                                      /*cyclic=*/false, rules);
            if (!cr.feasible) continue;
            ArcEval& ev = tab.at(head, e);
            ev.cost = cr.cost;
            ev.visit_levels.clear();
            for (size_t j = 0; j < ch.size(); ++j)
                ev.visit_levels.push_back({ch[j], cr.levels[j]});
        }
    }
    return tab;
}

struct RelaxedResult {
    bool found = false;
    double arc_cost = 0.0;
    std::vector<std::pair<int, int>> arcs;  // (start,end) of used table entries
};

// Minimum-cost tiling of the cycle by table arcs: every plan has exactly one
// wrapping arc (start >= end); the remainder is a forward path.
RelaxedResult solve_cycle(const ArcTable& tab) {
    const int T = tab.T;
    RelaxedResult best;
    double best_cost = kBig;
    for (int a = 0; a < T; ++a) {
        for (int b = 0; b <= a; ++b) {
            const ArcEval& wrap = tab.at(a, b);
            if (wrap.cost == kBig) continue;
            if (a == b) {
                if (wrap.cost < best_cost - 1e-15) {
                    best_cost = wrap.cost;
                    best.found = true;
                    best.arc_cost = wrap.cost;
                    best.arcs = {{a, b}};
                }
                continue;
            }
            // forward DP from b to a
            std::vector<double> dp(T, kBig);
            std::vector<int> pred(T, -1);
            dp[b] = 0.0;
            for (int t = b + 1; t <= a; ++t) {
                for (int u = b; u < t; ++u) {
                    if (dp[u] == kBig) continue;
                    const ArcEval& e = tab.at(u, t);
                    if (e.cost == kBig) continue;
                    double c = dp[u] + e.cost;
                    if (c < dp[t] - 1e-15) {
                        dp[t] = c;
                        pred[t] = u;
                    }
                }
            }
            if (dp[a] == kBig) continue;
            double total = dp[a] + wrap.cost;
            if (total < best_cost - 1e-15) {
                best_cost = total;
                best.found = true;
                best.arc_cost = total;
                best.arcs.clear();
                int cur = a;
                while (cur != b) {
                    best.arcs.push_back({pred[cur], cur});
                    cur = pred[cur];
                }
                std::reverse(best.arcs.begin(), best.arcs.end());
                best.arcs.push_back({a, b});
            }
        }
    }
    return best;
}

ReplenishmentPlan assemble_plan(const ArcTable& tab, const RelaxedResult& rel) {
    std::vector<std::pair<int, int>> vl;
    if (tab.fixed_full_cycle)
        vl = tab.full_cycle.visit_levels;
    else
        for (auto [a, b] : rel.arcs) {
            const ArcEval& e = tab.at(a, b);
            vl.insert(vl.end(), e.visit_levels.begin(), e.visit_levels.end());
        }
    std::sort(vl.begin(), vl.end());
    ReplenishmentPlan plan;
    for (auto [t, s] : vl) {
        plan.visits.push_back(t);
        plan.levels.push_back(s);
    }
    return plan;
}

}  // namespace

namespace {

// Exhaustive cycle enumeration without dominance pruning; the A/B reference
// for the labeling store.
RelaxedResult solve_cycle_exhaustive(const ArcTable& tab) {
    const int T = tab.T;
    RelaxedResult best;
    double best_cost = kBig;
    std::vector<std::pair<int, int>> path;
    for (int a = 0; a < T; ++a) {
        for (int b = 0; b <= a; ++b) {
            const ArcEval& wrap = tab.at(a, b);
            if (wrap.cost == kBig) continue;
            // every forward path b -> a over finite arcs
            std::vector<std::pair<std::vector<std::pair<int, int>>, double>> stack;
            stack.push_back({{}, 0.0});
            std::vector<std::pair<std::vector<std::pair<int, int>>, double>> done;
            while (!stack.empty()) {
                auto [arcs, c] = stack.back();
                stack.pop_back();
                int cur = arcs.empty() ? b : arcs.back().second;
                if (cur == a) {
                    done.push_back({arcs, c});
                    continue;
                }
                for (int t = cur + 1; t <= a; ++t) {
                    const ArcEval& e = tab.at(cur, t);
                    if (e.cost == kBig) continue;
                    auto next = arcs;
                    next.push_back({cur, t});
                    stack.push_back({std::move(next), c + e.cost});
                }
            }
            if (a == b) done.push_back({{}, 0.0});
            for (auto& [arcs, c] : done) {
                double total = c + wrap.cost;
                if (total < best_cost - 1e-15) {
                    best_cost = total;
                    best.found = true;
                    best.arc_cost = total;
                    best.arcs = arcs;
                    best.arcs.push_back({a, b});
                }
            }
        }
    }
    return best;
}

}  // namespace

std::optional<PricedPlan> solve_relaxed_pricing(
    int retailer, const PlanDuals& duals, const Instance& inst, const BoundsGrid& bounds,
    FInvCache& cache, const std::vector<std::pair<int, int>>& enforced,
    const std::vector<std::pair<int, int>>& forbidden, const LevelRules* rules,
    RetailerPricingCache* warm, bool use_dominance) {
    std::map<std::pair<int, int>, IntervalCostEntry> local;
    auto& anchors = warm ? warm->anchors : local;
    ArcTable tab = build_arc_table(retailer, duals, inst, bounds, cache, enforced,
                                   forbidden, rules, anchors);
    if (tab.infeasible) return std::nullopt;
    if (tab.fixed_full_cycle) {
        PricedPlan out;
        out.plan = assemble_plan(tab, {});
        out.reduced_cost = tab.full_cycle.cost + duals.theta - duals.pi + duals.constant;
        return out;
    }
    RelaxedResult rel = use_dominance ? solve_cycle(tab) : solve_cycle_exhaustive(tab);
    if (!rel.found) return std::nullopt;
    PricedPlan out;
    out.plan = assemble_plan(tab, rel);
    out.reduced_cost = rel.arc_cost + duals.theta - duals.pi + duals.constant;
    return out;
}

std::optional<PricedPlan> solve_pricing_with_lazy(int retailer, const PlanDuals& duals,
                                                  const Instance& inst,
                                                  const BoundsGrid& bounds,
                                                  FInvCache& cache,
                                                  const PlanPricingContext& ctx,
                                                  RetailerPricingCache* warm) {
    struct Node {
        LazyNodeState state;
        long id = 0;
        int depth = 0;
    };
    struct Cmp {
        bool operator()(const Node& x, const Node& y) const {
            if (x.state.bound != y.state.bound) return x.state.bound > y.state.bound;
            return x.id > y.id;  // FIFO among equal bounds
        }
    };

    std::map<std::pair<int, int>, IntervalCostEntry> local;
    auto& anchors = warm ? warm->anchors : local;
    const LevelRules* rules =
        ctx.level_rules.forced.empty() ? nullptr : &ctx.level_rules;

    std::priority_queue<Node, std::vector<Node>, Cmp> open;
    long next_id = 0;
    Node root;
    root.state.enforced = ctx.forced_intervals;
    root.state.forbidden = ctx.forbidden_intervals;
    root.state.bound = -kBig;
    root.id = next_id++;
    open.push(root);

    std::optional<PricedPlan> incumbent;
    double incumbent_cost = kBig;

    while (!open.empty()) {
        Node node = open.top();
        open.pop();
        if (node.state.bound >= incumbent_cost - 1e-12) break;  // best-first cut-off

        ArcTable tab = build_arc_table(retailer, duals, inst, bounds, cache,
                                       node.state.enforced, node.state.forbidden, rules,
                                       anchors);
        if (tab.infeasible) continue;
        RelaxedResult rel;
        PricedPlan cand;
        if (tab.fixed_full_cycle) {
            cand.plan = assemble_plan(tab, rel);
            cand.reduced_cost =
                tab.full_cycle.cost + duals.theta - duals.pi + duals.constant;
        } else {
            rel = solve_cycle(tab);
            if (!rel.found) continue;
            cand.plan = assemble_plan(tab, rel);
            cand.reduced_cost = rel.arc_cost + duals.theta - duals.pi + duals.constant;
        }
        if (cand.reduced_cost >= incumbent_cost - 1e-12) continue;

        // Lazy feasibility: no-overshoot slack of every used free interval.
        std::set<std::pair<int, int>> enforced_set(node.state.enforced.begin(),
                                                   node.state.enforced.end());
        std::vector<std::pair<int, int>> violated;
        for (const CyclicInterval& iv : cand.plan.intervals(inst.cycle_len)) {
            if (enforced_set.count({iv.start(), iv.end()})) continue;
            if (overshoot_slack(cand.plan, iv, bounds.l[retailer]) < -1e-9)
                violated.push_back({iv.start(), iv.end()});
        }
        if (ctx.debug) {
            for (int d = 0; d < node.depth; ++d) *ctx.debug << "  ";
            *ctx.debug << "node " << node.id << " bound=" << node.state.bound
                       << " relaxed=" << cand.reduced_cost << " violated=" << violated.size()
                       << "\n";
        }
        if (violated.empty()) {
            if (cand.reduced_cost < incumbent_cost - 1e-12) {
                incumbent_cost = cand.reduced_cost;
                incumbent = cand;
            }
            continue;
        }
        if (violated.size() > 3) violated.resize(3);  // defer extras to children

        const int fan = 1 << violated.size();
        for (int mask = 0; mask < fan; ++mask) {
            Node child;
            child.state = node.state;
            child.state.bound = cand.reduced_cost;
            child.depth = node.depth + 1;
            child.id = next_id++;
            for (size_t j = 0; j < violated.size(); ++j) {
                if (mask & (1 << j))
                    child.state.enforced.push_back(violated[j]);
                else
                    child.state.forbidden.push_back(violated[j]);
            }
            open.push(child);
        }
    }
    return incumbent;
}

}  // namespace drcirp
