#include "drcirp/solver.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <random>
#include <sstream>
#include <stdexcept>

#include "bnp_detail.hpp"

namespace drcirp {

using namespace detail;

Policy parse_policy(const std::string& name) {
    if (name == "fixed-interval" || name == "fixed") return Policy::FixedInterval;
    if (name == "consistent") return Policy::Consistent;
    if (name == "flexible") return Policy::Flexible;
    throw std::invalid_argument("unknown policy: " + name);
}

std::string policy_name(Policy p) {
    switch (p) {
        case Policy::FixedInterval: return "fixed-interval";
        case Policy::Consistent: return "consistent";
        case Policy::Flexible: return "flexible";
    }
    return "?";
}

Instance aggregate_stationary(const Instance& inst) {
    Instance agg = inst;
    for (int i = 0; i < inst.n_retailers; ++i) {
        AmbiguityCell c;
        c.lo = kInf;
        c.hi = 0.0;
        double mean = 0.0, mad = 0.0;
        for (int t = 0; t < inst.cycle_len; ++t) {
            const AmbiguityCell& cell = inst.cell(i, t);
            c.lo = std::min(c.lo, cell.lo);
            c.hi = std::max(c.hi, cell.hi);
            mean += cell.mean;
            mad += cell.mad;
        }
        c.mean = mean / inst.cycle_len;
        c.mad = mad / inst.cycle_len;
        for (int t = 0; t < inst.cycle_len; ++t) agg.ambiguity[i][t] = c;
    }
    return agg;
}

namespace {

struct FirstLp {
    LpProblem lp;
    std::vector<int> q_var;    // pool index -> var or -1
    std::vector<int> art_var;  // per retailer
    std::vector<int> cover_row;
    int fleet_row = -1;
    std::vector<int> arc_row;  // per forced arc
};

bool pattern_active(const Pattern& pat, size_t idx, const FirstNodeCtx& ctx) {
    if (ctx.forbidden_patterns.count(idx)) return false;
    for (const auto& cl : ctx.banned_clusters)
        if (cl == pat.retailers) return false;
    if (!ctx.forbidden_arcs.empty()) {
        for (auto& arc : pat.arc_set())
            if (ctx.forbidden_arcs.count(arc)) return false;
    }
    return true;
}

FirstLp build_first_lp(const Workspace& ws, const std::vector<Pattern>& pool,
                       const FirstNodeCtx& ctx, const std::vector<char>& excluded) {
    const Instance& inst = *ws.inst;
    const int N = inst.n_retailers;
    FirstLp m;
    for (int i = 0; i < N; ++i)
        m.cover_row.push_back(m.lp.add_row(RowSense::EQ, 1.0, "cover" + std::to_string(i)));
    m.fleet_row = m.lp.add_row(RowSense::LE, inst.n_vehicles, "fleet");
    for (size_t f = 0; f < ctx.forced_arcs.size(); ++f)
        m.arc_row.push_back(m.lp.add_row(RowSense::GE, 1.0));

    m.q_var.assign(pool.size(), -1);
    for (size_t k = 0; k < pool.size(); ++k) {
        const Pattern& pat = pool[k];
        if (!pattern_active(pat, k, ctx)) continue;
        bool overlaps_forced = false;
        bool is_forced = std::find(ctx.forced_patterns.begin(), ctx.forced_patterns.end(),
                                   k) != ctx.forced_patterns.end();
        if (!is_forced)
            for (int i : pat.retailers)
                if (excluded[i]) overlaps_forced = true;
        if (overlaps_forced) continue;
        int var = m.lp.add_var(pat.cost, is_forced ? 1.0 : 0.0, kInf,
                               "q" + std::to_string(k));
        m.q_var[k] = var;
        for (int i : pat.retailers) m.lp.add_coeff(m.cover_row[i], var, 1.0);
        m.lp.add_coeff(m.fleet_row, var, 1.0);
        auto arcs = pat.arc_set();
        for (size_t f = 0; f < ctx.forced_arcs.size(); ++f)
            if (arcs.count(ctx.forced_arcs[f])) m.lp.add_coeff(m.arc_row[f], var, 1.0);
    }
    m.art_var.resize(N);
    for (int i = 0; i < N; ++i) {
        m.art_var[i] = m.lp.add_var(kBigM, 0.0, kInf, "a" + std::to_string(i));
        m.lp.add_coeff(m.cover_row[i], m.art_var[i], 1.0);
    }
    return m;
}

struct FirstNode {
    FirstNodeCtx ctx;
    double bound = -kInf;
    bool proven = true;  // ancestors priced to optimality
    long id = 0;
};

struct FirstNodeCmp {
    bool operator()(const FirstNode& a, const FirstNode& b) const {
        if (a.bound != b.bound) return a.bound > b.bound;
        return a.id > b.id;
    }
};

struct NodeSolveOutcome {
    bool lp_ok = false;
    bool proven = true;        // pricing ran to completion everywhere
    bool infeasible = false;   // artificials positive after proven pricing
    double value = 0.0;
    std::vector<double> q;     // по pool index
    std::vector<double> pi;
    double fleet_dual = 0.0;
    std::vector<double> arc_duals;
};

std::string pattern_key(const Pattern& p) {
    std::ostringstream os;
    for (int r : p.retailers) os << r << ',';
    os << '|' << p.kappa << '|';
    for (auto& [t, seq] : p.routes) {
        os << t << ':';
        for (int v : seq) os << v << '.';
        os << ';';
    }
    for (auto& plan : p.plans) {
        for (size_t k = 0; k < plan.visits.size(); ++k)
            os << plan.visits[k] << '=' << plan.levels[k] << ',';
        os << '/';
    }
    return os.str();
}

// Column generation at one first-level node.
NodeSolveOutcome solve_first_node(Workspace& ws, std::vector<Pattern>& pool,
                                  std::set<std::string>& pool_keys, FirstNodeCtx& ctx,
                                  std::vector<PlanColumn>& plan_pool,
                                  std::vector<RouteColumn>& route_pool) {
    const Instance& inst = *ws.inst;
    const int N = inst.n_retailers;
    NodeSolveOutcome out;

    std::vector<char> excluded(N, 0);
    for (size_t f : ctx.forced_patterns)
        for (int i : pool[f].retailers) excluded[i] = 1;

    while (true) {
        FirstLp m = build_first_lp(ws, pool, ctx, excluded);
        LpSolution sol = solve_lp(m.lp, ws.cfg.tol);
        if (sol.status != LpStatus::Optimal) return out;
        out.lp_ok = true;
        out.value = sol.objective;
        out.q.assign(pool.size(), 0.0);
        for (size_t k = 0; k < pool.size(); ++k)
            if (m.q_var[k] >= 0) out.q[k] = sol.x[m.q_var[k]];
        out.pi.assign(N, 0.0);
        for (int i = 0; i < N; ++i) out.pi[i] = sol.duals[m.cover_row[i]];
        out.fleet_dual = sol.duals[m.fleet_row];
        out.arc_duals.clear();
        for (int r : m.arc_row) out.arc_duals.push_back(sol.duals[r]);
        ctx.forced_arc_duals = out.arc_duals;

        if (ws.total_deadline.expired()) {
            out.proven = false;
            break;
        }

        bool added = false;
        if (ws.cfg.policy == Policy::FixedInterval) {
            RoutePricingMods mods = default_mods(N + 1, ws.cfg.max_routes_per_round);
            for (auto [a, b] : ctx.forbidden_arcs) mods.forbidden_arc[a][b] = 1;
            for (size_t f = 0; f < ctx.forced_arcs.size(); ++f)
                mods.arc_credit[ctx.forced_arcs[f].first][ctx.forced_arcs[f].second] +=
                    out.arc_duals[f];
            for (int v = 1; v <= N; ++v)
                if (excluded[v - 1])
                    for (int u = 0; u <= N; ++u)
                        mods.forbidden_arc[u][v] = mods.forbidden_arc[v][u] = 1;
            auto t0 = std::chrono::steady_clock::now();
            auto cols = generate_fixed_interval_patterns(inst, out.pi, ws.bounds, ws.cache,
                                                         mods, out.fleet_dual,
                                                         &ws.retailer_constant);
            ws.stats.pp_time +=
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            ws.stats.routes += static_cast<long>(cols.size());
            for (const auto& col : cols) {
                if (col.reduced_cost >= -ws.cfg.tol) continue;
                Pattern pat;
                pat.kappa = col.kappa;
                double len = 0.0;
                for (size_t a = 0; a + 1 < col.nodes.size(); ++a)
                    len += inst.dist[col.nodes[a]][col.nodes[a + 1]];
                for (int t = 0; t < inst.cycle_len; t += col.kappa)
                    pat.routes[t] = col.nodes;
                size_t li = 0;
                for (int v : col.nodes) {
                    if (v == 0) continue;
                    int i = v - 1;
                    pat.retailers.push_back(i);
                    ReplenishmentPlan plan;
                    for (int t = 0; t < inst.cycle_len; t += col.kappa) {
                        plan.visits.push_back(t);
                        plan.levels.push_back(col.levels[li]);
                    }
                    pat.plans.push_back(std::move(plan));
                    ++li;
                }
                // keep plans aligned with sorted retailer list
                std::vector<size_t> order(pat.retailers.size());
                for (size_t z = 0; z < order.size(); ++z) order[z] = z;
                std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
                    return pat.retailers[a] < pat.retailers[b];
                });
                Pattern sorted = pat;
                for (size_t z = 0; z < order.size(); ++z) {
                    sorted.retailers[z] = pat.retailers[order[z]];
                    sorted.plans[z] = pat.plans[order[z]];
                }
                sorted.cost = col.pattern_cost;
                sorted.transport = inst.trans_cost * len / col.kappa;
                sorted.inventory = sorted.cost - inst.vehicle_cost - sorted.transport;
                for (int i : sorted.retailers)
                    sorted.inventory -= ws.retailer_constant[i];
                if (pool_keys.insert(pattern_key(sorted)).second) {
                    pool.push_back(std::move(sorted));
                    ++ws.stats.columns;
                    added = true;
                }
            }
        } else {
            SecondLevelResult res = second_level_solve(ws, out.pi, out.fleet_dual, ctx,
                                                       excluded, plan_pool, route_pool);
            if (res.timed_out) {
                out.proven = false;
                ++ws.stats.timed_out_pricing_calls;
            }
            if (res.pattern && res.reduced_cost < -ws.cfg.tol) {
                if (pool_keys.insert(pattern_key(*res.pattern)).second) {
                    pool.push_back(std::move(*res.pattern));
                    ++ws.stats.columns;
                    added = true;
                } else if (!res.timed_out) {
                    break;  // numerically stale duplicate; treat as converged
                }
            }
            if (!added && res.timed_out) break;
        }
        if (!added) {
            // converged: artificial cover means this node is infeasible
            bool art = false;
            for (int i = 0; i < N; ++i)
                if (sol.x[m.art_var[i]] > 1e-7) art = true;
            if (art && out.proven) out.infeasible = true;
            if (art && !out.proven) out.value = -kInf;  // bound unusable
            break;
        }
    }
    return out;
}

struct BranchChoice {
    enum Kind { None, Arc, PatternSplit } kind = None;
    std::pair<int, int> arc{-1, -1};
    size_t pattern = 0;
};

BranchChoice pick_branch(const Workspace& ws, const std::vector<Pattern>& pool,
                         const std::vector<double>& q, std::mt19937_64* rng) {
    BranchChoice ch;
    // pattern with value closest to 0.6
    size_t best_k = pool.size();
    double best_dist = 1e18;
    for (size_t k = 0; k < pool.size(); ++k) {
        if (is_integral(q[k])) continue;
        double d = std::abs(q[k] - 0.6);
        if (d < best_dist - 1e-12) {
            best_dist = d;
            best_k = k;
        }
    }
    if (best_k == pool.size()) return ch;
    ch.pattern = best_k;

    if (ws.cfg.policy != Policy::Flexible) {
        // arc flows over the whole pool
        std::map<std::pair<int, int>, double> flow;
        for (size_t k = 0; k < pool.size(); ++k) {
            if (q[k] <= 1e-9) continue;
            for (auto& a : pool[k].arc_set()) flow[a] += q[k];
        }
        auto fractional_arc_of = [&](size_t k) -> std::pair<int, int> {
            std::vector<std::pair<int, int>> cands;
            for (auto& a : pool[k].arc_set())
                if (!is_integral(flow[a])) cands.push_back(a);
            if (cands.empty()) return {-1, -1};
            std::sort(cands.begin(), cands.end());
            if (rng) {
                std::uniform_int_distribution<size_t> pick(0, cands.size() - 1);
                return cands[pick(*rng)];
            }
            return cands.front();
        };
        auto arc = fractional_arc_of(best_k);
        if (arc.first < 0) {
            for (size_t k = 0; k < pool.size() && arc.first < 0; ++k)
                if (!is_integral(q[k])) arc = fractional_arc_of(k);
        }
        if (arc.first >= 0) {
            ch.kind = BranchChoice::Arc;
            ch.arc = arc;
            return ch;
        }
    }
    ch.kind = BranchChoice::PatternSplit;
    return ch;
}

Solution assemble_solution(const Workspace& ws, const std::vector<Pattern>& pool,
                           const std::vector<double>& q) {
    const Instance& inst = *ws.inst;
    Solution sol;
    sol.policy = ws.cfg.policy;
    sol.objective = ws.emergency_constant;
    for (size_t k = 0; k < pool.size(); ++k) {
        if (q[k] < 0.5) continue;
        const Pattern& pat = pool[k];
        ClusterSolution cs;
        cs.retailers = pat.retailers;
        cs.routes = pat.routes;
        cs.plans = pat.plans;
        cs.kappa = pat.kappa;
        cs.cost = pat.cost;
        sol.clusters.push_back(std::move(cs));
        sol.objective += pat.cost;
        sol.cost_vehicle += inst.vehicle_cost;
        sol.cost_transport += pat.transport;
        sol.cost_inventory += pat.inventory;
        for (int i : pat.retailers) sol.cost_emergency += ws.retailer_constant[i];
    }
    sol.cost_emergency += ws.emergency_constant;
    return sol;
}

}  // namespace

Solution solve(const Instance& inst_in, const SolverConfig& cfg) {
    inst_in.validate();
    const bool fixed = cfg.policy == Policy::FixedInterval;
    Instance work_inst = fixed ? aggregate_stationary(inst_in) : inst_in;

    Workspace ws;
    ws.inst = &work_inst;
    ws.cfg = cfg;
    ws.bounds = compute_bounds(work_inst);
    ws.warm.resize(work_inst.n_retailers);
    ws.total_deadline = Deadline::in(cfg.time_limit);
    ws.retailer_constant.assign(work_inst.n_retailers, 0.0);
    ws.emergency_constant = 0.0;
    if (work_inst.has_emergency_cost && work_inst.emergency_cost != 0.0) {
        const double e = work_inst.emergency_cost;
        for (int i = 0; i < work_inst.n_retailers; ++i) {
            double mu_sum = 0.0;
            for (int t = 0; t < work_inst.cycle_len; ++t)
                mu_sum += work_inst.cell(i, t).mean;
            ws.retailer_constant[i] = -e * mu_sum / work_inst.cycle_len;
        }
        ws.emergency_constant = e * work_inst.capacity * work_inst.n_vehicles;
    }
    const auto t_start = std::chrono::steady_clock::now();

    std::vector<Pattern> pool = initial_columns(ws);
    if (fixed)
        for (auto& p : pool) p.kappa = 1;
    std::set<std::string> pool_keys;
    for (auto& p : pool) pool_keys.insert(pattern_key(p));

    std::vector<PlanColumn> plan_pool;
    std::vector<RouteColumn> route_pool;
    if (cfg.policy == Policy::Consistent) {
        RouteColumn empty;
        empty.nodes = {0, 0};
        empty.exec_mask = 0;
        route_pool.push_back(empty);
    }

    std::mt19937_64 rng(cfg.seed);
    std::mt19937_64* rng_ptr = cfg.random_arc_branching ? &rng : nullptr;

    std::priority_queue<FirstNode, std::vector<FirstNode>, FirstNodeCmp> open;
    long next_id = 0;
    open.push({FirstNodeCtx{}, -kInf, true, next_id++});

    std::optional<Solution> incumbent;
    double incumbent_val = kInf;
    double unproven_lb = kInf;  // lowest bound among nodes we could not prove
    bool any_unproven = false;

    while (!open.empty()) {
        if (ws.total_deadline.expired()) {
            ws.stats.hit_time_limit = true;
            break;
        }
        FirstNode node = open.top();
        open.pop();
        if (node.bound >= incumbent_val - 1e-9) continue;
        ++ws.stats.first_level_nodes;

        NodeSolveOutcome out =
            solve_first_node(ws, pool, pool_keys, node.ctx, plan_pool, route_pool);
        if (!out.lp_ok) continue;
        if (out.infeasible) continue;
        if (!out.proven) {
            any_unproven = true;
            unproven_lb = std::min(unproven_lb, node.proven ? node.bound : -kInf);
        }
        double node_value = out.value;
        if (out.proven && node_value >= incumbent_val - 1e-9) continue;

        bool integral = true;
        for (size_t k = 0; k < pool.size(); ++k)
            if (!is_integral(out.q[k])) integral = false;
        if (integral) {
            Solution cand = assemble_solution(ws, pool, out.q);
            size_t covered = 0;
            for (const auto& cs : cand.clusters) covered += cs.retailers.size();
            if (covered == static_cast<size_t>(work_inst.n_retailers) &&
                cand.objective < incumbent_val - 1e-9) {
                incumbent_val = cand.objective;
                incumbent = std::move(cand);
            }
            continue;
        }

        BranchChoice ch = pick_branch(ws, pool, out.q, rng_ptr);
        if (ch.kind == BranchChoice::None) continue;  // numerical fringe
        double child_bound = out.proven ? node_value : -kInf;
        bool child_proven = node.proven && out.proven;
        if (ch.kind == BranchChoice::Arc) {
            FirstNode forbid, force;
            forbid.ctx = node.ctx;
            forbid.ctx.forbidden_arcs.insert(ch.arc);
            forbid.bound = child_bound;
            forbid.proven = child_proven;
            forbid.id = next_id++;
            force.ctx = node.ctx;
            force.ctx.forced_arcs.push_back(ch.arc);
            force.ctx.forced_arc_duals.push_back(0.0);
            force.bound = child_bound;
            force.proven = child_proven;
            force.id = next_id++;
            open.push(std::move(forbid));
            open.push(std::move(force));
        } else {
            FirstNode enforce, exclude;
            enforce.ctx = node.ctx;
            enforce.ctx.forced_patterns.push_back(ch.pattern);
            enforce.bound = child_bound;
            enforce.proven = child_proven;
            enforce.id = next_id++;
            exclude.ctx = node.ctx;
            exclude.ctx.forbidden_patterns.insert(ch.pattern);
            std::vector<int> cluster = pool[ch.pattern].retailers;
            exclude.ctx.banned_clusters.push_back(cluster);
            exclude.bound = child_bound;
            exclude.proven = child_proven;
            exclude.id = next_id++;
            open.push(std::move(enforce));
            open.push(std::move(exclude));
        }
    }

    Solution sol;
    if (incumbent) {
        sol = std::move(*incumbent);
        double lb = incumbent_val;
        while (!open.empty()) {
            lb = std::min(lb, open.top().bound);
            open.pop();
        }
        if (any_unproven) lb = std::min(lb, unproven_lb);
        if (ws.stats.hit_time_limit || any_unproven || lb < incumbent_val - 1e-9) {
            sol.status = SolveStatus::Feasible;
            sol.lower_bound = std::max(lb, 0.0) == kInf ? 0.0 : std::max(lb, 0.0);
            if (!std::isfinite(sol.lower_bound)) sol.lower_bound = 0.0;
            sol.gap = std::abs(sol.objective) < 1e-12
                          ? 0.0
                          : (sol.objective - sol.lower_bound) / std::abs(sol.objective);
        } else {
            sol.status = SolveStatus::Optimal;
            sol.lower_bound = sol.objective;
            sol.gap = 0.0;
        }
    } else {
        sol.status = SolveStatus::Infeasible;
        sol.policy = cfg.policy;
    }
    ws.stats.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    sol.stats = ws.stats;
    return sol;
}

}  // namespace drcirp
