#include <algorithm>
#include <bit>
#include <cmath>
#include <queue>

#include "bnp_detail.hpp"

namespace drcirp::detail {

std::set<std::pair<int, int>> Pattern::arc_set() const {
    std::set<std::pair<int, int>> arcs;
    for (const auto& [t, seq] : routes)
        for (size_t k = 0; k + 1 < seq.size(); ++k) arcs.insert({seq[k], seq[k + 1]});
    return arcs;
}

double plan_inventory_cost(const Instance& inst, int retailer,
                           const ReplenishmentPlan& plan, FInvCache& cache) {
    double total = 0.0;
    size_t k = 0;
    for (const CyclicInterval& iv : plan.intervals(inst.cycle_len)) {
        total += f_inv({retailer, iv, plan.levels[k]}, inst, cache);
        ++k;
    }
    return total;
}

double plan_delivery_coeff(const Instance& inst, const ReplenishmentPlan& plan,
                           int period, const std::vector<double>& u_row) {
    for (const CyclicInterval& iv : plan.intervals(inst.cycle_len)) {
        if (iv.end() != period) continue;
        double c = plan.level_at(iv.end()) - plan.level_at(iv.start());
        for (int t : iv.demand_periods()) c += u_row[t];
        return c;
    }
    return 0.0;
}

bool plan_satisfies_overshoot(const Instance& inst, const ReplenishmentPlan& plan,
                              const std::vector<double>& l_row) {
    for (const CyclicInterval& iv : plan.intervals(inst.cycle_len))
        if (overshoot_slack(plan, iv, l_row) < -1e-9) return false;
    return true;
}

namespace {

struct SecondLp {
    LpProblem lp;
    std::vector<int> route_var;  // pool index -> var (-1 inactive)
    std::vector<int> plan_var;
    std::vector<int> art_var;    // per forced-serve retailer
    int conv_row = -1;                       // consistent
    std::vector<int> conv_rows;              // flexible, per period
    std::vector<int> serve_row;              // per retailer
    std::vector<std::vector<int>> cov_row;   // [i][t]
    std::vector<int> cap_row;                // per period
    std::vector<int> noregen_row;            // per banned cluster
    double constant = 0.0;
};

bool route_allowed(const RouteColumn& col, const FirstNodeCtx& node,
                   const std::vector<char>& excluded) {
    for (size_t k = 0; k + 1 < col.nodes.size(); ++k)
        if (node.forbidden_arcs.count({col.nodes[k], col.nodes[k + 1]})) return false;
    for (int v : col.nodes)
        if (v != 0 && excluded[v - 1]) return false;
    return true;
}

bool plan_allowed(const PlanColumn& col, const SecondNodeCtx& ctx,
                  const std::vector<char>& excluded, int cycle_len) {
    const int i = col.retailer;
    if (excluded[i] || ctx.forbidden_serve[i]) return false;
    std::set<std::pair<int, int>> ivs;
    for (const CyclicInterval& iv : col.plan.intervals(cycle_len))
        ivs.insert({iv.start(), iv.end()});
    for (auto& f : ctx.forced_intervals[i])
        if (!ivs.count(f)) return false;
    for (auto& f : ctx.forbidden_intervals[i])
        if (ivs.count(f)) return false;
    for (size_t k = 0; k < col.plan.visits.size(); ++k)
        if (!ctx.level_rules[i].allows(col.plan.visits[k], col.plan.levels[k]))
            return false;
    return true;
}

SecondLp build_second_lp(const Workspace& ws, Policy policy,
                         const std::vector<double>& pi_tilde, double fleet_dual,
                         const FirstNodeCtx& node, const SecondNodeCtx& ctx,
                         const std::vector<char>& excluded,
                         const std::vector<PlanColumn>& plan_pool,
                         const std::vector<RouteColumn>& route_pool) {
    const Instance& inst = *ws.inst;
    const int N = inst.n_retailers;
    const int T = inst.cycle_len;
    SecondLp m;
    m.constant = inst.vehicle_cost - fleet_dual;

    // Rows first.
    if (policy == Policy::Consistent) {
        m.conv_row = m.lp.add_row(RowSense::EQ, 1.0, "conv");
    } else {
        for (int t = 0; t < T; ++t)
            m.conv_rows.push_back(m.lp.add_row(RowSense::LE, 1.0, "conv" + std::to_string(t)));
    }
    for (int i = 0; i < N; ++i)
        m.serve_row.push_back(m.lp.add_row(ctx.forced_serve[i] ? RowSense::EQ : RowSense::LE,
                                           1.0, "serve" + std::to_string(i)));
    m.cov_row.assign(N, {});
    for (int i = 0; i < N; ++i)
        for (int t = 0; t < T; ++t)
            m.cov_row[i].push_back(m.lp.add_row(RowSense::GE, 0.0));
    for (int t = 0; t < T; ++t)
        m.cap_row.push_back(m.lp.add_row(RowSense::LE, inst.capacity));
    for (const auto& cluster : node.banned_clusters) {
        int r = m.lp.add_row(RowSense::GE, -static_cast<double>(cluster.size()) + 1.0);
        m.noregen_row.push_back(r);
    }

    // Route columns.
    m.route_var.assign(route_pool.size(), -1);
    for (size_t k = 0; k < route_pool.size(); ++k) {
        const RouteColumn& col = route_pool[k];
        if (!route_allowed(col, node, excluded)) continue;
        int execs = 0;
        for (int t = 0; t < T; ++t)
            if (col.exec_mask & (1u << t)) ++execs;
        double cost = execs * col.trans_cost / T;
        // forced-arc dual credits so the pattern reduced cost is exact
        for (size_t a = 0; a + 1 < col.nodes.size(); ++a)
            for (size_t f = 0; f < node.forced_arcs.size(); ++f)
                if (node.forced_arcs[f] == std::make_pair(col.nodes[a], col.nodes[a + 1]))
                    cost -= node.forced_arc_duals.empty() ? 0.0 : node.forced_arc_duals[f];
        int var = m.lp.add_var(cost, 0.0, kInf, "r" + std::to_string(k));
        m.route_var[k] = var;
        if (policy == Policy::Consistent) {
            m.lp.add_coeff(m.conv_row, var, 1.0);
        } else {
            int t = std::countr_zero(col.exec_mask);
            m.lp.add_coeff(m.conv_rows[t], var, 1.0);
        }
        for (int t = 0; t < T; ++t) {
            if (!(col.exec_mask & (1u << t))) continue;
            for (int v : col.nodes)
                if (v != 0) m.lp.add_coeff(m.cov_row[v - 1][t], var, 1.0);
        }
    }

    // Plan columns.
    m.plan_var.assign(plan_pool.size(), -1);
    for (size_t k = 0; k < plan_pool.size(); ++k) {
        const PlanColumn& col = plan_pool[k];
        if (!plan_allowed(col, ctx, excluded, T)) continue;
        const int i = col.retailer;
        double cost = col.inv_cost / T - pi_tilde[i];
        int var = m.lp.add_var(cost, 0.0, kInf, "p" + std::to_string(k));
        m.plan_var[k] = var;
        m.lp.add_coeff(m.serve_row[i], var, 1.0);
        for (int v : col.plan.visits) m.lp.add_coeff(m.cov_row[i][v], var, -1.0);
        for (int v : col.plan.visits) {
            double c = plan_delivery_coeff(inst, col.plan, v, ws.bounds.u[i]);
            if (c != 0.0) m.lp.add_coeff(m.cap_row[v], var, c);
        }
        for (size_t b = 0; b < node.banned_clusters.size(); ++b) {
            bool inside = std::binary_search(node.banned_clusters[b].begin(),
                                             node.banned_clusters[b].end(), i);
            m.lp.add_coeff(m.noregen_row[b], var, inside ? -1.0 : 1.0);
        }
    }

    // Artificials keep forced-serve rows feasible while pricing catches up.
    m.art_var.assign(N, -1);
    for (int i = 0; i < N; ++i) {
        if (!ctx.forced_serve[i]) continue;
        int var = m.lp.add_var(kBigM, 0.0, kInf, "art" + std::to_string(i));
        m.art_var[i] = var;
        m.lp.add_coeff(m.serve_row[i], var, 1.0);
    }
    return m;
}

struct SecondDuals {
    double iota = 0.0;
    std::vector<double> iota_t;
    std::vector<std::vector<double>> delta;
    std::vector<double> psi;    // paper sign
    std::vector<double> theta;  // paper sign
    std::vector<double> plan_constant;  // per retailer, no-regen adjustments
};

SecondDuals extract_duals(const Workspace& ws, Policy policy, const SecondLp& m,
                          const LpSolution& sol, const FirstNodeCtx& node) {
    const int N = ws.inst->n_retailers;
    const int T = ws.inst->cycle_len;
    SecondDuals d;
    if (policy == Policy::Consistent)
        d.iota = sol.duals[m.conv_row];
    else {
        d.iota_t.resize(T);
        for (int t = 0; t < T; ++t) d.iota_t[t] = sol.duals[m.conv_rows[t]];
    }
    d.delta.assign(N, std::vector<double>(T, 0.0));
    for (int i = 0; i < N; ++i)
        for (int t = 0; t < T; ++t) d.delta[i][t] = sol.duals[m.cov_row[i][t]];
    d.psi.resize(T);
    for (int t = 0; t < T; ++t) d.psi[t] = -sol.duals[m.cap_row[t]];
    d.theta.resize(N);
    for (int i = 0; i < N; ++i) d.theta[i] = -sol.duals[m.serve_row[i]];
    d.plan_constant.assign(N, 0.0);
    for (size_t b = 0; b < m.noregen_row.size(); ++b) {
        double rho = sol.duals[m.noregen_row[b]];
        if (rho == 0.0) continue;
        for (int i = 0; i < N; ++i) {
            bool inside = std::binary_search(node.banned_clusters[b].begin(),
                                             node.banned_clusters[b].end(), i);
            d.plan_constant[i] -= rho * (inside ? -1.0 : 1.0);
        }
    }
    return d;
}

struct SecondNode {
    SecondNodeCtx ctx;
    double bound = -kInf;
    long id = 0;
};

struct SecondNodeCmp {
    bool operator()(const SecondNode& a, const SecondNode& b) const {
        if (a.bound != b.bound) return a.bound > b.bound;
        return a.id > b.id;
    }
};

}  // namespace

SecondLevelResult second_level_solve(Workspace& ws, const std::vector<double>& pi,
                                     double fleet_dual, const FirstNodeCtx& node,
                                     const std::vector<char>& excluded,
                                     std::vector<PlanColumn>& plan_pool,
                                     std::vector<RouteColumn>& route_pool) {
    const Instance& inst = *ws.inst;
    const int N = inst.n_retailers;
    const int T = inst.cycle_len;
    const Policy policy = ws.cfg.policy;
    const double tol = ws.cfg.tol;
    const auto started = std::chrono::steady_clock::now();
    Deadline pp_deadline = Deadline::in(ws.cfg.pp_time_limit);

    SecondLevelResult result;

    std::vector<double> pi_tilde(pi);
    for (int i = 0; i < N; ++i) pi_tilde[i] -= ws.retailer_constant[i];

    // Dedup keys of pooled columns.
    std::set<std::pair<std::vector<int>, uint32_t>> route_keys;
    for (const auto& c : route_pool) route_keys.insert({c.nodes, c.exec_mask});
    std::set<std::tuple<int, std::vector<int>, std::vector<int>>> plan_keys;
    for (const auto& c : plan_pool)
        plan_keys.insert({c.retailer, c.plan.visits, c.plan.levels});

    // Arc mods shared by all route pricing at this first-level node.
    RoutePricingMods mods = default_mods(N + 1, ws.cfg.max_routes_per_round);
    for (auto [a, b] : node.forbidden_arcs) mods.forbidden_arc[a][b] = 1;
    for (size_t f = 0; f < node.forced_arcs.size(); ++f)
        if (!node.forced_arc_duals.empty())
            mods.arc_credit[node.forced_arcs[f].first][node.forced_arcs[f].second] +=
                node.forced_arc_duals[f];
    for (int v = 1; v <= N; ++v)
        if (excluded[v - 1]) {
            for (int u = 0; u <= N; ++u)
                mods.forbidden_arc[u][v] = mods.forbidden_arc[v][u] = 1;
        }

    std::priority_queue<SecondNode, std::vector<SecondNode>, SecondNodeCmp> open;
    long next_id = 0;
    long explored = 0;
    open.push({SecondNodeCtx(N, T), -kInf, next_id++});

    std::optional<Pattern> best;
    double best_rc = -tol;  // only patterns strictly below -tol are useful

    auto prune_at = [&]() { return best ? best_rc : -tol; };

    while (!open.empty()) {
        if (pp_deadline.expired() || ws.total_deadline.expired()) {
            result.timed_out = true;
            break;
        }
        SecondNode cur = open.top();
        open.pop();
        if (cur.bound >= prune_at() - 1e-12) continue;
        ++explored;
        ++ws.stats.second_level_nodes;

        // Column generation at this node.
        LpSolution sol;
        SecondLp m;
        bool node_ok = true;
        while (true) {
            m = build_second_lp(ws, policy, pi_tilde, fleet_dual, node, cur.ctx, excluded,
                                plan_pool, route_pool);
            sol = solve_lp(m.lp, tol);
            if (sol.status != LpStatus::Optimal) {
                node_ok = false;
                break;
            }
            if (pp_deadline.expired() || ws.total_deadline.expired()) {
                result.timed_out = true;
                break;
            }
            SecondDuals d = extract_duals(ws, policy, m, sol, node);
            int added = 0;

            auto t_route = std::chrono::steady_clock::now();
            std::vector<RouteColumn> new_routes;
            if (policy == Policy::Consistent)
                new_routes =
                    generate_consistent_routes(inst, d.delta, d.iota, mods, ws.cfg.subset_cap);
            else
                new_routes = generate_flexible_routes(inst, d.delta, d.iota_t, mods);
            for (auto& col : new_routes) {
                if (col.reduced_cost >= -tol) continue;
                auto key = std::make_pair(col.nodes, col.exec_mask);
                if (!route_keys.insert(key).second) continue;
                route_pool.push_back(col);
                ++added;
                ++ws.stats.routes;
            }
            ws.stats.route_time +=
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t_route)
                    .count();

            auto t_plan = std::chrono::steady_clock::now();
            for (int i = 0; i < N; ++i) {
                if (excluded[i] || cur.ctx.forbidden_serve[i]) continue;
                PlanDuals pd;
                pd.psi = d.psi;
                pd.delta = d.delta[i];
                pd.theta = d.theta[i];
                pd.pi = pi_tilde[i];
                pd.constant = d.plan_constant[i];
                PlanPricingContext ctx;
                ctx.forced_intervals = cur.ctx.forced_intervals[i];
                ctx.forbidden_intervals = cur.ctx.forbidden_intervals[i];
                ctx.level_rules = cur.ctx.level_rules[i];
                auto res = solve_pricing_with_lazy(i, pd, inst, ws.bounds, ws.cache,
                                                   ctx, &ws.warm[i]);
                if (!res) continue;
                if (res->reduced_cost >= -tol) continue;
                auto key = std::make_tuple(i, res->plan.visits, res->plan.levels);
                if (!plan_keys.insert(key).second) continue;
                PlanColumn col;
                col.retailer = i;
                col.plan = res->plan;
                col.inv_cost = plan_inventory_cost(inst, i, col.plan, ws.cache);
                plan_pool.push_back(std::move(col));
                ++added;
                ++ws.stats.replenishments;
            }
            ws.stats.replenishment_time +=
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t_plan)
                    .count();

            if (added == 0) break;
        }
        if (!node_ok) continue;
        if (result.timed_out) break;

        double node_value = sol.objective + m.constant;
        if (node_value >= prune_at() - 1e-12) continue;

        // Artificials still in the basis mean the node is infeasible.
        bool artificial = false;
        for (int i = 0; i < N; ++i)
            if (m.art_var[i] >= 0 && sol.x[m.art_var[i]] > 1e-7) artificial = true;
        if (artificial) continue;

        // Integrality.
        bool integral = true;
        for (size_t k = 0; k < route_pool.size() && integral; ++k)
            if (m.route_var[k] >= 0 && !is_integral(sol.x[m.route_var[k]])) integral = false;
        for (size_t k = 0; k < plan_pool.size() && integral; ++k)
            if (m.plan_var[k] >= 0 && !is_integral(sol.x[m.plan_var[k]])) integral = false;

        if (integral) {
            Pattern pat;
            pat.cost = inst.vehicle_cost;
            double trans = 0.0, inv = 0.0;
            for (size_t k = 0; k < route_pool.size(); ++k) {
                if (m.route_var[k] < 0 || sol.x[m.route_var[k]] < 0.5) continue;
                const RouteColumn& col = route_pool[k];
                for (int t = 0; t < T; ++t)
                    if (col.exec_mask & (1u << t)) {
                        if (col.nodes.size() > 2) pat.routes[t] = col.nodes;
                        trans += col.trans_cost / T;
                    }
            }
            std::vector<std::pair<int, ReplenishmentPlan>> chosen;
            for (size_t k = 0; k < plan_pool.size(); ++k) {
                if (m.plan_var[k] < 0 || sol.x[m.plan_var[k]] < 0.5) continue;
                chosen.push_back({plan_pool[k].retailer, plan_pool[k].plan});
                inv += plan_pool[k].inv_cost / T;
            }
            std::sort(chosen.begin(), chosen.end(),
                      [](auto& a, auto& b) { return a.first < b.first; });
            for (auto& [i, plan] : chosen) {
                pat.retailers.push_back(i);
                pat.plans.push_back(plan);
                pat.cost += ws.retailer_constant[i];
            }
            pat.transport = trans;
            pat.inventory = inv;
            pat.cost += trans + inv;
            if (pat.retailers.empty()) continue;  // the empty pattern never helps
            if (node_value < best_rc - 1e-12) {
                best_rc = node_value;
                best = std::move(pat);
            }
            if (best && explored >= ws.cfg.early_stop_nodes) break;  // early stopping
            continue;
        }

        // Branch: retailer-level, then interval-level, then level-value.
        std::vector<double> serve(N, 0.0);
        for (size_t k = 0; k < plan_pool.size(); ++k)
            if (m.plan_var[k] >= 0) serve[plan_pool[k].retailer] += sol.x[m.plan_var[k]];
        int frac_i = -1;
        double best_dist = 1e9;
        for (int i = 0; i < N; ++i) {
            if (is_integral(serve[i])) continue;
            double dist = std::abs(serve[i] - 0.6);
            if (dist < best_dist - 1e-12) {
                best_dist = dist;
                frac_i = i;
            }
        }
        if (frac_i >= 0) {
            SecondNode on, off;
            on.ctx = cur.ctx;
            on.ctx.forced_serve[frac_i] = 1;
            on.bound = node_value;
            on.id = next_id++;
            off.ctx = cur.ctx;
            off.ctx.forbidden_serve[frac_i] = 1;
            off.bound = node_value;
            off.id = next_id++;
            open.push(std::move(on));
            open.push(std::move(off));
            continue;
        }

        // Interval-level: a fractional plan whose interval set separates it
        // from another fractional plan of the same retailer.
        int plan_a = -1;
        for (size_t k = 0; k < plan_pool.size() && plan_a < 0; ++k)
            if (m.plan_var[k] >= 0 && !is_integral(sol.x[m.plan_var[k]]))
                plan_a = static_cast<int>(k);
        if (plan_a < 0) throw std::logic_error("fractional master without fractional plan");
        const int ri = plan_pool[plan_a].retailer;
        std::pair<int, int> branch_iv{-1, -1};
        {
            std::set<std::pair<int, int>> a_ivs;
            for (const CyclicInterval& iv :
                 plan_pool[plan_a].plan.intervals(T))
                a_ivs.insert({iv.start(), iv.end()});
            for (size_t k = 0; k < plan_pool.size() && branch_iv.first < 0; ++k) {
                if (m.plan_var[k] < 0 || static_cast<int>(k) == plan_a) continue;
                if (plan_pool[k].retailer != ri) continue;
                if (sol.x[m.plan_var[k]] <= tol) continue;
                std::set<std::pair<int, int>> b_ivs;
                for (const CyclicInterval& iv : plan_pool[k].plan.intervals(T))
                    b_ivs.insert({iv.start(), iv.end()});
                for (auto& iv : a_ivs)
                    if (!b_ivs.count(iv)) {
                        branch_iv = iv;
                        break;
                    }
            }
        }
        if (branch_iv.first >= 0) {
            SecondNode on, off;
            on.ctx = cur.ctx;
            on.ctx.forced_intervals[ri].push_back(branch_iv);
            on.bound = node_value;
            on.id = next_id++;
            off.ctx = cur.ctx;
            off.ctx.forbidden_intervals[ri].push_back(branch_iv);
            off.bound = node_value;
            off.id = next_id++;
            open.push(std::move(on));
            open.push(std::move(off));
            continue;
        }

        // Order-up-to-level branching: same visit sets, different levels.
        int period = -1, value = -1;
        for (size_t k = 0; k < plan_pool.size() && period < 0; ++k) {
            if (m.plan_var[k] < 0 || static_cast<int>(k) == plan_a) continue;
            if (plan_pool[k].retailer != ri) continue;
            if (sol.x[m.plan_var[k]] <= tol) continue;
            const auto& pa = plan_pool[plan_a].plan;
            const auto& pb = plan_pool[k].plan;
            if (pa.visits != pb.visits) continue;
            for (size_t v = 0; v < pa.visits.size(); ++v)
                if (pa.levels[v] != pb.levels[v]) {
                    period = pa.visits[v];
                    value = pa.levels[v];
                    break;
                }
        }
        if (period < 0)
            throw std::logic_error("no branching candidate for fractional second level");
        SecondNode on, off;
        on.ctx = cur.ctx;
        on.ctx.level_rules[ri].forced[period] = value;
        on.bound = node_value;
        on.id = next_id++;
        off.ctx = cur.ctx;
        off.ctx.level_rules[ri].forbidden[period].push_back(value);
        off.bound = node_value;
        off.id = next_id++;
        open.push(std::move(on));
        open.push(std::move(off));
    }

    ws.stats.pp_time +=
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    if (best) {
        result.pattern = std::move(best);
        result.reduced_cost = best_rc;
    }
    return result;
}

std::vector<std::vector<int>> savings_cvrp(const Instance& inst,
                                           const std::vector<double>& demand) {
    const int N = inst.n_retailers;
    const auto& c = inst.dist;
    struct Route {
        std::vector<int> seq;  // retailers only, in visit order
        double load = 0.0;
        bool alive = true;
    };
    std::vector<Route> routes;
    std::vector<int> where(N + 1, -1);
    for (int i = 1; i <= N; ++i) {
        routes.push_back({{i}, demand[i], true});
        where[i] = i - 1;
    }
    auto route_len = [&](const std::vector<int>& seq) {
        double len = c[0][seq.front()];
        for (size_t k = 0; k + 1 < seq.size(); ++k) len += c[seq[k]][seq[k + 1]];
        return len + c[seq.back()][0];
    };
    struct Saving {
        double value;
        int i, j;
    };
    std::vector<Saving> savings;
    for (int i = 1; i <= N; ++i)
        for (int j = 1; j <= N; ++j)
            if (i != j) savings.push_back({c[i][0] + c[0][j] - c[i][j], i, j});
    std::stable_sort(savings.begin(), savings.end(), [](const Saving& a, const Saving& b) {
        if (a.value != b.value) return a.value > b.value;
        return std::make_pair(a.i, a.j) < std::make_pair(b.i, b.j);
    });
    for (const Saving& s : savings) {
        int ra = where[s.i], rb = where[s.j];
        if (ra == rb || !routes[ra].alive || !routes[rb].alive) continue;
        if (routes[ra].seq.back() != s.i || routes[rb].seq.front() != s.j) continue;
        if (routes[ra].load + routes[rb].load > inst.capacity + 1e-9) continue;
        std::vector<int> merged = routes[ra].seq;
        merged.insert(merged.end(), routes[rb].seq.begin(), routes[rb].seq.end());
        if (route_len(merged) > inst.max_tour_len + 1e-9) continue;
        routes[ra].seq = std::move(merged);
        routes[ra].load += routes[rb].load;
        routes[rb].alive = false;
        for (int v : routes[ra].seq) where[v] = ra;
    }
    std::vector<std::vector<int>> out;
    for (const Route& r : routes) {
        if (!r.alive) continue;
        if (route_len(r.seq) > inst.max_tour_len + 1e-9 || r.load > inst.capacity + 1e-9)
            continue;  // infeasible singleton; artificials take over
        std::vector<int> seq{0};
        seq.insert(seq.end(), r.seq.begin(), r.seq.end());
        seq.push_back(0);
        out.push_back(std::move(seq));
    }
    return out;
}

std::vector<Pattern> initial_columns(Workspace& ws) {
    const Instance& inst = *ws.inst;
    const int N = inst.n_retailers;
    const int T = inst.cycle_len;

    // Every-period visiting plans; levels from the cyclic chain DP so the
    // no-overshoot inequalities hold from the start.
    std::vector<ReplenishmentPlan> plans(N);
    PlanDuals zero;
    zero.psi.assign(T, 0.0);
    zero.delta.assign(T, 0.0);
    for (int i = 0; i < N; ++i) {
        std::vector<CyclicInterval> chain;
        for (int t = 0; t < T; ++t) chain.emplace_back(t, next_period(t, T), T);
        ChainResult cr = chain_dp(chain, i, zero, inst, ws.bounds, ws.cache,
                                  /*cyclic=*/true, nullptr);
        ReplenishmentPlan plan;
        for (int t = 0; t < T; ++t) {
            plan.visits.push_back(t);
            plan.levels.push_back(cr.feasible ? cr.levels[t] : 0);
        }
        plans[i] = std::move(plan);
    }

    // Worst-case per-visit delivery drives the packing.
    std::vector<double> demand(N + 1, 0.0);
    for (int i = 0; i < N; ++i) {
        double peak = 0.0;
        for (int t = 0; t < T; ++t)
            peak = std::max(peak,
                            plan_delivery_coeff(inst, plans[i], t, ws.bounds.u[i]));
        demand[i + 1] = peak;
    }

    std::vector<Pattern> out;
    for (const auto& seq : savings_cvrp(inst, demand)) {
        Pattern pat;
        pat.cost = inst.vehicle_cost;
        double len = 0.0;
        for (size_t k = 0; k + 1 < seq.size(); ++k) len += inst.dist[seq[k]][seq[k + 1]];
        for (int t = 0; t < T; ++t) pat.routes[t] = seq;
        pat.transport = inst.trans_cost * len;  // executed every period
        double inv = 0.0;
        for (int v : seq) {
            if (v == 0) continue;
            int i = v - 1;
            pat.retailers.push_back(i);
            pat.plans.push_back(plans[i]);
            inv += plan_inventory_cost(inst, i, plans[i], ws.cache) / T;
            pat.cost += ws.retailer_constant[i];
        }
        std::sort(pat.retailers.begin(), pat.retailers.end());
        pat.inventory = inv;
        pat.cost += pat.transport + inv;
        out.push_back(std::move(pat));
    }
    return out;
}

}  // namespace drcirp::detail
