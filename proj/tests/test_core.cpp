#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "drcirp/core.hpp"

using namespace drcirp;

namespace {

// Spec and paper quote periods 1-based; tests convert at the boundary.
CyclicInterval iv1(int t1, int t2, int T) { return CyclicInterval(t1 - 1, t2 - 1, T); }

std::vector<int> periods1(const CyclicInterval& iv) {
    std::vector<int> out;
    for (int t : iv.periods()) out.push_back(t + 1);
    return out;
}

Instance tiny_instance(int n, int T) {
    Instance inst;
    inst.n_retailers = n;
    inst.cycle_len = T;
    inst.n_vehicles = n;
    inst.capacity = 100;
    inst.max_tour_len = 1e9;
    inst.dist.assign(n + 1, std::vector<double>(n + 1, 1.0));
    for (int i = 0; i <= n; ++i) inst.dist[i][i] = 0.0;
    inst.hold_cost = 1;
    inst.backorder_cost = 4;
    inst.trans_cost = 0.25;
    inst.vehicle_cost = 10;
    inst.ambiguity.assign(n, std::vector<AmbiguityCell>(T, {5, 15, 10, 2}));
    return inst;
}

}  // namespace

TEST_CASE("interval periods follow the cyclic order") {
    CHECK(periods1(iv1(3, 5, 5)) == std::vector<int>{3, 4, 5});
    CHECK(periods1(iv1(4, 2, 5)) == std::vector<int>{4, 5, 1, 2});

    // single-visit plan: the self interval covers the whole cycle
    CyclicInterval self = iv1(1, 1, 3);
    CHECK(periods1(self) == std::vector<int>{1, 2, 3, 1});
    CHECK(self.len() == 3);
}

TEST_CASE("interval length matches the period count") {
    for (int T = 1; T <= 6; ++T)
        for (int a = 0; a < T; ++a)
            for (int b = 0; b < T; ++b) {
                CyclicInterval iv(a, b, T);
                CHECK(iv.len() == static_cast<int>(iv.demand_periods().size()));
                CHECK(iv.periods().size() == iv.demand_periods().size() + 1);
            }
}

TEST_CASE("steps_between implements the sequence arithmetic") {
    CyclicInterval iv = iv1(4, 2, 5);
    CHECK(iv.steps_between(4 - 1, 1 - 1) == 2);
    CHECK(iv.succ(5 - 1) == 1 - 1);
    CHECK(iv.steps_between(5 - 1, 5 - 1) == 0);
    CHECK_THROWS_AS(iv.steps_between(3 - 1, 4 - 1), std::invalid_argument);
}

TEST_CASE("steps_between is a strict total order on the interval") {
    for (int T = 2; T <= 5; ++T)
        for (int a = 0; a < T; ++a)
            for (int b = 0; b < T; ++b) {
                CyclicInterval iv(a, b, T);
                auto ps = iv.demand_periods();
                for (size_t x = 0; x < ps.size(); ++x)
                    for (size_t y = 0; y < ps.size(); ++y) {
                        int d = iv.steps_between(ps[x], ps[y]);
                        CHECK(d == static_cast<int>(y) - static_cast<int>(x));
                    }
            }
}

TEST_CASE("routing validation accepts the empty tour") {
    Instance inst = tiny_instance(2, 2);
    std::vector<std::vector<Tour>> routes(2, std::vector<Tour>(1));
    routes[0][0] = {{0, 0}};  // explicit self-loop
    routes[1][0] = {};        // no arcs at all
    CHECK(validate_routing(routes, inst).feasible());
}

TEST_CASE("routing validation accepts a simple tour within limits") {
    Instance inst = tiny_instance(2, 1);
    std::vector<std::vector<Tour>> routes(1, std::vector<Tour>(1));
    routes[0][0] = {{0, 1}, {1, 2}, {2, 0}};
    CHECK(validate_routing(routes, inst).feasible());

    inst.max_tour_len = 2.5;  // tour length is 3
    CHECK_FALSE(validate_routing(routes, inst).feasible());
}

TEST_CASE("routing validation flags a detached subtour") {
    Instance inst = tiny_instance(4, 1);
    std::vector<std::vector<Tour>> routes(1, std::vector<Tour>(1));
    routes[0][0] = {{0, 1}, {1, 0}, {2, 3}, {3, 2}};
    auto rep = validate_routing(routes, inst);
    CHECK_FALSE(rep.feasible());
    bool mentions_subtour = false;
    for (auto& v : rep.violations)
        if (v.what.find("subtour") != std::string::npos) mentions_subtour = true;
    CHECK(mentions_subtour);
}

TEST_CASE("plan validation") {
    CHECK(validate_plan({0, 2}, 5).feasible());
    CHECK_FALSE(validate_plan({}, 5).feasible());
    CHECK(validate_plan({0, 1, 2, 3, 4}, 5).feasible());
    CHECK_FALSE(validate_plan({0, 0}, 5).feasible());
    CHECK_FALSE(validate_plan({5}, 5).feasible());
}

TEST_CASE("plans accepted are exactly the sets representable in the temporal network") {
    // Brute force over arc subsets of the temporal graph for small T: the
    // admissible visit sets are exactly the nonempty subsets of periods.
    for (int T = 1; T <= 4; ++T) {
        std::vector<std::pair<int, int>> arcs;
        for (int a = 0; a < T; ++a)
            for (int b = 0; b < T; ++b) arcs.push_back({a, b});
        std::set<std::vector<int>> representable;
        for (uint32_t mask = 1; mask < (1u << arcs.size()); ++mask) {
            // feasibility per the replenishment feasible set: out-degree <= 1,
            // flow conservation, exactly one wrapping arc, coverage
            std::vector<int> outdeg(T, 0), indeg(T, 0);
            int wraps = 0;
            for (size_t k = 0; k < arcs.size(); ++k) {
                if (!(mask & (1u << k))) continue;
                outdeg[arcs[k].first]++;
                indeg[arcs[k].second]++;
                if (arcs[k].second <= arcs[k].first) ++wraps;
            }
            bool ok = wraps == 1;
            for (int t = 0; t < T && ok; ++t) {
                if (outdeg[t] > 1) ok = false;
                if (outdeg[t] != indeg[t]) ok = false;
            }
            if (!ok) continue;
            // connectivity of the selected arcs as one cycle
            std::vector<int> visits;
            for (int t = 0; t < T; ++t)
                if (outdeg[t] == 1) visits.push_back(t);
            // walk the cycle
            std::map<int, int> succ;
            for (size_t k = 0; k < arcs.size(); ++k)
                if (mask & (1u << k)) succ[arcs[k].first] = arcs[k].second;
            int start = visits.front(), cur = start;
            size_t steps = 0;
            do {
                cur = succ[cur];
                ++steps;
            } while (cur != start && steps <= visits.size());
            if (cur != start || steps != visits.size()) continue;
            representable.insert(visits);
        }
        std::set<std::vector<int>> accepted;
        for (uint32_t w = 1; w < (1u << T); ++w) {
            std::vector<int> visits;
            for (int t = 0; t < T; ++t)
                if (w & (1u << t)) visits.push_back(t);
            if (validate_plan(visits, T).feasible()) accepted.insert(visits);
        }
        CHECK(accepted == representable);
    }
}

TEST_CASE("instance validation rejects bad cells and parameters") {
    Instance inst = tiny_instance(2, 2);
    CHECK_NOTHROW(inst.validate());
    inst.ambiguity[0][0] = {10, 10, 10, 1};  // collapsed support
    CHECK_THROWS_AS(inst.validate(), std::invalid_argument);
    inst = tiny_instance(2, 2);
    inst.eps_capacity = 0.0;
    CHECK_THROWS_AS(inst.validate(), std::invalid_argument);
    inst = tiny_instance(2, 2);
    inst.dist[0][1] = -1.0;
    CHECK_THROWS_AS(inst.validate(), std::invalid_argument);
}
