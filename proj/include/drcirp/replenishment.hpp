#pragma once

#include <optional>
#include <ostream>
#include <utility>
#include <vector>

#include "drcirp/ambiguity.hpp"
#include "drcirp/core.hpp"
#include "drcirp/inventory.hpp"

namespace drcirp {

// Order-up-to restrictions collected from branching decisions: a forced
// value and/or forbidden values per period.
struct LevelRules {
    std::vector<int> forced;                  // per period, -1 when free
    std::vector<std::vector<int>> forbidden;  // per period

    explicit LevelRules(int cycle_len = 0)
        : forced(cycle_len, -1), forbidden(cycle_len) {}

    bool allows(int period, int level) const;
    bool unrestricted(int period) const;
};

// Duals seen by the replenishment pricing problem of one retailer, in the
// paper's sign convention (psi and theta nonnegative for binding rows).
struct PlanDuals {
    std::vector<double> psi;    // capacity dual per period
    std::vector<double> delta;  // coverage dual per period for this retailer
    double theta = 0.0;
    double pi = 0.0;       // first-level dual of this retailer
    double constant = 0.0;  // extra per-plan constants (branching rows etc.)
};

struct IntervalDuals {
    double psi_start = 0.0;
    double psi_end = 0.0;
    double delta_start = 0.0;
};

// Golden-section anchor of one (retailer, interval) pair: the optimal level
// under zero duals, reused by the warm cost update.
struct IntervalCostEntry {
    int retailer = 0;
    CyclicInterval interval;
    int zero_dual_s = -1;  // unset until first computed
};

// Exact minimizer of (1/T) f_inv + (psi_start - psi_end) s over admissible
// integer levels, plus the constant terms delta_start + psi_end * sum U.
// Golden-section search shrinking to a four-point sweep.
std::pair<int, double> interval_cost(IntervalCostEntry& entry, const IntervalDuals& duals,
                                     const Instance& inst, const BoundsGrid& bounds,
                                     FInvCache& cache,
                                     const LevelRules* rules = nullptr);

// Warm start from the zero-dual optimum: walk one step at a time in the
// dual-gradient direction against cached values, falling back to a full
// golden-section search when the cached-difference test is inconclusive.
// Always returns the exact optimum.
std::pair<int, double> warm_update(IntervalCostEntry& entry, const IntervalDuals& duals,
                                   const Instance& inst, const BoundsGrid& bounds,
                                   FInvCache& cache, const LevelRules* rules = nullptr);

// Joint level optimization along a chain of enforced intervals
// (consecutive end-to-start), optionally closed into a full cycle.
// Transitions respect s_next >= s_prev - sum L over the interval.
struct ChainResult {
    bool feasible = false;
    double cost = 0.0;
    std::vector<int> levels;  // one per chain interval start
};

ChainResult chain_dp(const std::vector<CyclicInterval>& chain, int retailer,
                     const PlanDuals& duals, const Instance& inst,
                     const BoundsGrid& bounds, FInvCache& cache, bool cyclic,
                     const LevelRules* rules = nullptr);

// Branching state of the lazy-constraint search: forbidden and enforced
// interval sets (as (start,end) pairs).
struct LazyNodeState {
    std::vector<std::pair<int, int>> forbidden;  // A_N
    std::vector<std::pair<int, int>> enforced;   // A_Y
    double bound = 0.0;
};

struct PlanPricingContext {
    std::vector<std::pair<int, int>> forced_intervals;     // A_Y^temporal seeds
    std::vector<std::pair<int, int>> forbidden_intervals;  // A_N^temporal seeds
    LevelRules level_rules;
    std::ostream* debug = nullptr;  // lazy tree dump when set
};

struct PricedPlan {
    ReplenishmentPlan plan;
    double reduced_cost = 0.0;
};

// Golden-section anchors of one retailer, persisted across pricing rounds
// so the warm cost update can start from the zero-dual optima.
struct RetailerPricingCache {
    std::map<std::pair<int, int>, IntervalCostEntry> anchors;
};

// Minimum-cost cyclic plan ignoring the no-overshoot constraints, obtained
// by cyclic temporal labeling over all candidate cycle-ending periods.
// Interval costs may be +inf (forbidden); returns nullopt when every cycle
// is forbidden.
std::optional<PricedPlan> solve_relaxed_pricing(
    int retailer, const PlanDuals& duals, const Instance& inst, const BoundsGrid& bounds,
    FInvCache& cache, const std::vector<std::pair<int, int>>& enforced,
    const std::vector<std::pair<int, int>>& forbidden, const LevelRules* rules = nullptr,
    RetailerPricingCache* warm = nullptr, bool use_dominance = true);

// 2nd-PP2: best-bound branch-and-bound over lazy no-overshoot constraints.
// Every interval of the returned plan satisfies the deterministic
// no-overshoot inequality. nullopt when no feasible plan exists.
std::optional<PricedPlan> solve_pricing_with_lazy(int retailer, const PlanDuals& duals,
                                                  const Instance& inst,
                                                  const BoundsGrid& bounds,
                                                  FInvCache& cache,
                                                  const PlanPricingContext& ctx,
                                                  RetailerPricingCache* warm = nullptr);

// No-overshoot slack of one plan interval: s_end - s_start + sum L.
double overshoot_slack(const ReplenishmentPlan& plan, const CyclicInterval& iv,
                       const std::vector<double>& l_row);

}  // namespace drcirp
