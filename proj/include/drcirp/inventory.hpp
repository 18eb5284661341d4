#pragma once

#include <array>
#include <map>
#include <mutex>
#include <vector>

#include "drcirp/core.hpp"
#include "drcirp/lp.hpp"

namespace drcirp {

struct InventoryCostQuery {
    int retailer = 0;
    CyclicInterval interval;
    int order_up_to = 0;  // s at the opening visit
};

// One atom of the extracted worst-case distribution. turning is the 0-based
// period where inventory first depletes, or kNoTurning when the stock
// suffices for the whole interval (the paper's t-hat = 0 case).
inline constexpr int kNoTurning = -1;

struct WorstCaseAtom {
    double prob = 0.0;
    std::vector<double> demand;  // one entry per demand period of the interval
    int turning = kNoTurning;
};

struct WorstCaseDistribution {
    std::vector<WorstCaseAtom> atoms;
};

// Memoized f_inv values keyed by (retailer, start, end, s). Concurrent
// insert-or-get is allowed; duplicate solves are benign.
class FInvCache {
public:
    bool lookup(const std::array<int, 4>& key, double& value) const {
        std::lock_guard<std::mutex> g(mu_);
        auto it = map_.find(key);
        if (it == map_.end()) return false;
        value = it->second;
        return true;
    }
    void store(const std::array<int, 4>& key, double value) {
        std::lock_guard<std::mutex> g(mu_);
        map_.emplace(key, value);
    }
    size_t size() const {
        std::lock_guard<std::mutex> g(mu_);
        return map_.size();
    }

private:
    mutable std::mutex mu_;
    std::map<std::array<int, 4>, double> map_;
};

// Largest admissible order-up-to level for the interval (the support-sum
// bound on s at the opening visit).
int max_order_up_to(const InventoryCostQuery& q, const Instance& inst);

// The linear optimization problem whose optimum equals the worst-case
// expected holding+backorder cost over the interval. Absolute values are
// linearized with split variables; the strict turning inequalities are
// relaxed to their closure.
LpProblem build_lop(const InventoryCostQuery& q, const Instance& inst);

// Worst-case expected inventory cost over the interval, memoized in cache.
double f_inv(const InventoryCostQuery& q, const Instance& inst, FInvCache& cache);

// Uncached single evaluation.
double f_inv_once(const InventoryCostQuery& q, const Instance& inst);

// Optimal discrete distribution behind f_inv, preferring the fewest atoms
// among alternate optima (secondary lexicographic solve).
WorstCaseDistribution extract_worst_distribution(const InventoryCostQuery& q,
                                                 const Instance& inst);

// Expected holding+backorder cost of a discrete demand distribution over the
// interval; reproduces f_inv when fed the extracted distribution.
double expected_interval_cost(const WorstCaseDistribution& dist, double s, double h,
                              double b);
double interval_cost_of_path(const std::vector<double>& demand, double s, double h,
                             double b);

// Midpoint convexity of f_inv over the given integer grid.
ValidationReport check_convexity(int retailer, const CyclicInterval& iv,
                                 const Instance& inst, const std::vector<int>& s_grid,
                                 FInvCache& cache, double tol = 1e-7);

}  // namespace drcirp
