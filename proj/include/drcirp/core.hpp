#pragma once

#include <cstdint>
#include <string>
#include <vector>

// Period indices are 0-based in memory (0..T-1). The JSON / CLI layer is the
// only place that converts to the 1-based convention used in file formats.

namespace drcirp {

// Support interval, mean and mean-absolute-deviation bound of one
// retailer-period demand. A cell is valid when 0 <= lo < mean < hi and
// mad >= 0 (the mean strictly inside the support keeps the set nonempty).
struct AmbiguityCell {
    double lo = 0.0;
    double hi = 0.0;
    double mean = 0.0;
    double mad = 0.0;

    bool valid() const {
        return lo >= 0.0 && lo < mean && mean < hi && mad >= 0.0;
    }
};

struct Instance {
    int n_retailers = 0;
    int cycle_len = 0;   // T
    int n_vehicles = 0;  // V
    double capacity = 0.0;
    double max_tour_len = 0.0;
    std::vector<std::vector<double>> dist;  // (N+1)x(N+1), node 0 = warehouse
    double hold_cost = 0.0;
    double backorder_cost = 0.0;
    double trans_cost = 0.0;    // per distance unit
    double vehicle_cost = 0.0;  // per active vehicle
    double emergency_cost = 0.0;
    bool has_emergency_cost = false;
    std::vector<std::vector<AmbiguityCell>> ambiguity;  // [retailer][period]
    double eps_capacity = 0.3;   // epsilon_1
    double eps_overshoot = 0.1;  // epsilon_2

    const AmbiguityCell& cell(int retailer, int period) const {
        return ambiguity[retailer][period];
    }

    // Throws std::invalid_argument on any structural violation.
    void validate() const;
};

// The ordered period sequence from start to end, wrapping past T-1.
// start == end denotes the full cycle beginning at start (the self-arc
// (t,t) encoding a once-per-cycle visit), so len() == T in that case.
class CyclicInterval {
public:
    CyclicInterval(int start, int end, int cycle_len);

    int start() const { return start_; }
    int end() const { return end_; }
    int cycle_len() const { return cycle_len_; }

    // Number of forward steps from start to end; equals the interval length
    // used by the worst-case cost LP (demand periods between the two visits).
    int len() const;

    // Periods {start,...,end} in cyclic order. For start == end this is the
    // whole cycle followed by the closing revisit of start.
    std::vector<int> periods() const;

    // Demand periods [start, end-1] in cyclic order; size == len().
    std::vector<int> demand_periods() const;

    bool contains(int period) const;

    // Forward steps from t to t2 inside the interval; negative if t2
    // precedes t. Throws if either period lies outside the interval.
    int steps_between(int t, int t2) const;

    int succ(int t) const;
    int pred(int t) const;

    bool operator==(const CyclicInterval& o) const {
        return start_ == o.start_ && end_ == o.end_ && cycle_len_ == o.cycle_len_;
    }

private:
    int position(int period) const;  // -1 when not in the interval
    int start_;
    int end_;
    int cycle_len_;
};

inline int next_period(int t, int T) { return (t + 1) % T; }
inline int prev_period(int t, int T) { return (t - 1 + T) % T; }

// A cyclic replenishment plan: canonical sorted visit periods plus the
// order-up-to level at each visit (levels[k] belongs to visits[k]).
struct ReplenishmentPlan {
    std::vector<int> visits;
    std::vector<int> levels;

    // Intervals (visit, next visit) in cyclic order; a single visit yields
    // the self-interval covering the whole cycle.
    std::vector<CyclicInterval> intervals(int cycle_len) const;

    int level_at(int period) const;

    bool operator==(const ReplenishmentPlan& o) const {
        return visits == o.visits && levels == o.levels;
    }
};

struct Violation {
    std::string what;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool feasible() const { return violations.empty(); }
    void add(std::string msg) { violations.push_back({std::move(msg)}); }
};

struct Arc {
    int from = 0;
    int to = 0;
};

// One vehicle-period tour as an arc set. An empty arc set (or the single
// self-loop (0,0)) is the empty tour.
using Tour = std::vector<Arc>;

// Checks at-most-once visitation, warehouse departure/return, flow
// conservation, connectivity to the warehouse (subtour check) and the tour
// length limit for every (period, vehicle) tour.
ValidationReport validate_routing(const std::vector<std::vector<Tour>>& routes,
                                  const Instance& inst);

// Checks coverage, the per-period visit limit, flow conservation and the
// cycle restriction for a canonical visit set.
ValidationReport validate_plan(const std::vector<int>& visits, int cycle_len);

// Node sequence 0 -> ... -> 0 for a tour arc set; empty for the empty tour.
// Returns false when the arcs do not form a single warehouse-rooted loop.
bool tour_sequence(const Tour& tour, int n_nodes, std::vector<int>& seq);

double tour_length(const Tour& tour, const std::vector<std::vector<double>>& dist);

}  // namespace drcirp
