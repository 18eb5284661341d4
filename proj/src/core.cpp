#include "drcirp/core.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace drcirp {

void Instance::validate() const {
    if (cycle_len < 1) throw std::invalid_argument("cycle_len must be >= 1");
    if (n_retailers < 1) throw std::invalid_argument("need at least one retailer");
    if (n_vehicles < 1) throw std::invalid_argument("need at least one vehicle");
    if (!(eps_capacity > 0.0 && eps_capacity < 1.0))
        throw std::invalid_argument("eps_capacity must lie in (0,1)");
    if (!(eps_overshoot >= 0.0 && eps_overshoot < 1.0))
        throw std::invalid_argument("eps_overshoot must lie in [0,1)");
    if (hold_cost < 0 || backorder_cost < 0 || trans_cost < 0 || vehicle_cost < 0 ||
        capacity < 0)
        throw std::invalid_argument("costs and capacity must be nonnegative");
    const size_t n = static_cast<size_t>(n_retailers) + 1;
    if (dist.size() != n) throw std::invalid_argument("dist must be (N+1)x(N+1)");
    for (size_t i = 0; i < n; ++i) {
        if (dist[i].size() != n) throw std::invalid_argument("dist must be square");
        if (dist[i][i] != 0.0) throw std::invalid_argument("dist diagonal must be zero");
        for (double d : dist[i])
            if (d < 0.0 || !std::isfinite(d))
                throw std::invalid_argument("distances must be finite and >= 0");
    }
    if (ambiguity.size() != static_cast<size_t>(n_retailers))
        throw std::invalid_argument("ambiguity grid must have N rows");
    for (const auto& row : ambiguity) {
        if (row.size() != static_cast<size_t>(cycle_len))
            throw std::invalid_argument("ambiguity grid must have T columns");
        for (const auto& c : row)
            if (!c.valid())
                throw std::invalid_argument("ambiguity cell requires 0 <= lo < mean < hi, mad >= 0");
    }
}

CyclicInterval::CyclicInterval(int start, int end, int cycle_len)
    : start_(start), end_(end), cycle_len_(cycle_len) {
    if (cycle_len < 1) throw std::invalid_argument("cycle_len must be >= 1");
    if (start < 0 || start >= cycle_len || end < 0 || end >= cycle_len)
        throw std::invalid_argument("interval endpoints must lie in [0,T)");
}

int CyclicInterval::len() const {
    if (end_ > start_) return end_ - start_;
    return end_ + cycle_len_ - start_;  // == T when start_ == end_
}

std::vector<int> CyclicInterval::periods() const {
    std::vector<int> out;
    out.reserve(len() + 1);
    int t = start_;
    out.push_back(t);
    for (int k = 0; k < len(); ++k) {
        t = next_period(t, cycle_len_);
        out.push_back(t);
    }
    return out;
}

std::vector<int> CyclicInterval::demand_periods() const {
    std::vector<int> out;
    out.reserve(len());
    int t = start_;
    for (int k = 0; k < len(); ++k) {
        out.push_back(t);
        t = next_period(t, cycle_len_);
    }
    return out;
}

int CyclicInterval::position(int period) const {
    if (period < 0 || period >= cycle_len_) return -1;
    int off = period - start_;
    if (off < 0) off += cycle_len_;
    if (off == 0) return 0;  // the opening visit, not the closing one
    return off <= len() ? off : -1;
}

bool CyclicInterval::contains(int period) const { return position(period) >= 0; }

int CyclicInterval::steps_between(int t, int t2) const {
    int p = position(t), q = position(t2);
    if (p < 0 || q < 0)
        throw std::invalid_argument("period not in interval");
    return q - p;
}

int CyclicInterval::succ(int t) const {
    int p = position(t);
    if (p < 0 || p + 1 > len()) throw std::invalid_argument("no successor in interval");
    return next_period(t, cycle_len_);
}

int CyclicInterval::pred(int t) const {
    int p = position(t);
    if (p <= 0) throw std::invalid_argument("no predecessor in interval");
    return prev_period(t, cycle_len_);
}

std::vector<CyclicInterval> ReplenishmentPlan::intervals(int cycle_len) const {
    std::vector<CyclicInterval> out;
    const size_t k = visits.size();
    out.reserve(k);
    for (size_t a = 0; a < k; ++a)
        out.emplace_back(visits[a], visits[(a + 1) % k], cycle_len);
    return out;
}

int ReplenishmentPlan::level_at(int period) const {
    for (size_t a = 0; a < visits.size(); ++a)
        if (visits[a] == period) return levels[a];
    throw std::invalid_argument("period is not a visit of this plan");
}

bool tour_sequence(const Tour& tour, int n_nodes, std::vector<int>& seq) {
    seq.clear();
    if (tour.empty()) return true;
    if (tour.size() == 1 && tour[0].from == 0 && tour[0].to == 0) return true;
    std::vector<int> next(n_nodes, -1);
    for (const Arc& a : tour) {
        if (a.from < 0 || a.from >= n_nodes || a.to < 0 || a.to >= n_nodes) return false;
        if (next[a.from] != -1) return false;
        next[a.from] = a.to;
    }
    if (next[0] == -1) return false;
    seq.push_back(0);
    int cur = 0;
    for (size_t k = 0; k < tour.size(); ++k) {
        cur = next[cur];
        if (cur < 0) return false;
        seq.push_back(cur);
        if (cur == 0) return seq.size() == tour.size() + 1;
    }
    return false;
}

double tour_length(const Tour& tour, const std::vector<std::vector<double>>& dist) {
    double len = 0.0;
    for (const Arc& a : tour) len += dist[a.from][a.to];
    return len;
}

ValidationReport validate_routing(const std::vector<std::vector<Tour>>& routes,
                                  const Instance& inst) {
    ValidationReport rep;
    const int n_nodes = inst.n_retailers + 1;
    for (size_t t = 0; t < routes.size(); ++t) {
        for (size_t v = 0; v < routes[t].size(); ++v) {
            const Tour& tour = routes[t][v];
            const std::string tag =
                "t=" + std::to_string(t + 1) + ",v=" + std::to_string(v + 1) + ": ";
            std::vector<int> out_deg(n_nodes, 0), in_deg(n_nodes, 0);
            bool bad_node = false;
            for (const Arc& a : tour) {
                if (a.from < 0 || a.from >= n_nodes || a.to < 0 || a.to >= n_nodes) {
                    rep.add(tag + "arc references unknown node");
                    bad_node = true;
                    continue;
                }
                out_deg[a.from]++;
                in_deg[a.to]++;
            }
            if (bad_node) continue;
            bool empty_tour =
                tour.empty() || (tour.size() == 1 && tour[0].from == 0 && tour[0].to == 0);
            if (!empty_tour) {
                for (int i = 1; i < n_nodes; ++i) {
                    if (out_deg[i] > 1) rep.add(tag + "retailer visited more than once");
                    if (out_deg[i] != in_deg[i]) rep.add(tag + "flow not conserved");
                }
                if (out_deg[0] != 1 || in_deg[0] != 1)
                    rep.add(tag + "tour must depart from and return to the warehouse once");
                std::vector<int> seq;
                if (!tour_sequence(tour, n_nodes, seq))
                    rep.add(tag + "subtour detached from the warehouse");
            }
            if (tour_length(tour, inst.dist) > inst.max_tour_len + 1e-9)
                rep.add(tag + "tour length exceeds the limit");
        }
    }
    return rep;
}

ValidationReport validate_plan(const std::vector<int>& visits, int cycle_len) {
    ValidationReport rep;
    if (visits.empty()) {
        rep.add("plan covers no period");
        return rep;
    }
    std::vector<int> sorted = visits;
    std::sort(sorted.begin(), sorted.end());
    for (size_t a = 0; a + 1 < sorted.size(); ++a)
        if (sorted[a] == sorted[a + 1]) rep.add("period visited more than once in a cycle");
    for (int t : sorted)
        if (t < 0 || t >= cycle_len) rep.add("visit period outside the cycle");
    // A sorted set of in-range periods always forms one admissible cycle
    // (forward arcs plus a single wrap or self arc), so flow conservation and
    // the cycle restriction cannot fail beyond the checks above.
    return rep;
}

}  // namespace drcirp
