#include "drcirp/json_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace drcirp {

using ordered_json = nlohmann::ordered_json;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

std::string instance_to_json(const Instance& inst) {
    ordered_json j;
    j["n"] = inst.n_retailers;
    j["T"] = inst.cycle_len;
    j["V"] = inst.n_vehicles;
    j["Q"] = inst.capacity;
    j["maxTour"] = inst.max_tour_len;
    j["dist"] = inst.dist;
    j["h"] = inst.hold_cost;
    j["b"] = inst.backorder_cost;
    j["rho"] = inst.trans_cost;
    j["p"] = inst.vehicle_cost;
    if (inst.has_emergency_cost) j["e"] = inst.emergency_cost;
    j["eps1"] = inst.eps_capacity;
    j["eps2"] = inst.eps_overshoot;
    ordered_json amb = ordered_json::array();
    for (const auto& row : inst.ambiguity) {
        ordered_json r = ordered_json::array();
        for (const auto& c : row)
            r.push_back({{"lo", c.lo}, {"hi", c.hi}, {"mean", c.mean}, {"mad", c.mad}});
        amb.push_back(std::move(r));
    }
    j["ambiguity"] = std::move(amb);
    return j.dump(2) + "\n";
}

Instance instance_from_json(const std::string& text) {
    ordered_json j = ordered_json::parse(text);
    Instance inst;
    inst.n_retailers = j.at("n").get<int>();
    inst.cycle_len = j.at("T").get<int>();
    inst.n_vehicles = j.at("V").get<int>();
    inst.capacity = j.at("Q").get<double>();
    inst.max_tour_len = j.at("maxTour").get<double>();
    inst.dist = j.at("dist").get<std::vector<std::vector<double>>>();
    inst.hold_cost = j.at("h").get<double>();
    inst.backorder_cost = j.at("b").get<double>();
    inst.trans_cost = j.at("rho").get<double>();
    inst.vehicle_cost = j.at("p").get<double>();
    if (j.contains("e")) {
        inst.emergency_cost = j.at("e").get<double>();
        inst.has_emergency_cost = true;
    }
    inst.eps_capacity = j.at("eps1").get<double>();
    inst.eps_overshoot = j.at("eps2").get<double>();
    for (const auto& row : j.at("ambiguity")) {
        std::vector<AmbiguityCell> cells;
        for (const auto& c : row) {
            AmbiguityCell cell;
            cell.lo = c.at("lo").get<double>();
            cell.hi = c.at("hi").get<double>();
            cell.mean = c.at("mean").get<double>();
            cell.mad = c.at("mad").get<double>();
            cells.push_back(cell);
        }
        inst.ambiguity.push_back(std::move(cells));
    }
    inst.validate();
    return inst;
}

Instance load_instance(const std::string& path) {
    return instance_from_json(read_file(path));
}

void save_instance(const Instance& inst, const std::string& path) {
    write_file(path, instance_to_json(inst));
}

namespace {

const char* status_name(SolveStatus s) {
    switch (s) {
        case SolveStatus::Optimal: return "optimal";
        case SolveStatus::Feasible: return "feasible";
        case SolveStatus::Infeasible: return "infeasible";
    }
    return "?";
}

}  // namespace

std::string solution_to_json(const Solution& sol, int cycle_len) {
    ordered_json j;
    j["status"] = status_name(sol.status);
    j["policy"] = policy_name(sol.policy);
    j["objective"] = sol.objective;
    j["lowerBound"] = sol.lower_bound;
    j["gap"] = sol.gap;
    ordered_json costs;
    costs["vehicle"] = sol.cost_vehicle;
    costs["transport"] = sol.cost_transport;
    costs["inventory"] = sol.cost_inventory;
    costs["emergency"] = sol.cost_emergency;
    costs["total"] = sol.objective;
    j["costs"] = std::move(costs);
    ordered_json clusters = ordered_json::array();
    for (const auto& cs : sol.clusters) {
        ordered_json c;
        ordered_json retailers = ordered_json::array();
        for (int i : cs.retailers) retailers.push_back(i + 1);
        c["retailers"] = std::move(retailers);
        if (cs.kappa > 0) c["kappa"] = cs.kappa;
        ordered_json routes;
        for (const auto& [t, seq] : cs.routes) routes[std::to_string(t + 1)] = seq;
        c["routes"] = std::move(routes);
        ordered_json plans;
        for (size_t k = 0; k < cs.retailers.size(); ++k) {
            ordered_json p;
            ordered_json visits = ordered_json::array();
            for (int v : cs.plans[k].visits) visits.push_back(v + 1);
            p["visits"] = std::move(visits);
            ordered_json levels;
            for (size_t z = 0; z < cs.plans[k].visits.size(); ++z)
                levels[std::to_string(cs.plans[k].visits[z] + 1)] = cs.plans[k].levels[z];
            p["levels"] = std::move(levels);
            plans[std::to_string(cs.retailers[k] + 1)] = std::move(p);
        }
        c["plans"] = std::move(plans);
        c["cost"] = cs.cost;
        clusters.push_back(std::move(c));
    }
    j["clusters"] = std::move(clusters);
    ordered_json stats;
    stats["firstLevelNodes"] = sol.stats.first_level_nodes;
    stats["columns"] = sol.stats.columns;
    stats["ppTime"] = sol.stats.pp_time;
    stats["secondLevelNodes"] = sol.stats.second_level_nodes;
    stats["routes"] = sol.stats.routes;
    stats["routeTime"] = sol.stats.route_time;
    stats["replnsh"] = sol.stats.replenishments;
    stats["replnshTime"] = sol.stats.replenishment_time;
    stats["wallTime"] = sol.stats.wall_time;
    stats["timedOutPricingCalls"] = sol.stats.timed_out_pricing_calls;
    j["stats"] = std::move(stats);
    (void)cycle_len;
    return j.dump(2) + "\n";
}

void save_solution(const Solution& sol, int cycle_len, const std::string& path) {
    write_file(path, solution_to_json(sol, cycle_len));
}

Solution solution_from_json(const std::string& text) {
    ordered_json j = ordered_json::parse(text);
    Solution sol;
    std::string st = j.at("status").get<std::string>();
    sol.status = st == "optimal" ? SolveStatus::Optimal
                 : st == "feasible" ? SolveStatus::Feasible
                                    : SolveStatus::Infeasible;
    sol.policy = parse_policy(j.at("policy").get<std::string>());
    sol.objective = j.at("objective").get<double>();
    sol.lower_bound = j.at("lowerBound").get<double>();
    sol.gap = j.at("gap").get<double>();
    sol.cost_vehicle = j.at("costs").at("vehicle").get<double>();
    sol.cost_transport = j.at("costs").at("transport").get<double>();
    sol.cost_inventory = j.at("costs").at("inventory").get<double>();
    sol.cost_emergency = j.at("costs").at("emergency").get<double>();
    for (const auto& c : j.at("clusters")) {
        ClusterSolution cs;
        for (const auto& r : c.at("retailers")) cs.retailers.push_back(r.get<int>() - 1);
        if (c.contains("kappa")) cs.kappa = c.at("kappa").get<int>();
        for (auto it = c.at("routes").begin(); it != c.at("routes").end(); ++it)
            cs.routes[std::stoi(it.key()) - 1] = it.value().get<std::vector<int>>();
        for (int i : cs.retailers) {
            const auto& p = c.at("plans").at(std::to_string(i + 1));
            ReplenishmentPlan plan;
            for (const auto& v : p.at("visits")) plan.visits.push_back(v.get<int>() - 1);
            for (int v : plan.visits)
                plan.levels.push_back(p.at("levels").at(std::to_string(v + 1)).get<int>());
            cs.plans.push_back(std::move(plan));
        }
        if (c.contains("cost")) cs.cost = c.at("cost").get<double>();
        sol.clusters.push_back(std::move(cs));
    }
    return sol;
}

Solution load_solution(const std::string& path) {
    return solution_from_json(read_file(path));
}

std::string traces_to_json(const std::vector<std::vector<double>>& traces) {
    ordered_json j;
    j["periods"] = traces.empty() ? 0 : traces[0].size();
    j["traces"] = traces;
    return j.dump() + "\n";
}

std::vector<std::vector<double>> traces_from_json(const std::string& text) {
    ordered_json j = ordered_json::parse(text);
    return j.at("traces").get<std::vector<std::vector<double>>>();
}

std::vector<std::vector<double>> load_traces(const std::string& path) {
    return traces_from_json(read_file(path));
}

void save_traces(const std::vector<std::vector<double>>& traces, const std::string& path) {
    write_file(path, traces_to_json(traces));
}

}  // namespace drcirp
