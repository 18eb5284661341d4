#include <cstdio>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "drcirp/harness.hpp"
#include "drcirp/inventory.hpp"
#include "drcirp/json_io.hpp"
#include "drcirp/solver.hpp"

namespace {

using namespace drcirp;

constexpr int kExitUsage = 2;
constexpr int kExitInfeasible = 3;

struct CommonFlags {
    std::string policy = "flexible";
    double eps1 = -1.0, eps2 = -1.0;
    double time_limit = 3600.0, pp_time_limit = 300.0;
    uint64_t seed = 0;
    double emergency_cost = -1.0;
    std::string out;
};

void apply_overrides(Instance& inst, const CommonFlags& f) {
    if (f.eps1 >= 0) inst.eps_capacity = f.eps1;
    if (f.eps2 >= 0) inst.eps_overshoot = f.eps2;
    if (f.emergency_cost >= 0) {
        inst.emergency_cost = f.emergency_cost;
        inst.has_emergency_cost = true;
    }
}

SolverConfig make_config(const CommonFlags& f) {
    SolverConfig cfg;
    cfg.policy = parse_policy(f.policy);
    cfg.time_limit = f.time_limit;
    cfg.pp_time_limit = f.pp_time_limit;
    cfg.seed = f.seed;
    return cfg;
}

std::string csv_cell(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Distributionally robust cyclic inventory routing solver"};
    app.require_subcommand(1);

    CommonFlags flags;
    GeneratorConfig gen_cfg;
    std::string instance_path, solution_path, traces_path;
    int wd_retailer = 1, wd_t1 = 1, wd_t2 = 1, wd_level = 0;
    std::string cycle_type = "cyclic";
    std::vector<int> bench_sizes{3};
    int bench_instances = 1;

    auto add_common = [&](CLI::App* cmd, bool with_policy = true) {
        if (with_policy)
            cmd->add_option("--policy", flags.policy,
                            "fixed-interval | consistent | flexible");
        cmd->add_option("--eps1", flags.eps1, "capacity chance level override");
        cmd->add_option("--eps2", flags.eps2, "overshoot chance level override");
        cmd->add_option("--time-limit", flags.time_limit, "total seconds");
        cmd->add_option("--pp-time-limit", flags.pp_time_limit,
                        "seconds per second-level pricing call");
        cmd->add_option("--seed", flags.seed, "random seed");
        cmd->add_option("--emergency-cost", flags.emergency_cost,
                        "unit emergency transportation cost");
        cmd->add_option("--out", flags.out, "output path");
    };

    auto* generate = app.add_subcommand("generate", "generate a synthetic instance");
    generate->add_option("--n", gen_cfg.n_retailers, "retailers");
    generate->add_option("--T", gen_cfg.cycle_len, "cycle length");
    generate->add_option("--V", gen_cfg.n_vehicles, "vehicles");
    generate->add_option("--Q", gen_cfg.capacity, "vehicle capacity");
    generate->add_option("--samples", gen_cfg.samples, "estimation samples per cell");
    generate->add_option("--test-periods", gen_cfg.test_periods, "held-out horizon");
    generate->add_option("--mean-lo", gen_cfg.mean_lo);
    generate->add_option("--mean-hi", gen_cfg.mean_hi);
    generate->add_option("--mad-lo", gen_cfg.mad_lo);
    generate->add_option("--mad-hi", gen_cfg.mad_hi);
    generate->add_option("--cycle-type", cycle_type, "stationary | cyclic");
    add_common(generate, false);

    auto* solve_cmd = app.add_subcommand("solve", "solve an instance");
    solve_cmd->add_option("instance", instance_path, "instance JSON")->required();
    add_common(solve_cmd);

    auto* oracle_cmd = app.add_subcommand("oracle", "brute-force reference solve");
    oracle_cmd->add_option("instance", instance_path, "instance JSON")->required();
    add_common(oracle_cmd);

    auto* simulate_cmd = app.add_subcommand("simulate", "replay a solution on traces");
    simulate_cmd->add_option("instance", instance_path, "instance JSON")->required();
    simulate_cmd->add_option("solution", solution_path, "solution JSON")->required();
    simulate_cmd->add_option("traces", traces_path, "traces JSON")->required();
    add_common(simulate_cmd, false);

    auto* wd = app.add_subcommand("worst-dist", "print worst-case distribution atoms");
    wd->add_option("instance", instance_path, "instance JSON")->required();
    wd->add_option("--retailer", wd_retailer, "retailer (1-based)")->required();
    wd->add_option("--t1", wd_t1, "interval start period (1-based)")->required();
    wd->add_option("--t2", wd_t2, "interval end period (1-based)")->required();
    wd->add_option("--level", wd_level, "order-up-to level")->required();
    add_common(wd, false);

    auto* bench = app.add_subcommand("bench", "KPI table over generated instances");
    bench->add_option("--sizes", bench_sizes, "retailer counts");
    bench->add_option("--instances", bench_instances, "instances per size");
    bench->add_option("--T", gen_cfg.cycle_len, "cycle length");
    bench->add_option("--Q", gen_cfg.capacity, "vehicle capacity");
    bench->add_option("--samples", gen_cfg.samples, "estimation samples per cell");
    add_common(bench, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    try {
        if (*generate) {
            gen_cfg.seed = flags.seed;
            gen_cfg.eps1 = flags.eps1 >= 0 ? flags.eps1 : gen_cfg.eps1;
            gen_cfg.eps2 = flags.eps2 >= 0 ? flags.eps2 : gen_cfg.eps2;
            gen_cfg.cycle =
                cycle_type == "stationary" ? CycleType::Stationary : CycleType::Cyclic;
            GeneratedInstance g = generate_instance(gen_cfg);
            std::string out = flags.out.empty() ? "instance.json" : flags.out;
            save_instance(g.instance, out);
            save_traces(g.traces, out + ".traces.json");
            std::cout << "wrote " << out << " and " << out << ".traces.json\n";
            return 0;
        }
        if (*solve_cmd) {
            Instance inst = load_instance(instance_path);
            apply_overrides(inst, flags);
            Solution sol = solve(inst, make_config(flags));
            if (sol.status == SolveStatus::Infeasible) {
                std::cerr << "infeasible\n";
                return kExitInfeasible;
            }
            std::string text = solution_to_json(sol, inst.cycle_len);
            if (!flags.out.empty())
                write_file(flags.out, text);
            else
                std::cout << text;
            if (sol.status == SolveStatus::Feasible)
                std::cerr << "time limit reached, gap " << sol.gap << "\n";
            return 0;
        }
        if (*oracle_cmd) {
            Instance inst = load_instance(instance_path);
            apply_overrides(inst, flags);
            FInvCache cache;
            Solution sol = brute_force_solve(inst, parse_policy(flags.policy), cache);
            if (sol.status == SolveStatus::Infeasible) {
                std::cerr << "infeasible\n";
                return kExitInfeasible;
            }
            std::string text = solution_to_json(sol, inst.cycle_len);
            if (!flags.out.empty())
                write_file(flags.out, text);
            else
                std::cout << text;
            return 0;
        }
        if (*simulate_cmd) {
            Instance inst = load_instance(instance_path);
            apply_overrides(inst, flags);
            Solution sol = load_solution(solution_path);
            auto traces = load_traces(traces_path);
            SimulationReport rep = simulate(sol, traces, inst);
            std::ostringstream os;
            os << "serviceLevel," << rep.service_level << "\n"
               << "vehicleUtilization," << rep.vehicle_utilization << "\n"
               << "overshootRate," << rep.overshoot_rate << "\n"
               << "avgOvershoot," << rep.avg_overshoot << "\n"
               << "emergencyRate," << rep.emergency_rate << "\n"
               << "avgEmergency," << rep.avg_emergency << "\n"
               << "realizedTransport," << rep.realized_transport << "\n"
               << "realizedInventory," << rep.realized_inventory << "\n";
            if (!flags.out.empty())
                write_file(flags.out, os.str());
            else
                std::cout << os.str();
            return 0;
        }
        if (*wd) {
            Instance inst = load_instance(instance_path);
            apply_overrides(inst, flags);
            InventoryCostQuery q{wd_retailer - 1,
                                 CyclicInterval(wd_t1 - 1, wd_t2 - 1, inst.cycle_len),
                                 wd_level};
            WorstCaseDistribution dist = extract_worst_distribution(q, inst);
            std::ostringstream os;
            os << "prob,turning";
            for (size_t k = 0; k < dist.atoms.front().demand.size(); ++k)
                os << ",d" << (k + 1);
            os << "\n";
            for (const auto& atom : dist.atoms) {
                os << atom.prob << ","
                   << (atom.turning == kNoTurning ? 0 : atom.turning + 1);
                for (double d : atom.demand) os << "," << d;
                os << "\n";
            }
            if (!flags.out.empty())
                write_file(flags.out, os.str());
            else
                std::cout << os.str();
            return 0;
        }
        if (*bench) {
            std::ostringstream os;
            os << "retailers,policy,time,cost,clusters,avgInterval,serviceLevel,"
                  "vehicleUtil,overshootPct,avgOvershoot,emergencyPct,avgEmergency\n";
            for (int n : bench_sizes) {
                for (int k = 0; k < bench_instances; ++k) {
                    GeneratorConfig gc = gen_cfg;
                    gc.n_retailers = n;
                    gc.n_vehicles = n;
                    gc.seed = flags.seed + 1000ull * n + k;
                    GeneratedInstance g = generate_instance(gc);
                    for (const char* pol : {"fixed-interval", "consistent", "flexible"}) {
                        CommonFlags f = flags;
                        f.policy = pol;
                        Instance inst = g.instance;
                        apply_overrides(inst, f);
                        Solution sol = solve(inst, make_config(f));
                        if (sol.status == SolveStatus::Infeasible) continue;
                        SimulationReport rep = simulate(sol, g.traces, inst);
                        double visits = 0;
                        int retailers = 0;
                        for (const auto& cs : sol.clusters)
                            for (const auto& plan : cs.plans) {
                                visits += static_cast<double>(plan.visits.size());
                                ++retailers;
                            }
                        double avg_interval =
                            retailers > 0 ? inst.cycle_len * retailers / visits : 0.0;
                        os << n << ',' << pol << ',' << csv_cell(sol.stats.wall_time)
                           << ',' << csv_cell(sol.objective) << ',' << sol.clusters.size()
                           << ',' << csv_cell(avg_interval) << ','
                           << csv_cell(rep.service_level) << ','
                           << csv_cell(rep.vehicle_utilization) << ','
                           << csv_cell(rep.overshoot_rate) << ','
                           << csv_cell(rep.avg_overshoot) << ','
                           << csv_cell(rep.emergency_rate) << ','
                           << csv_cell(rep.avg_emergency) << "\n";
                    }
                }
            }
            if (!flags.out.empty())
                write_file(flags.out, os.str());
            else
                std::cout << os.str();
            return 0;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitUsage;
}
