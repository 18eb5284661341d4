#pragma once

#include <string>

#include "drcirp/core.hpp"
#include "drcirp/solver.hpp"

namespace drcirp {

// Instance schema (periods 1-based on disk):
//   {n, T, V, Q, maxTour, dist[][], h, b, rho, p, e?, eps1, eps2,
//    ambiguity[i][t] = {lo, hi, mean, mad}}
std::string instance_to_json(const Instance& inst);
Instance instance_from_json(const std::string& text);

Instance load_instance(const std::string& path);
void save_instance(const Instance& inst, const std::string& path);

std::string solution_to_json(const Solution& sol, int cycle_len);
void save_solution(const Solution& sol, int cycle_len, const std::string& path);
Solution solution_from_json(const std::string& text);
Solution load_solution(const std::string& path);

// Demand traces: {"periods": P, "traces": [retailer][period]}
std::string traces_to_json(const std::vector<std::vector<double>>& traces);
std::vector<std::vector<double>> traces_from_json(const std::string& text);
std::vector<std::vector<double>> load_traces(const std::string& path);
void save_traces(const std::vector<std::vector<double>>& traces, const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace drcirp
