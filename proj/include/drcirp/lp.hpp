#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace drcirp {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class RowSense { LE, EQ, GE };

enum class LpStatus { Optimal, Infeasible, Unbounded, NumericFailure };

// Sparse LP in row/variable form. Variables carry individual bounds
// (possibly infinite); rows carry a sense and a finite right-hand side.
class LpProblem {
public:
    explicit LpProblem(bool maximize = false) : maximize_(maximize) {}

    int add_var(double obj, double lb = 0.0, double ub = kInf, std::string name = {});
    int add_row(RowSense sense, double rhs, std::string name = {});
    void add_coeff(int row, int var, double value);

    int n_vars() const { return static_cast<int>(obj_.size()); }
    int n_rows() const { return static_cast<int>(rhs_.size()); }
    bool maximize() const { return maximize_; }

    // Plain-text fixed-format listing for offline inspection.
    std::string dump() const;

    double obj(int j) const { return obj_[j]; }
    double lb(int j) const { return lb_[j]; }
    double ub(int j) const { return ub_[j]; }
    RowSense sense(int i) const { return sense_[i]; }
    double rhs(int i) const { return rhs_[i]; }

    struct Triplet {
        int row;
        int var;
        double value;
    };
    const std::vector<Triplet>& coeffs() const { return coeffs_; }
    const std::string& var_name(int j) const { return var_names_[j]; }
    const std::string& row_name(int i) const { return row_names_[i]; }

private:
    bool maximize_;
    std::vector<double> obj_, lb_, ub_, rhs_;
    std::vector<RowSense> sense_;
    std::vector<Triplet> coeffs_;
    std::vector<std::string> var_names_, row_names_;
};

struct LpSolution {
    LpStatus status = LpStatus::NumericFailure;
    double objective = 0.0;
    std::vector<double> x;             // primal value per variable
    std::vector<double> duals;         // one per row
    std::vector<double> reduced_cost;  // one per variable

    bool optimal() const { return status == LpStatus::Optimal; }
};

// Bounded-variable primal simplex with a dense factorized basis.
// Largest-coefficient pricing with a Bland fallback after 2(m+n)
// consecutive degenerate pivots. Deterministic for identical input.
LpSolution solve_lp(const LpProblem& p, double tol = 1e-7);

constexpr double kIntegralityTol = 1e-6;

inline bool is_integral(double v, double tol = kIntegralityTol) {
    return std::abs(v - std::llround(v)) <= tol;
}

}  // namespace drcirp
