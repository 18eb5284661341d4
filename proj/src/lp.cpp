#include "drcirp/lp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace drcirp {

int LpProblem::add_var(double obj, double lb, double ub, std::string name) {
    if (lb > ub) throw std::invalid_argument("variable lower bound exceeds upper bound");
    obj_.push_back(obj);
    lb_.push_back(lb);
    ub_.push_back(ub);
    var_names_.push_back(name.empty() ? "x" + std::to_string(obj_.size() - 1)
                                      : std::move(name));
    return static_cast<int>(obj_.size()) - 1;
}

int LpProblem::add_row(RowSense sense, double rhs, std::string name) {
    if (!std::isfinite(rhs)) throw std::invalid_argument("row rhs must be finite");
    sense_.push_back(sense);
    rhs_.push_back(rhs);
    row_names_.push_back(name.empty() ? "r" + std::to_string(rhs_.size() - 1)
                                      : std::move(name));
    return static_cast<int>(rhs_.size()) - 1;
}

void LpProblem::add_coeff(int row, int var, double value) {
    if (row < 0 || row >= n_rows() || var < 0 || var >= n_vars())
        throw std::invalid_argument("coefficient references undeclared row or variable");
    if (value != 0.0) coeffs_.push_back({row, var, value});
}

std::string LpProblem::dump() const {
    std::ostringstream os;
    os << (maximize_ ? "maximize" : "minimize") << "  vars=" << n_vars()
       << " rows=" << n_rows() << "\n";
    for (int j = 0; j < n_vars(); ++j)
        os << "  var " << var_names_[j] << " obj=" << obj_[j] << " lb=" << lb_[j]
           << " ub=" << ub_[j] << "\n";
    for (int i = 0; i < n_rows(); ++i) {
        const char* s = sense_[i] == RowSense::LE ? "<=" : sense_[i] == RowSense::EQ ? "=" : ">=";
        os << "  row " << row_names_[i] << " " << s << " " << rhs_[i] << "\n";
    }
    for (const auto& t : coeffs_)
        os << "  a[" << row_names_[t.row] << "," << var_names_[t.var] << "]=" << t.value
           << "\n";
    return os.str();
}

namespace {

// Internal standard form: min c'v subject to A v = b with column bounds.
// Columns 0..n-1 are the structural variables, n..n+m-1 the row slacks and
// n+m..n+2m-1 the phase-1 artificials.
struct Simplex {
    int n = 0;  // structural
    int m = 0;  // rows
    int total = 0;
    std::vector<std::vector<std::pair<int, double>>> cols;  // sparse columns
    std::vector<double> lb, ub, cost, phase1_cost, b;
    std::vector<int> basis;          // var index per row
    std::vector<int> state;          // 0 basic, 1 at lb, 2 at ub, 3 free at 0
    std::vector<double> binv;        // dense m*m row-major inverse
    std::vector<double> beta;        // basic variable values
    double tol;
    int pivots_since_refactor = 0;
    int degenerate_streak = 0;
    bool failed = false;

    double& B(int r, int c) { return binv[static_cast<size_t>(r) * m + c]; }

    double nonbasic_value(int j) const {
        if (state[j] == 1) return lb[j];
        if (state[j] == 2) return ub[j];
        return 0.0;
    }

    void column_times(int j, std::vector<double>& out) const {
        for (auto [r, v] : cols[j]) out[r] += v;
    }

    // w = B^{-1} * A_j
    void ftran(int j, std::vector<double>& w) {
        std::fill(w.begin(), w.end(), 0.0);
        for (auto [r, v] : cols[j])
            for (int k = 0; k < m; ++k) w[k] += binv[static_cast<size_t>(k) * m + r] * v;
    }

    // y = c_B^T B^{-1}
    void btran(const std::vector<double>& cb, std::vector<double>& y) {
        std::fill(y.begin(), y.end(), 0.0);
        for (int k = 0; k < m; ++k) {
            if (cb[k] == 0.0) continue;
            const double* row = &binv[static_cast<size_t>(k) * m];
            for (int r = 0; r < m; ++r) y[r] += cb[k] * row[r];
        }
    }

    bool refactor() {
        std::vector<double> mat(static_cast<size_t>(m) * m, 0.0);
        for (int k = 0; k < m; ++k)
            for (auto [r, v] : cols[basis[k]]) mat[static_cast<size_t>(r) * m + k] = v;
        // Gauss-Jordan with partial pivoting on the basis matrix.
        std::fill(binv.begin(), binv.end(), 0.0);
        for (int k = 0; k < m; ++k) binv[static_cast<size_t>(k) * m + k] = 1.0;
        for (int col = 0; col < m; ++col) {
            int piv = col;
            double best = std::abs(mat[static_cast<size_t>(col) * m + col]);
            for (int r = col + 1; r < m; ++r) {
                double v = std::abs(mat[static_cast<size_t>(r) * m + col]);
                if (v > best) best = v, piv = r;
            }
            if (best < 1e-11) return false;
            if (piv != col) {
                for (int c = 0; c < m; ++c) {
                    std::swap(mat[static_cast<size_t>(piv) * m + c],
                              mat[static_cast<size_t>(col) * m + c]);
                    std::swap(binv[static_cast<size_t>(piv) * m + c],
                              binv[static_cast<size_t>(col) * m + c]);
                }
            }
            double d = mat[static_cast<size_t>(col) * m + col];
            for (int c = 0; c < m; ++c) {
                mat[static_cast<size_t>(col) * m + c] /= d;
                binv[static_cast<size_t>(col) * m + c] /= d;
            }
            for (int r = 0; r < m; ++r) {
                if (r == col) continue;
                double f = mat[static_cast<size_t>(r) * m + col];
                if (f == 0.0) continue;
                for (int c = 0; c < m; ++c) {
                    mat[static_cast<size_t>(r) * m + c] -=
                        f * mat[static_cast<size_t>(col) * m + c];
                    binv[static_cast<size_t>(r) * m + c] -=
                        f * binv[static_cast<size_t>(col) * m + c];
                }
            }
        }
        pivots_since_refactor = 0;
        return true;
    }

    void recompute_beta() {
        std::vector<double> rhs = b;
        std::vector<double> acc(m, 0.0);
        for (int j = 0; j < total; ++j) {
            if (state[j] == 0) continue;
            double v = nonbasic_value(j);
            if (v == 0.0) continue;
            for (auto [r, a] : cols[j]) acc[r] += a * v;
        }
        for (int r = 0; r < m; ++r) rhs[r] -= acc[r];
        for (int k = 0; k < m; ++k) {
            double s = 0.0;
            const double* row = &binv[static_cast<size_t>(k) * m];
            for (int r = 0; r < m; ++r) s += row[r] * rhs[r];
            beta[k] = s;
        }
    }

    // One simplex phase on the given cost vector. Returns:
    //  0 optimal, 1 unbounded, 2 numeric failure / iteration limit.
    int run(const std::vector<double>& c) {
        std::vector<double> cb(m), y(m), w(m);
        std::vector<int> basis_pos(total, -1);
        const long iter_limit = 2000 + 300L * (m + total);
        degenerate_streak = 0;
        for (long iter = 0; iter < iter_limit; ++iter) {
            for (int k = 0; k < m; ++k) cb[k] = c[basis[k]];
            btran(cb, y);

            const bool bland = degenerate_streak > 2 * (m + total);
            int enter = -1, dir = 0;
            double best_score = tol;
            for (int j = 0; j < total; ++j) {
                if (state[j] == 0) continue;
                if (lb[j] == ub[j]) continue;  // fixed, never enters
                double d = c[j];
                for (auto [r, v] : cols[j]) d -= y[r] * v;
                int cand_dir = 0;
                if (state[j] == 1 && d < -tol) cand_dir = 1;
                else if (state[j] == 2 && d > tol) cand_dir = -1;
                else if (state[j] == 3 && std::abs(d) > tol) cand_dir = d < 0 ? 1 : -1;
                if (cand_dir == 0) continue;
                if (bland) { enter = j; dir = cand_dir; break; }
                if (std::abs(d) > best_score) {
                    best_score = std::abs(d);
                    enter = j;
                    dir = cand_dir;
                }
            }
            if (enter < 0) return 0;

            ftran(enter, w);
            // Ratio test: entering moves by step >= 0 in direction dir.
            double limit = ub[enter] - lb[enter];  // own bound flip distance
            int leave = -1;      // basis position of the blocking variable
            int leave_state = 0; // 1 -> leaves at its lb, 2 -> at its ub
            for (int k = 0; k < m; ++k) {
                double g = dir * w[k];
                if (std::abs(g) < 1e-9) continue;
                int jb = basis[k];
                double step;
                int st;
                if (g > 0) {
                    if (lb[jb] == -kInf) continue;
                    step = (beta[k] - lb[jb]) / g;
                    st = 1;
                } else {
                    if (ub[jb] == kInf) continue;
                    step = (beta[k] - ub[jb]) / g;
                    st = 2;
                }
                if (step < -1e-9) step = 0.0;
                if (step < limit - 1e-12) {  // first minimum wins on ties
                    limit = std::max(step, 0.0);
                    leave = k;
                    leave_state = st;
                }
            }
            if (!std::isfinite(limit)) return 1;  // unbounded direction

            if (limit <= tol) degenerate_streak++; else degenerate_streak = 0;

            if (leave < 0) {
                // Bound flip: entering variable crosses to its other bound.
                state[enter] = state[enter] == 1 ? 2 : 1;
                for (int k = 0; k < m; ++k) beta[k] -= limit * dir * w[k];
                continue;
            }

            // Basis change.
            double enter_val = nonbasic_value(enter) + dir * limit;
            for (int k = 0; k < m; ++k) beta[k] -= limit * dir * w[k];
            int out_var = basis[leave];
            state[out_var] = leave_state;
            basis[leave] = enter;
            state[enter] = 0;
            beta[leave] = enter_val;

            double piv = w[leave];
            if (std::abs(piv) < 1e-11) {
                if (!refactor()) return 2;
                recompute_beta();
                continue;
            }
            // Product-form update of the dense inverse.
            double* prow = &binv[static_cast<size_t>(leave) * m];
            for (int r = 0; r < m; ++r) prow[r] /= piv;
            for (int k = 0; k < m; ++k) {
                if (k == leave) continue;
                double f = w[k];
                if (f == 0.0) continue;
                double* row = &binv[static_cast<size_t>(k) * m];
                for (int r = 0; r < m; ++r) row[r] -= f * prow[r];
            }
            if (++pivots_since_refactor >= 64) {
                if (!refactor()) return 2;
                recompute_beta();
            }
        }
        return 2;
    }
};

}  // namespace

LpSolution solve_lp(const LpProblem& p, double tol) {
    Simplex s;
    s.tol = tol;
    s.n = p.n_vars();
    s.m = p.n_rows();
    s.total = s.n + 2 * s.m;
    s.cols.assign(s.total, {});
    s.lb.assign(s.total, 0.0);
    s.ub.assign(s.total, kInf);
    s.b.resize(s.m);

    const double sign = p.maximize() ? -1.0 : 1.0;
    for (int j = 0; j < s.n; ++j) {
        s.lb[j] = p.lb(j);
        s.ub[j] = p.ub(j);
    }
    for (const auto& t : p.coeffs()) s.cols[t.var].push_back({t.row, t.value});
    for (int j = 0; j < s.n; ++j) {
        auto& col = s.cols[j];
        std::sort(col.begin(), col.end());
        // merge duplicate entries
        size_t out = 0;
        for (size_t k = 0; k < col.size(); ++k) {
            if (out > 0 && col[out - 1].first == col[k].first)
                col[out - 1].second += col[k].second;
            else
                col[out++] = col[k];
        }
        col.resize(out);
    }
    for (int i = 0; i < s.m; ++i) {
        s.b[i] = p.rhs(i);
        int slack = s.n + i;
        s.cols[slack] = {{i, 1.0}};
        switch (p.sense(i)) {
            case RowSense::LE: s.lb[slack] = 0.0; s.ub[slack] = kInf; break;
            case RowSense::GE: s.lb[slack] = -kInf; s.ub[slack] = 0.0; break;
            case RowSense::EQ: s.lb[slack] = 0.0; s.ub[slack] = 0.0; break;
        }
    }

    // Nonbasic start: nearest finite bound, or free at zero.
    s.state.assign(s.total, 1);
    for (int j = 0; j < s.n + s.m; ++j) {
        if (s.lb[j] != -kInf)
            s.state[j] = 1;
        else if (s.ub[j] != kInf)
            s.state[j] = 2;
        else
            s.state[j] = 3;
    }

    // Artificial columns carry the residual sign so they start nonnegative.
    std::vector<double> residual = s.b;
    for (int j = 0; j < s.n + s.m; ++j) {
        double v = s.nonbasic_value(j);
        if (v == 0.0) continue;
        for (auto [r, a] : s.cols[j]) residual[r] -= a * v;
    }
    s.basis.resize(s.m);
    s.beta.assign(s.m, 0.0);
    s.binv.assign(static_cast<size_t>(s.m) * s.m, 0.0);
    for (int i = 0; i < s.m; ++i) {
        int art = s.n + s.m + i;
        double sg = residual[i] < 0 ? -1.0 : 1.0;
        s.cols[art] = {{i, sg}};
        s.lb[art] = 0.0;
        s.ub[art] = kInf;
        s.basis[i] = art;
        s.state[art] = 0;
        s.beta[i] = sg * residual[i];
        s.B(i, i) = sg;
    }

    LpSolution sol;

    // Phase 1: drive the artificial infeasibility to zero.
    std::vector<double> c1(s.total, 0.0);
    for (int i = 0; i < s.m; ++i) c1[s.n + s.m + i] = 1.0;
    int rc = s.run(c1);
    if (rc == 2) { sol.status = LpStatus::NumericFailure; return sol; }
    double infeas = 0.0;
    for (int k = 0; k < s.m; ++k)
        if (s.basis[k] >= s.n + s.m) infeas += s.beta[k];
    if (infeas > 1e-6) {
        sol.status = LpStatus::Infeasible;
        sol.duals.assign(s.m, 0.0);
        return sol;
    }
    // Pin artificials so phase 2 cannot reuse them.
    for (int i = 0; i < s.m; ++i) {
        int art = s.n + s.m + i;
        s.ub[art] = 0.0;
        if (s.state[art] != 0) s.state[art] = 1;
    }

    std::vector<double> c2(s.total, 0.0);
    for (int j = 0; j < s.n; ++j) c2[j] = sign * p.obj(j);
    rc = s.run(c2);
    if (rc == 2) { sol.status = LpStatus::NumericFailure; return sol; }
    if (rc == 1) { sol.status = LpStatus::Unbounded; return sol; }

    // Assemble the primal point.
    std::vector<double> x(s.total, 0.0);
    for (int j = 0; j < s.total; ++j)
        if (s.state[j] != 0) x[j] = s.nonbasic_value(j);
    for (int k = 0; k < s.m; ++k) x[s.basis[k]] = s.beta[k];

    std::vector<double> cb(s.m), y(s.m);
    for (int k = 0; k < s.m; ++k) cb[k] = c2[s.basis[k]];
    s.btran(cb, y);

    sol.status = LpStatus::Optimal;
    sol.x.assign(x.begin(), x.begin() + s.n);
    double obj = 0.0;
    for (int j = 0; j < s.n; ++j) obj += p.obj(j) * sol.x[j];
    sol.objective = obj;
    sol.duals.resize(s.m);
    for (int i = 0; i < s.m; ++i) sol.duals[i] = sign * y[i];
    sol.reduced_cost.resize(s.n);
    for (int j = 0; j < s.n; ++j) {
        double d = c2[j];
        for (auto [r, v] : s.cols[j]) d -= y[r] * v;
        sol.reduced_cost[j] = sign * d;
    }
    return sol;
}

}  // namespace drcirp
