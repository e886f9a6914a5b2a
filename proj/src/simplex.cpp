#include "routegame/simplex.hpp"

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

namespace routegame::lp {

namespace {

constexpr double kPivotTol = 1e-11;

struct Tableau {
    int rows = 0;       // constraint rows
    int cols = 0;       // variable columns (rhs stored separately)
    std::vector<std::vector<double>> a; // rows x cols
    std::vector<double> rhs;            // per row, kept >= 0 up to roundoff
    std::vector<double> obj;            // reduced costs per column
    double obj_value = 0.0;             // current objective (minimization)
    std::vector<int> basis;             // basic variable per row
    std::vector<char> blocked;          // columns barred from entering

    void pivot(int r, int c) {
        const double piv = a[r][c];
        for (int j = 0; j < cols; ++j) a[r][j] /= piv;
        rhs[r] /= piv;
        a[r][c] = 1.0;
        for (int i = 0; i < rows; ++i) {
            if (i == r) continue;
            const double factor = a[i][c];
            if (factor == 0.0) continue;
            for (int j = 0; j < cols; ++j) a[i][j] -= factor * a[r][j];
            a[i][c] = 0.0;
            rhs[i] -= factor * rhs[r];
            if (rhs[i] < 0.0 && rhs[i] > -kPivotTol) rhs[i] = 0.0;
        }
        const double factor = obj[c];
        if (factor != 0.0) {
            for (int j = 0; j < cols; ++j) obj[j] -= factor * a[r][j];
            obj[c] = 0.0;
            obj_value -= factor * rhs[r];
        }
        basis[r] = c;
    }

    // Bland's rule: smallest eligible entering column; leaving row by the
    // ratio test with ties broken toward the smallest basic variable.
    Status iterate(double tol) {
        for (long pivots = 0; pivots < 200000; ++pivots) {
            int enter = -1;
            for (int j = 0; j < cols; ++j) {
                if (!blocked[j] && obj[j] < -tol) {
                    enter = j;
                    break;
                }
            }
            if (enter < 0) return Status::optimal;

            int leave = -1;
            double best_ratio = std::numeric_limits<double>::infinity();
            for (int i = 0; i < rows; ++i) {
                if (a[i][enter] > kPivotTol) {
                    const double ratio = rhs[i] / a[i][enter];
                    if (ratio < best_ratio ||
                        (ratio == best_ratio && (leave < 0 || basis[i] < basis[leave]))) {
                        best_ratio = ratio;
                        leave = i;
                    }
                }
            }
            if (leave < 0) return Status::unbounded;
            pivot(leave, enter);
        }
        return Status::stalled;
    }
};

} // namespace

Solution solve(const Problem& p, double tol) {
    const int n = p.vars;
    const int n_le = static_cast<int>(p.le_a.size());
    const int n_eq = static_cast<int>(p.eq_a.size());
    const int rows = n_le + n_eq;

    Tableau t;
    t.rows = rows;
    t.cols = n + n_le; // artificials appended below as needed
    t.a.assign(rows, std::vector<double>(t.cols, 0.0));
    t.rhs.assign(rows, 0.0);
    t.basis.assign(rows, -1);

    for (int i = 0; i < n_le; ++i) {
        for (int j = 0; j < n; ++j) t.a[i][j] = p.le_a[i][j];
        t.a[i][n + i] = 1.0;
        t.rhs[i] = p.le_b[i];
    }
    for (int i = 0; i < n_eq; ++i) {
        const int r = n_le + i;
        for (int j = 0; j < n; ++j) t.a[r][j] = p.eq_a[i][j];
        t.rhs[r] = p.eq_b[i];
    }
    for (int i = 0; i < rows; ++i) {
        if (t.rhs[i] < 0.0) {
            for (double& v : t.a[i]) v = -v;
            t.rhs[i] = -t.rhs[i];
        }
    }

    // Slacks with coefficient +1 and nonnegative rhs can start basic;
    // every other row gets an artificial variable.
    std::vector<int> needs_artificial;
    for (int i = 0; i < rows; ++i) {
        if (i < n_le && t.a[i][n + i] == 1.0) {
            t.basis[i] = n + i;
        } else {
            needs_artificial.push_back(i);
        }
    }
    const int first_artificial = t.cols;
    t.cols += static_cast<int>(needs_artificial.size());
    for (auto& row : t.a) row.resize(t.cols, 0.0);
    for (std::size_t k = 0; k < needs_artificial.size(); ++k) {
        const int r = needs_artificial[k];
        t.a[r][first_artificial + static_cast<int>(k)] = 1.0;
        t.basis[r] = first_artificial + static_cast<int>(k);
    }
    t.blocked.assign(t.cols, 0);

    // Phase 1: minimize the sum of artificials.
    t.obj.assign(t.cols, 0.0);
    t.obj_value = 0.0;
    for (int j = first_artificial; j < t.cols; ++j) t.obj[j] = 1.0;
    for (int r : needs_artificial) {
        for (int j = 0; j < t.cols; ++j) t.obj[j] -= t.a[r][j];
        t.obj_value -= t.rhs[r];
    }
    const Status phase1 = t.iterate(tol);
    if (phase1 == Status::stalled) return {Status::stalled, 0.0, {}};
    if (phase1 != Status::optimal || -t.obj_value > tol) return {Status::infeasible, 0.0, {}};

    // Drive artificials out of the basis; rows that cannot pivot are
    // redundant and get neutralized.
    for (int i = 0; i < t.rows; ++i) {
        if (t.basis[i] < first_artificial) continue;
        int col = -1;
        for (int j = 0; j < first_artificial; ++j) {
            if (std::abs(t.a[i][j]) > kPivotTol) {
                col = j;
                break;
            }
        }
        if (col >= 0) {
            t.pivot(i, col);
        } else {
            for (int j = 0; j < t.cols; ++j) t.a[i][j] = 0.0;
            t.a[i][t.basis[i]] = 1.0;
            t.rhs[i] = 0.0;
        }
    }
    for (int j = first_artificial; j < t.cols; ++j) t.blocked[j] = 1;

    // Phase 2: original objective expressed through the current basis.
    t.obj.assign(t.cols, 0.0);
    t.obj_value = 0.0;
    for (int j = 0; j < n; ++j) t.obj[j] = p.cost[j];
    for (int i = 0; i < t.rows; ++i) {
        const int b = t.basis[i];
        if (b < n && p.cost[b] != 0.0) {
            const double factor = p.cost[b];
            for (int j = 0; j < t.cols; ++j) t.obj[j] -= factor * t.a[i][j];
            t.obj[b] = 0.0;
            t.obj_value -= factor * t.rhs[i];
        }
    }
    const Status st = t.iterate(tol);
    if (st != Status::optimal) return {st, 0.0, {}};

    Solution sol;
    sol.status = Status::optimal;
    sol.x.assign(n, 0.0);
    for (int i = 0; i < t.rows; ++i) {
        if (t.basis[i] < n) sol.x[t.basis[i]] = t.rhs[i];
    }
    sol.objective = 0.0;
    for (int j = 0; j < n; ++j) sol.objective += p.cost[j] * sol.x[j];
    return sol;
}

} // namespace routegame::lp
