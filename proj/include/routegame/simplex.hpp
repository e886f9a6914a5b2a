#pragma once

#include <vector>

namespace routegame::lp {

// Small dense linear program
//   minimize    cost . x
//   subject to  eq_a x  = eq_b
//               le_a x <= le_b
//               x >= 0
struct Problem {
    int vars = 0;
    std::vector<std::vector<double>> eq_a;
    std::vector<double> eq_b;
    std::vector<std::vector<double>> le_a;
    std::vector<double> le_b;
    std::vector<double> cost;
};

enum class Status { optimal, infeasible, unbounded, stalled };

struct Solution {
    Status status = Status::infeasible;
    double objective = 0.0;
    std::vector<double> x;
};

// Two-phase dense simplex with Bland's rule. Deterministic; intended for
// instances with at most a few dozen variables.
Solution solve(const Problem& p, double tol = 1e-9);

} // namespace routegame::lp
