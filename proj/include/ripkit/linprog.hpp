#pragma once

#include <cstddef>
#include <vector>

#include "ripkit/matrix.hpp"

namespace ripkit {

enum class LpStatus { optimal, infeasible, unbounded };

// min objective . x  subject to  eq_rows . x = eq_rhs  and  x_i >= 0 for every
// i with nonneg[i] (free otherwise). An empty nonneg means all variables are
// nonnegative. Rows are stored as plain vectors so zero-row systems are legal.
struct LpProblem {
    Vec objective;
    std::vector<Vec> eq_rows;
    Vec eq_rhs;
    std::vector<bool> nonneg;
};

struct LpResult {
    LpStatus status = LpStatus::optimal;
    double value = 0.0;
    Vec point;                          // length = objective size when optimal
    bool alternative_optimum = false;   // another basis attains the optimum
    std::size_t iterations = 0;
};

// Dense two-phase primal simplex with Bland's rule. Free variables are split
// internally. Deterministic; throws IterationLimitError past 1e6 pivots.
LpResult solve_lp(const LpProblem& p);

} // namespace ripkit
