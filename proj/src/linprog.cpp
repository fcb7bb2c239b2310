#include "ripkit/linprog.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ripkit/error.hpp"

namespace ripkit {

namespace {

constexpr double kPivotTol = 1e-9;
constexpr std::size_t kIterationCap = 1000000;

// Dense tableau: rows 0..m-1 are constraints, columns 0..n-1 variables,
// column n the rhs. basis[i] names the variable basic in row i. The reduced
// cost row is kept separately in `costs` (length n) with objective offset
// `obj_shift` so that current value = obj_shift.
struct Tableau {
    std::size_t m = 0, n = 0;
    std::vector<Vec> row;   // m rows of length n + 1
    std::vector<std::size_t> basis;

    double& at(std::size_t i, std::size_t j) { return row[i][j]; }
    double rhs(std::size_t i) const { return row[i][n]; }
};

void pivot(Tableau& t, Vec& costs, double& value, std::size_t r, std::size_t c) {
    const double p = t.at(r, c);
    for (double& x : t.row[r]) x /= p;
    for (std::size_t i = 0; i < t.m; ++i) {
        if (i == r) continue;
        const double f = t.at(i, c);
        if (f == 0.0) continue;
        for (std::size_t j = 0; j <= t.n; ++j) t.row[i][j] -= f * t.row[r][j];
    }
    const double fc = costs[c];
    if (fc != 0.0) {
        for (std::size_t j = 0; j < t.n; ++j) costs[j] -= fc * t.at(r, j);
        value += fc * t.rhs(r);
    }
    t.basis[r] = c;
}

// Bland's rule: entering = lowest index with negative reduced cost; leaving =
// minimum ratio, ties broken by the lowest basic variable index. `allowed`
// masks columns that may enter (artificials are barred in phase 2).
// Returns false when unbounded.
bool simplex(Tableau& t, Vec& costs, double& value,
             const std::vector<bool>& allowed, std::size_t& iterations) {
    for (;;) {
        std::size_t enter = t.n;
        for (std::size_t j = 0; j < t.n; ++j) {
            if (allowed[j] && costs[j] < -kPivotTol) {
                enter = j;
                break;
            }
        }
        if (enter == t.n) return true;

        std::size_t leave = t.m;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < t.m; ++i) {
            const double a = t.at(i, enter);
            if (a > kPivotTol) {
                const double ratio = t.rhs(i) / a;
                if (ratio < best - 1e-12 ||
                    (ratio < best + 1e-12 &&
                     (leave == t.m || t.basis[i] < t.basis[leave]))) {
                    best = ratio;
                    leave = i;
                }
            }
        }
        if (leave == t.m) return false;

        if (++iterations > kIterationCap) {
            throw IterationLimitError("solve_lp: simplex iteration cap reached");
        }
        pivot(t, costs, value, leave, enter);
    }
}

} // namespace

LpResult solve_lp(const LpProblem& p) {
    const std::size_t nvars = p.objective.size();
    if (nvars == 0) {
        throw ValidationError("solve_lp: empty objective");
    }
    if (p.eq_rows.size() != p.eq_rhs.size()) {
        throw ValidationError("solve_lp: row/rhs count mismatch");
    }
    for (const Vec& r : p.eq_rows) {
        if (r.size() != nvars) {
            throw ValidationError("solve_lp: row length differs from objective");
        }
    }
    std::vector<bool> nonneg = p.nonneg;
    if (nonneg.empty()) nonneg.assign(nvars, true);
    if (nonneg.size() != nvars) {
        throw ValidationError("solve_lp: nonneg mask length mismatch");
    }

    // Standard form: free variables split as x = x+ - x-.
    std::vector<std::size_t> pos_col(nvars), neg_col(nvars, SIZE_MAX);
    std::size_t nstd = 0;
    for (std::size_t i = 0; i < nvars; ++i) {
        pos_col[i] = nstd++;
        if (!nonneg[i]) neg_col[i] = nstd++;
    }

    const std::size_t mrows = p.eq_rows.size();
    const std::size_t total = nstd + mrows;  // artificials appended

    Tableau t;
    t.m = mrows;
    t.n = total;
    t.row.assign(mrows, Vec(total + 1, 0.0));
    t.basis.resize(mrows);

    for (std::size_t i = 0; i < mrows; ++i) {
        const double sign = p.eq_rhs[i] < 0.0 ? -1.0 : 1.0;
        for (std::size_t v = 0; v < nvars; ++v) {
            const double a = sign * p.eq_rows[i][v];
            t.at(i, pos_col[v]) = a;
            if (neg_col[v] != SIZE_MAX) t.at(i, neg_col[v]) = -a;
        }
        t.at(i, nstd + i) = 1.0;
        t.row[i][total] = sign * p.eq_rhs[i];
        t.basis[i] = nstd + i;
    }

    std::size_t iterations = 0;

    // Phase 1: minimize the artificial sum. Reduced costs start as
    // c_j - sum of constraint rows over columns (c = 1 on artificials).
    Vec costs(total, 0.0);
    double value = 0.0;
    for (std::size_t j = 0; j < nstd; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < mrows; ++i) s += t.at(i, j);
        costs[j] = -s;
    }
    for (std::size_t i = 0; i < mrows; ++i) value += t.rhs(i);

    std::vector<bool> allow_all(total, true);
    simplex(t, costs, value, allow_all, iterations);

    LpResult result;
    result.iterations = iterations;
    if (value > 1e-8) {
        result.status = LpStatus::infeasible;
        return result;
    }

    // Drive leftover artificials out of the basis; rows that cannot pivot are
    // redundant and get erased.
    for (std::size_t i = 0; i < t.m;) {
        if (t.basis[i] < nstd) {
            ++i;
            continue;
        }
        std::size_t c = nstd;
        for (std::size_t j = 0; j < nstd; ++j) {
            if (std::fabs(t.at(i, j)) > kPivotTol) {
                c = j;
                break;
            }
        }
        if (c < nstd) {
            pivot(t, costs, value, i, c);
            ++i;
        } else {
            t.row.erase(t.row.begin() + static_cast<std::ptrdiff_t>(i));
            t.basis.erase(t.basis.begin() + static_cast<std::ptrdiff_t>(i));
            --t.m;
        }
    }

    // Phase 2 objective over the standard columns.
    Vec c_std(total, 0.0);
    for (std::size_t v = 0; v < nvars; ++v) {
        c_std[pos_col[v]] = p.objective[v];
        if (neg_col[v] != SIZE_MAX) c_std[neg_col[v]] = -p.objective[v];
    }
    costs = c_std;
    value = 0.0;
    for (std::size_t i = 0; i < t.m; ++i) {
        const double cb = c_std[t.basis[i]];
        if (cb == 0.0) continue;
        for (std::size_t j = 0; j < total; ++j) costs[j] -= cb * t.at(i, j);
        value += cb * t.rhs(i);
    }

    std::vector<bool> allowed(total, false);
    for (std::size_t j = 0; j < nstd; ++j) allowed[j] = true;

    if (!simplex(t, costs, value, allowed, iterations)) {
        result.status = LpStatus::unbounded;
        result.iterations = iterations;
        return result;
    }
    result.iterations = iterations;

    Vec x_std(nstd, 0.0);
    for (std::size_t i = 0; i < t.m; ++i) {
        if (t.basis[i] < nstd) x_std[t.basis[i]] = t.rhs(i);
    }
    result.point.assign(nvars, 0.0);
    for (std::size_t v = 0; v < nvars; ++v) {
        result.point[v] = x_std[pos_col[v]];
        if (neg_col[v] != SIZE_MAX) result.point[v] -= x_std[neg_col[v]];
    }
    result.value = dot(p.objective, result.point);

    std::vector<bool> in_basis(total, false);
    for (std::size_t i = 0; i < t.m; ++i) in_basis[t.basis[i]] = true;
    for (std::size_t j = 0; j < nstd && !result.alternative_optimum; ++j) {
        if (!in_basis[j] && std::fabs(costs[j]) <= 1e-9) {
            // Skip the split twin of a basic free variable: its zero reduced
            // cost is an artifact of the +/- decomposition.
            bool twin = false;
            for (std::size_t v = 0; v < nvars; ++v) {
                if (neg_col[v] == SIZE_MAX) continue;
                if ((pos_col[v] == j && in_basis[neg_col[v]]) ||
                    (neg_col[v] == j && in_basis[pos_col[v]])) {
                    twin = true;
                    break;
                }
            }
            if (!twin) result.alternative_optimum = true;
        }
    }
    result.status = LpStatus::optimal;
    return result;
}

} // namespace ripkit
