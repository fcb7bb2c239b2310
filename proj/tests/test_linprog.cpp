#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "ripkit/error.hpp"
#include "ripkit/linprog.hpp"
#include "ripkit/rng.hpp"

using namespace ripkit;
using doctest::Approx;

namespace {

// Independent oracle: enumerate every basis of the standard-form program
// (free variables split, as many columns as rows), solve the square system by
// Gaussian elimination, keep nonnegative vertices, take the best objective.
// Assumes the instance is feasible and bounded.
double oracle_min(const LpProblem& p) {
    const std::size_t nvars = p.objective.size();
    std::vector<bool> nonneg = p.nonneg;
    if (nonneg.empty()) nonneg.assign(nvars, true);

    // Split columns: (variable, sign).
    std::vector<std::pair<std::size_t, double>> cols;
    for (std::size_t v = 0; v < nvars; ++v) {
        cols.push_back({v, 1.0});
        if (!nonneg[v]) cols.push_back({v, -1.0});
    }
    const std::size_t n = cols.size();
    const std::size_t m = p.eq_rows.size();
    double best = std::numeric_limits<double>::infinity();

    std::vector<std::size_t> pick(m);
    // Enumerate all size-m subsets of columns.
    std::vector<std::size_t> idx(m);
    for (std::size_t i = 0; i < m; ++i) idx[i] = i;
    if (m == 0) return 0.0;  // lone vertex x = 0
    for (;;) {
        // Solve the m x m system over the chosen columns.
        std::vector<std::vector<double>> a(m, std::vector<double>(m + 1, 0.0));
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < m; ++j) {
                a[i][j] = cols[idx[j]].second * p.eq_rows[i][cols[idx[j]].first];
            }
            a[i][m] = p.eq_rhs[i];
        }
        bool singular = false;
        for (std::size_t c = 0; c < m && !singular; ++c) {
            std::size_t piv = c;
            for (std::size_t r = c + 1; r < m; ++r) {
                if (std::fabs(a[r][c]) > std::fabs(a[piv][c])) piv = r;
            }
            if (std::fabs(a[piv][c]) < 1e-12) {
                singular = true;
                break;
            }
            std::swap(a[c], a[piv]);
            for (std::size_t r = 0; r < m; ++r) {
                if (r == c) continue;
                const double f = a[r][c] / a[c][c];
                for (std::size_t j = c; j <= m; ++j) a[r][j] -= f * a[c][j];
            }
        }
        if (!singular) {
            bool feasible = true;
            double val = 0.0;
            for (std::size_t j = 0; j < m; ++j) {
                const double xj = a[j][m] / a[j][j];
                if (xj < -1e-9) {
                    feasible = false;
                    break;
                }
                val += p.objective[cols[idx[j]].first] * cols[idx[j]].second * xj;
            }
            if (feasible) best = std::min(best, val);
        }

        // Next combination.
        std::size_t k = m;
        while (k > 0 && idx[k - 1] == n - m + (k - 1)) --k;
        if (k == 0) break;
        ++idx[k - 1];
        for (std::size_t j = k; j < m; ++j) idx[j] = idx[j - 1] + 1;
    }
    return best;
}

} // namespace

TEST_CASE("single pinned variable") {
    LpProblem p;
    p.objective = {1.0};
    p.eq_rows = {{1.0}};
    p.eq_rhs = {3.0};
    auto r = solve_lp(p);
    REQUIRE(r.status == LpStatus::optimal);
    CHECK(r.value == Approx(3.0));
    CHECK(r.point[0] == Approx(3.0));
    CHECK(!r.alternative_optimum);
}

TEST_CASE("degenerate face reports the tie") {
    LpProblem p;
    p.objective = {1.0, 1.0};
    p.eq_rows = {{1.0, 1.0}};
    p.eq_rhs = {1.0};
    auto r = solve_lp(p);
    REQUIRE(r.status == LpStatus::optimal);
    CHECK(r.value == Approx(1.0));
    CHECK(r.point[0] + r.point[1] == Approx(1.0));
    CHECK(r.alternative_optimum);
}

TEST_CASE("unbounded without rows") {
    LpProblem p;
    p.objective = {-1.0};
    auto r = solve_lp(p);
    CHECK(r.status == LpStatus::unbounded);
}

TEST_CASE("infeasible row") {
    LpProblem p;
    p.objective = {1.0};
    p.eq_rows = {{0.0}};
    p.eq_rhs = {1.0};
    auto r = solve_lp(p);
    CHECK(r.status == LpStatus::infeasible);
}

TEST_CASE("negative rhs feasibility") {
    LpProblem p;
    p.objective = {1.0, 2.0};
    p.eq_rows = {{-1.0, -1.0}};
    p.eq_rhs = {-4.0};
    auto r = solve_lp(p);
    REQUIRE(r.status == LpStatus::optimal);
    CHECK(r.value == Approx(4.0));  // x = 4, y = 0
    CHECK(r.point[0] == Approx(4.0));
}

TEST_CASE("free variable reaches a negative value") {
    LpProblem p;
    p.objective = {1.0};
    p.eq_rows = {{1.0}};
    p.eq_rhs = {-5.0};
    p.nonneg = {false};
    auto r = solve_lp(p);
    REQUIRE(r.status == LpStatus::optimal);
    CHECK(r.value == Approx(-5.0));
    CHECK(r.point[0] == Approx(-5.0));
}

TEST_CASE("free variable absorbed while nonneg is minimized") {
    LpProblem p;
    p.objective = {1.0, 0.0};
    p.eq_rows = {{1.0, 1.0}};
    p.eq_rhs = {1.0};
    p.nonneg = {true, false};
    auto r = solve_lp(p);
    REQUIRE(r.status == LpStatus::optimal);
    CHECK(r.value == Approx(0.0).scale(1.0));
    CHECK(r.point[0] == Approx(0.0).scale(1.0));
    CHECK(r.point[1] == Approx(1.0));
}

TEST_CASE("l1 reduction micro instance") {
    // min u + w subject to u - w = -3 realizes |x| at x = -3.
    LpProblem p;
    p.objective = {1.0, 1.0};
    p.eq_rows = {{1.0, -1.0}};
    p.eq_rhs = {-3.0};
    auto r = solve_lp(p);
    REQUIRE(r.status == LpStatus::optimal);
    CHECK(r.value == Approx(3.0));
    CHECK(r.point[0] == Approx(0.0).scale(1.0));
    CHECK(r.point[1] == Approx(3.0));
}

TEST_CASE("redundant duplicated row is tolerated") {
    LpProblem p;
    p.objective = {1.0, 1.0};
    p.eq_rows = {{1.0, 1.0}, {1.0, 1.0}};
    p.eq_rhs = {1.0, 1.0};
    auto r = solve_lp(p);
    REQUIRE(r.status == LpStatus::optimal);
    CHECK(r.value == Approx(1.0));
}

TEST_CASE("validation rejects malformed input") {
    LpProblem p;
    CHECK_THROWS_AS(solve_lp(p), ValidationError);
    p.objective = {1.0};
    p.eq_rows = {{1.0, 2.0}};
    p.eq_rhs = {1.0};
    CHECK_THROWS_AS(solve_lp(p), ValidationError);
    p.eq_rows = {{1.0}};
    p.eq_rhs = {1.0, 2.0};
    CHECK_THROWS_AS(solve_lp(p), ValidationError);
}

TEST_CASE("random bounded instances match the vertex oracle") {
    RngStream rng(404);
    int solved = 0;
    for (int inst = 0; inst < 40; ++inst) {
        const std::size_t n = 4 + inst % 3;           // 4..6 variables
        const std::size_t extra = 1 + inst % 2;       // 1..2 extra rows
        LpProblem p;
        p.objective.resize(n);
        for (auto& c : p.objective) c = rng.next_gaussian();

        // Simplex row keeps the region bounded; extra rows pass through a
        // random feasible point so the instance is never empty.
        Vec x0(n);
        double s0 = 0.0;
        for (auto& x : x0) {
            x = rng.next_uniform() + 0.05;
            s0 += x;
        }
        for (auto& x : x0) x /= s0;

        p.eq_rows.push_back(Vec(n, 1.0));
        p.eq_rhs.push_back(1.0);
        for (std::size_t e = 0; e < extra; ++e) {
            Vec row(n);
            for (auto& a : row) a = rng.next_gaussian();
            p.eq_rhs.push_back(dot(row, x0));
            p.eq_rows.push_back(std::move(row));
        }

        auto r = solve_lp(p);
        REQUIRE(r.status == LpStatus::optimal);
        const double want = oracle_min(p);
        CHECK(r.value == Approx(want).epsilon(1e-7).scale(1.0));

        // Feasibility of the returned point.
        for (std::size_t i = 0; i < p.eq_rows.size(); ++i) {
            CHECK(dot(p.eq_rows[i], r.point) == Approx(p.eq_rhs[i]).epsilon(1e-8).scale(1.0));
        }
        for (double x : r.point) CHECK(x >= -1e-9);
        ++solved;
    }
    CHECK(solved == 40);
}
