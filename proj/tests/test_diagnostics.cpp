#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "ripkit/diagnostics.hpp"
#include "ripkit/ensembles.hpp"
#include "ripkit/error.hpp"
#include "ripkit/matrix.hpp"
#include "ripkit/rng.hpp"
#include "ripkit/svd.hpp"

using namespace ripkit;
using doctest::Approx;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

RMat gaussian_cols(std::size_t m, std::size_t n, std::uint64_t seed,
                   bool unit_cols) {
    EnsembleSpec spec{EnsembleKind::gaussian, m, n, unit_cols, seed};
    return build(spec).real();
}

DenseMatrix mercedes() {
    return build({EnsembleKind::simplex_etf, 2, 3, false, 0});
}

// Two unit coordinate columns plus their normalized bisector.
DenseMatrix slanted_2x3() {
    RMat a(2, 3);
    const double r = 1.0 / std::sqrt(2.0);
    a(0, 0) = 1.0;
    a(1, 1) = 1.0;
    a(0, 2) = r;
    a(1, 2) = r;
    return DenseMatrix(a);
}

// Reduced row echelon nullspace, written against the textbook algorithm so
// the library kernels have something independent to disagree with.
std::vector<Vec> rref_nullspace(std::vector<Vec> rows, std::size_t ncols) {
    const double tol = 1e-11;
    std::size_t rank = 0;
    std::vector<std::size_t> pivot_col;
    for (std::size_t col = 0; col < ncols && rank < rows.size(); ++col) {
        std::size_t best = rank;
        for (std::size_t r = rank + 1; r < rows.size(); ++r)
            if (std::fabs(rows[r][col]) > std::fabs(rows[best][col])) best = r;
        if (std::fabs(rows[best][col]) < tol) continue;
        std::swap(rows[rank], rows[best]);
        const double piv = rows[rank][col];
        for (double& x : rows[rank]) x /= piv;
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r == rank) continue;
            const double f = rows[r][col];
            if (f == 0.0) continue;
            for (std::size_t c2 = 0; c2 < ncols; ++c2)
                rows[r][c2] -= f * rows[rank][c2];
        }
        pivot_col.push_back(col);
        ++rank;
    }
    std::vector<bool> is_pivot(ncols, false);
    for (std::size_t c : pivot_col) is_pivot[c] = true;
    std::vector<Vec> basis;
    for (std::size_t f = 0; f < ncols; ++f) {
        if (is_pivot[f]) continue;
        Vec z(ncols, 0.0);
        z[f] = 1.0;
        for (std::size_t r = 0; r < pivot_col.size(); ++r)
            z[pivot_col[r]] = -rows[r][f];
        basis.push_back(std::move(z));
    }
    return basis;
}

bool advance_combination(std::vector<std::size_t>& idx, std::size_t n) {
    const std::size_t s = idx.size();
    std::size_t k = s;
    while (k > 0 && idx[k - 1] == n - s + (k - 1)) --k;
    if (k == 0) return false;
    ++idx[k - 1];
    for (std::size_t j = k; j < s; ++j) idx[j] = idx[j - 1] + 1;
    return true;
}

// Worst l1 mass ratio over the kernel by vertex enumeration: on each support
// the feasible set {||v_Sbar||_1 <= 1} is a polytope over the kernel
// coordinates, so the maximum sits at a vertex where d - 1 of the
// off-support coordinates vanish.
double nsp_rho_oracle(const RMat& a, std::size_t s) {
    const std::size_t n = a.cols();
    std::vector<Vec> arows(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) arows[i] = a.row(i);
    const std::vector<Vec> kernel = rref_nullspace(std::move(arows), n);
    const std::size_t d = kernel.size();
    if (d == 0) return 0.0;

    auto kernel_vec = [&](const Vec& z) {
        Vec v(n, 0.0);
        for (std::size_t l = 0; l < d; ++l)
            for (std::size_t r = 0; r < n; ++r) v[r] += kernel[l][r] * z[l];
        return v;
    };

    double worst = 0.0;
    std::vector<std::size_t> sup(s);
    for (std::size_t i = 0; i < s; ++i) sup[i] = i;
    do {
        std::vector<bool> in_sup(n, false);
        for (std::size_t i : sup) in_sup[i] = true;
        std::vector<std::size_t> sbar;
        for (std::size_t j = 0; j < n; ++j)
            if (!in_sup[j]) sbar.push_back(j);

        // Kernel coordinates of the off-support rows.
        std::vector<Vec> rows_sbar;
        for (std::size_t j : sbar) {
            Vec row(d);
            for (std::size_t l = 0; l < d; ++l) row[l] = kernel[l][j];
            rows_sbar.push_back(std::move(row));
        }
        if (!rref_nullspace(rows_sbar, d).empty()) return kInf;

        auto score = [&](const Vec& z) {
            const Vec v = kernel_vec(z);
            double denom = 0.0;
            for (std::size_t j : sbar) denom += std::fabs(v[j]);
            if (denom < 1e-9) return;
            double num = 0.0;
            for (std::size_t i : sup) num += std::fabs(v[i]);
            worst = std::max(worst, num / denom);
        };

        if (d == 1) {
            score(Vec{1.0});
        } else {
            std::vector<std::size_t> jsel(d - 1);
            for (std::size_t i = 0; i < d - 1; ++i) jsel[i] = i;
            do {
                std::vector<Vec> rows_j;
                for (std::size_t jj : jsel) rows_j.push_back(rows_sbar[jj]);
                const std::vector<Vec> line = rref_nullspace(rows_j, d);
                if (line.size() != 1) continue;
                score(line[0]);
            } while (advance_combination(jsel, sbar.size()));
        }
    } while (advance_combination(sup, n));
    return worst;
}

// Extremal eigenvalues of a symmetric 3x3 by the trigonometric closed form.
std::pair<double, double> eig3_minmax(double a00, double a01, double a02,
                                      double a11, double a12, double a22) {
    const double q = (a00 + a11 + a22) / 3.0;
    const double p1 = a01 * a01 + a02 * a02 + a12 * a12;
    const double p2 = (a00 - q) * (a00 - q) + (a11 - q) * (a11 - q) +
                      (a22 - q) * (a22 - q) + 2.0 * p1;
    if (p2 < 1e-30) return {q, q};
    const double p = std::sqrt(p2 / 6.0);
    const double b00 = (a00 - q) / p, b11 = (a11 - q) / p, b22 = (a22 - q) / p;
    const double b01 = a01 / p, b02 = a02 / p, b12 = a12 / p;
    const double det = b00 * (b11 * b22 - b12 * b12) -
                       b01 * (b01 * b22 - b12 * b02) +
                       b02 * (b01 * b12 - b11 * b02);
    const double r = std::clamp(det / 2.0, -1.0, 1.0);
    const double phi = std::acos(r) / 3.0;
    const double two_thirds_pi = 2.0 * std::numbers::pi / 3.0;
    return {q + 2.0 * p * std::cos(phi + two_thirds_pi),
            q + 2.0 * p * std::cos(phi)};
}

// delta_s by exhaustive support enumeration and closed-form eigenvalues
// (s <= 3). Grams are recomputed from raw column dot products.
double rip_oracle_real(const RMat& a, std::size_t s) {
    const std::size_t n = a.cols();
    auto col_dot = [&](std::size_t i, std::size_t j) {
        double acc = 0.0;
        for (std::size_t r = 0; r < a.rows(); ++r) acc += a(r, i) * a(r, j);
        return acc;
    };
    double delta = 0.0;
    std::vector<std::size_t> sup(s);
    for (std::size_t i = 0; i < s; ++i) sup[i] = i;
    do {
        double lo = 0.0, hi = 0.0;
        if (s == 1) {
            lo = hi = col_dot(sup[0], sup[0]);
        } else if (s == 2) {
            const double g00 = col_dot(sup[0], sup[0]);
            const double g11 = col_dot(sup[1], sup[1]);
            const double g01 = col_dot(sup[0], sup[1]);
            const double mid = (g00 + g11) / 2.0;
            const double rad =
                std::sqrt((g00 - g11) * (g00 - g11) / 4.0 + g01 * g01);
            lo = mid - rad;
            hi = mid + rad;
        } else {
            auto [l, h] = eig3_minmax(col_dot(sup[0], sup[0]),
                                      col_dot(sup[0], sup[1]),
                                      col_dot(sup[0], sup[2]),
                                      col_dot(sup[1], sup[1]),
                                      col_dot(sup[1], sup[2]),
                                      col_dot(sup[2], sup[2]));
            lo = l;
            hi = h;
        }
        delta = std::max({delta, hi - 1.0, 1.0 - lo});
    } while (advance_combination(sup, n));
    return delta;
}

double rip_oracle_complex_2(const CMat& a) {
    const std::size_t n = a.cols();
    auto col_dot = [&](std::size_t i, std::size_t j) {
        Complex acc = 0.0;
        for (std::size_t r = 0; r < a.rows(); ++r)
            acc += std::conj(a(r, i)) * a(r, j);
        return acc;
    };
    double delta = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double g00 = col_dot(i, i).real();
            const double g11 = col_dot(j, j).real();
            const double off = std::abs(col_dot(i, j));
            const double mid = (g00 + g11) / 2.0;
            const double rad =
                std::sqrt((g00 - g11) * (g00 - g11) / 4.0 + off * off);
            delta = std::max({delta, mid + rad - 1.0, 1.0 - (mid - rad)});
        }
    return delta;
}

} // namespace

TEST_CASE("coherence on pinned frames") {
    CHECK(coherence(mercedes()) == Approx(0.5).epsilon(1e-12));
    CHECK(coherence(slanted_2x3()) == Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
    CHECK(coherence(DenseMatrix(RMat::identity(4))) == Approx(0.0).scale(1.0));

    const DenseMatrix alltop = build({EnsembleKind::alltop_gabor, 5, 25, false, 0});
    CHECK(coherence(alltop) == Approx(1.0 / std::sqrt(5.0)).epsilon(1e-9));
}

TEST_CASE("l1 coherence values and bounds") {
    CHECK(l1_coherence(mercedes(), 0) == 0.0);
    CHECK(l1_coherence(mercedes(), 1) == Approx(0.5).epsilon(1e-12));
    CHECK(l1_coherence(mercedes(), 2) == Approx(1.0).epsilon(1e-12));
    CHECK(l1_coherence(slanted_2x3(), 2) ==
          Approx(std::sqrt(2.0)).epsilon(1e-12));

    const DenseMatrix a(gaussian_cols(6, 14, 3, true));
    const double mu = coherence(a);
    double prev = 0.0;
    for (std::size_t s = 1; s <= 5; ++s) {
        const double m1 = l1_coherence(a, s);
        CHECK(m1 >= prev - 1e-15);                 // nondecreasing in s
        CHECK(m1 >= mu - 1e-15);
        CHECK(m1 <= static_cast<double>(s) * mu + 1e-12);
        prev = m1;
    }
}

TEST_CASE("coherence validation") {
    RMat two(2, 2);
    two(0, 0) = 2.0;
    two(1, 1) = 1.0;
    CHECK_THROWS_AS(coherence(DenseMatrix(two)), ValidationError);

    RMat one(2, 1);
    one(0, 0) = 1.0;
    CHECK_THROWS_AS(coherence(DenseMatrix(one)), ValidationError);
    CHECK_THROWS_AS(l1_coherence(mercedes(), 3), ValidationError);
}

TEST_CASE("welch bound") {
    CHECK(welch_bound(2, 3, 1) == Approx(0.5).epsilon(1e-15));
    CHECK(welch_bound(5, 25, 2) == Approx(2.0 / std::sqrt(6.0)).epsilon(1e-15));
    CHECK(welch_bound(7, 7, 3) == 0.0);
    CHECK(welch_bound(4, 16, 3) == Approx(3.0 * welch_bound(4, 16, 1)).epsilon(1e-15));

    CHECK_THROWS_AS(welch_bound(0, 3, 1), ValidationError);
    CHECK_THROWS_AS(welch_bound(4, 3, 1), ValidationError);
    CHECK_THROWS_AS(welch_bound(2, 3, 0), ValidationError);

    CHECK(welch_s_valid(25, 2));
    CHECK(welch_s_valid(100, 1));
    CHECK_FALSE(welch_s_valid(5, 3));
    CHECK_FALSE(welch_s_valid(10, 3));

    // The Mercedes frame meets the bound with equality; a generic Gaussian
    // frame sits strictly above it.
    CHECK(coherence(mercedes()) == Approx(welch_bound(2, 3, 1)).epsilon(1e-12));
    const DenseMatrix g(gaussian_cols(8, 20, 17, true));
    CHECK(welch_bound(8, 20, 1) <= coherence(g) + 1e-12);
}

TEST_CASE("frame check") {
    const FrameCheck mc = frame_check(mercedes(), 1e-10);
    CHECK(mc.is_equiangular);
    CHECK(mc.c == Approx(0.5).epsilon(1e-12));
    CHECK(mc.is_tight);
    CHECK(mc.lambda == Approx(2.0 / 3.0).epsilon(1e-12));

    const FrameCheck id = frame_check(DenseMatrix(RMat::identity(3)), 1e-10);
    CHECK(id.is_equiangular);
    CHECK(id.c == Approx(0.0).scale(1.0));
    CHECK(id.is_tight);
    CHECK(id.lambda == Approx(1.0).epsilon(1e-12));

    const DenseMatrix alltop = build({EnsembleKind::alltop_gabor, 5, 25, false, 0});
    const FrameCheck at = frame_check(alltop, 1e-8);
    CHECK_FALSE(at.is_equiangular);  // orthogonal pairs mix with 1/sqrt(5) pairs
    CHECK(at.is_tight);
    CHECK(at.lambda == Approx(0.2).epsilon(1e-9));

    const FrameCheck gen = frame_check(DenseMatrix(gaussian_cols(4, 9, 5, true)), 1e-8);
    CHECK_FALSE(gen.is_equiangular);
    CHECK_FALSE(gen.is_tight);
}

TEST_CASE("combination utilities") {
    CHECK(binomial_capped(10, 3, 1u << 30) == 120);
    CHECK(binomial_capped(5, 0, 100) == 1);
    CHECK(binomial_capped(4, 6, 100) == 0);
    CHECK(binomial_capped(40, 20, 1000000) == 1000000);  // saturates at cap

    std::vector<std::size_t> c{0, 1};
    std::size_t count = 1;
    std::vector<std::size_t> prev = c;
    while (next_combination(c, 5)) {
        ++count;
        CHECK(std::lexicographical_compare(prev.begin(), prev.end(),
                                           c.begin(), c.end()));
        prev = c;
    }
    CHECK(count == 10);

    const std::uint64_t total = binomial_capped(7, 3, 1u << 30);
    std::vector<std::size_t> walk{0, 1, 2};
    for (std::uint64_t r = 0; r < total; ++r) {
        CHECK(unrank_combination(r, 7, 3) == walk);
        next_combination(walk, 7);
    }
}

TEST_CASE("rip constants on pinned frames") {
    const DenseMatrix id(RMat::identity(5));
    CHECK(rip_constant(id, 1, RipMethod::exact).delta <= 1e-10);
    CHECK(rip_constant(id, 3, RipMethod::exact).delta <= 1e-10);

    const RipEstimate mc2 = rip_constant(mercedes(), 2, RipMethod::exact);
    CHECK(mc2.delta == Approx(0.5).epsilon(1e-12));
    CHECK(mc2.extremal_support.size() == 2);  // all pairs tie at 1/2
    CHECK(mc2.supports_examined == 3);

    const RipEstimate sl2 = rip_constant(slanted_2x3(), 2, RipMethod::exact);
    CHECK(sl2.delta == Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
    CHECK(sl2.extremal_support == std::vector<std::size_t>{0, 2});

    // delta_1 of any unit-column matrix vanishes.
    const DenseMatrix g(gaussian_cols(6, 12, 9, true));
    CHECK(rip_constant(g, 1, RipMethod::exact).delta <= 1e-10);
}

TEST_CASE("rip exact matches the closed-form oracle") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const RMat a = gaussian_cols(5, 10, seed, true);
        const DenseMatrix d(a);
        double prev = 0.0;
        for (std::size_t s = 1; s <= 3; ++s) {
            const RipEstimate est = rip_constant(d, s, RipMethod::exact);
            CHECK(est.delta == Approx(rip_oracle_real(a, s)).epsilon(1e-10));
            CHECK(est.delta >= prev - 1e-12);      // monotone in s
            CHECK(est.supports_examined == binomial_capped(10, s, 1u << 30));
            prev = est.delta;
        }
    }

    const DenseMatrix alltop = build({EnsembleKind::alltop_gabor, 5, 25, false, 0});
    const RipEstimate at2 = rip_constant(alltop, 2, RipMethod::exact);
    CHECK(at2.delta == Approx(rip_oracle_complex_2(alltop.cplx())).epsilon(1e-10));
    CHECK(at2.delta == Approx(1.0 / std::sqrt(5.0)).epsilon(1e-9));
}

TEST_CASE("rip is unitarily invariant") {
    const RMat a = gaussian_cols(5, 9, 21, true);
    const SvdResult qsrc = svd(DenseMatrix(gaussian_cols(5, 5, 22, false)), true);
    const RMat q = qsrc.u->real();
    const RMat qa = matmul(q, a);
    const double d1 = rip_constant(DenseMatrix(a), 2, RipMethod::exact).delta;
    const double d2 = rip_constant(DenseMatrix(qa), 2, RipMethod::exact).delta;
    CHECK(d1 == Approx(d2).epsilon(1e-9));
}

TEST_CASE("rip monte carlo") {
    const DenseMatrix a(gaussian_cols(6, 12, 4, true));
    const RipEstimate exact = rip_constant(a, 2, RipMethod::exact);

    // Covering sample reproduces the exact sweep, support included.
    const RipEstimate full = rip_constant(a, 2, RipMethod::monte_carlo, 66, 7);
    CHECK(full.delta == exact.delta);
    CHECK(full.extremal_support == exact.extremal_support);
    CHECK(full.supports_examined == 66);
    CHECK(full.method == RipMethod::monte_carlo);

    // Dense sample (partial shuffle) and sparse sample (rejection) are both
    // lower bounds and deterministic under the seed.
    for (std::uint64_t trials : {40u, 20u}) {
        const RipEstimate mc = rip_constant(a, 2, RipMethod::monte_carlo, trials, 7);
        CHECK(mc.delta <= exact.delta + 1e-15);
        CHECK(mc.supports_examined == trials);
        const RipEstimate again = rip_constant(a, 2, RipMethod::monte_carlo, trials, 7);
        CHECK(mc.delta == again.delta);
        CHECK(mc.extremal_support == again.extremal_support);
        CHECK(mc.seed == 7);
    }
}

TEST_CASE("rip validation") {
    const DenseMatrix a(gaussian_cols(4, 40, 1, true));
    CHECK_THROWS_AS(rip_constant(a, 0, RipMethod::exact), ValidationError);
    CHECK_THROWS_AS(rip_constant(a, 41, RipMethod::exact), ValidationError);
    CHECK_THROWS_AS(rip_constant(a, 10, RipMethod::exact), ValidationError);
    CHECK_THROWS_AS(rip_constant(a, 2, RipMethod::monte_carlo, 0), ValidationError);
    CHECK_THROWS_AS(rip_constant(a, 2, RipMethod::monte_carlo, 2000001),
                    ValidationError);
}

TEST_CASE("nsp on pinned frames") {
    const NspReport mc = nsp_check(mercedes(), 1, NspMode::plain);
    CHECK(mc.holds);
    CHECK(mc.worst_ratio == Approx(0.5).epsilon(1e-9));
    REQUIRE(mc.witness.has_value());
    CHECK(mc.witness->support.size() == 1);
    CHECK(nsp_witness_ratio(mercedes(), mc) == Approx(mc.worst_ratio).epsilon(1e-9));

    const NspReport sl1 = nsp_check(slanted_2x3(), 1, NspMode::plain);
    CHECK(sl1.holds);
    CHECK(sl1.worst_ratio == Approx(std::sqrt(2.0) / 2.0).epsilon(1e-9));

    const NspReport sl2 = nsp_check(slanted_2x3(), 2, NspMode::plain);
    CHECK_FALSE(sl2.holds);
    CHECK(sl2.worst_ratio == Approx(1.0 + std::sqrt(2.0)).epsilon(1e-9));
    REQUIRE(sl2.witness.has_value());
    CHECK(nsp_witness_ratio(slanted_2x3(), sl2) ==
          Approx(sl2.worst_ratio).epsilon(1e-9));

    // Trivial kernel: the property holds vacuously.
    const NspReport id = nsp_check(DenseMatrix(RMat::identity(4)), 2, NspMode::plain);
    CHECK(id.holds);
    CHECK(id.worst_ratio == 0.0);
    CHECK_FALSE(id.witness.has_value());
}

TEST_CASE("nsp matches the vertex enumeration oracle") {
    for (std::uint64_t seed : {11u, 12u, 13u, 14u}) {
        const RMat a = gaussian_cols(3, 6, seed, false);
        for (std::size_t s : {1u, 2u}) {
            const NspReport rep = nsp_check(DenseMatrix(a), s, NspMode::plain);
            const double oracle = nsp_rho_oracle(a, s);
            CHECK(rep.worst_ratio == Approx(oracle).epsilon(1e-7));
            if (rep.witness)
                CHECK(nsp_witness_ratio(DenseMatrix(a), rep) ==
                      Approx(rep.worst_ratio).epsilon(1e-7));
        }
    }
    for (std::uint64_t seed : {21u, 22u}) {
        const RMat a = gaussian_cols(4, 8, seed, true);
        const NspReport rep = nsp_check(DenseMatrix(a), 2, NspMode::plain);
        CHECK(rep.worst_ratio == Approx(nsp_rho_oracle(a, 2)).epsilon(1e-7));
    }
}

TEST_CASE("nsp flags kernel vectors hiding inside the support") {
    // Duplicated column: e0 - e4 lies in the kernel, so s = 2 fails with an
    // infinite ratio at support {0, 4}.
    RMat a = gaussian_cols(3, 5, 31, true);
    for (std::size_t r = 0; r < 3; ++r) a(r, 4) = a(r, 0);
    const NspReport rep = nsp_check(DenseMatrix(a), 2, NspMode::plain);
    CHECK_FALSE(rep.holds);
    CHECK(rep.worst_ratio == kInf);
    REQUIRE(rep.witness.has_value());
    CHECK(rep.witness->support == std::vector<std::size_t>{0, 4});
    double off_mass = 0.0;
    double on_mass = 0.0;
    for (std::size_t j = 0; j < 5; ++j) {
        if (j == 0 || j == 4)
            on_mass += std::fabs(rep.witness->v[j]);
        else
            off_mass += std::fabs(rep.witness->v[j]);
    }
    CHECK(on_mass > 1e-8);
    CHECK(off_mass <= 1e-10);

    // s = N with a nontrivial kernel is the degenerate instance of the same
    // failure.
    RMat wide(1, 2);
    wide(0, 0) = 1.0;
    wide(0, 1) = 1.0;
    const NspReport all = nsp_check(DenseMatrix(wide), 2, NspMode::plain);
    CHECK_FALSE(all.holds);
    CHECK(all.worst_ratio == kInf);
}

TEST_CASE("nsp stable and robust modes") {
    const NspReport ok = nsp_check(mercedes(), 1, NspMode::stable, 0.6);
    CHECK(ok.holds);
    CHECK(ok.worst_ratio == Approx(0.5).epsilon(1e-9));
    const NspReport tight = nsp_check(mercedes(), 1, NspMode::stable, 0.4);
    CHECK_FALSE(tight.holds);

    const NspReport rob = nsp_check(mercedes(), 1, NspMode::robust_l1, 0.6, 10.0);
    CHECK(rob.holds);
    REQUIRE(rob.witness.has_value());
    CHECK(nsp_witness_ratio(mercedes(), rob) ==
          Approx(rob.worst_ratio).epsilon(1e-7));

    // Tiny tau: a coordinate vector already beats the measurement term.
    const NspReport weak = nsp_check(mercedes(), 1, NspMode::robust_l1, 0.6, 0.005);
    CHECK_FALSE(weak.holds);
    CHECK(weak.worst_ratio > 1.0);

    // Robust implies stable at the same rho: the kernel kills the tau term.
    for (std::uint64_t seed : {41u, 42u, 43u}) {
        const DenseMatrix a(gaussian_cols(3, 6, seed, false));
        const NspReport r = nsp_check(a, 1, NspMode::robust_l1, 0.7, 5.0);
        const NspReport st = nsp_check(a, 1, NspMode::stable, 0.7);
        if (r.holds) CHECK(st.holds);
    }
}

TEST_CASE("nsp validation") {
    const DenseMatrix a(gaussian_cols(3, 6, 1, true));
    CHECK_THROWS_AS(nsp_check(a, 0, NspMode::plain), ValidationError);
    CHECK_THROWS_AS(nsp_check(a, 7, NspMode::plain), ValidationError);
    CHECK_THROWS_AS(nsp_check(a, 1, NspMode::stable, 1.0), ValidationError);
    CHECK_THROWS_AS(nsp_check(a, 1, NspMode::stable, -0.2), ValidationError);
    CHECK_THROWS_AS(nsp_check(a, 1, NspMode::robust_l1, 0.5, 0.0), ValidationError);

    const DenseMatrix big(gaussian_cols(4, 60, 2, true));
    CHECK_THROWS_AS(nsp_check(big, 10, NspMode::plain), ValidationError);

    const DenseMatrix cplx = build({EnsembleKind::alltop_gabor, 5, 25, false, 0});
    CHECK_THROWS_AS(nsp_check(cplx, 1, NspMode::plain), ValidationError);

    NspReport no_witness;
    CHECK_THROWS_AS(nsp_witness_ratio(a, no_witness), ValidationError);
}

TEST_CASE("guarantee report on the identity") {
    const DiagnosticsReport rep = guarantee_report(DenseMatrix(RMat::identity(10)), 2);
    CHECK(rep.mu == Approx(0.0).scale(1.0));
    CHECK(rep.guarantees.coherence_thm.holds);
    CHECK(rep.guarantees.rip_third.holds);
    CHECK(rep.guarantees.rip_robust.holds);
    CHECK(rep.guarantees.certified);
    CHECK(rep.frame.is_tight);
    CHECK(rep.frame.lambda == Approx(1.0).epsilon(1e-12));
    REQUIRE(rep.nsp.size() == 1);
    CHECK(rep.nsp[0].holds);
    REQUIRE(rep.rip.size() == 2);
    CHECK(rep.rip[0].s == 2);
    CHECK(rep.rip[1].s == 4);
    CHECK(rep.rip[1].delta <= 1e-10);

    // s = N clamps both the l1 order and the doubled RIP order.
    const DiagnosticsReport full = guarantee_report(DenseMatrix(RMat::identity(6)), 6);
    CHECK(full.guarantees.coherence_thm.holds);
    CHECK(full.guarantees.rip_third.holds);
    CHECK(full.guarantees.rip_robust.holds);
    REQUIRE(full.rip.size() == 1);
    CHECK(full.rip[0].s == 6);
}

TEST_CASE("guarantee report on the mercedes frame") {
    const DiagnosticsReport rep = guarantee_report(mercedes(), 1);
    CHECK(rep.mu == Approx(0.5).epsilon(1e-12));
    CHECK(rep.welch1 == Approx(0.5).epsilon(1e-12));
    REQUIRE(rep.mu1.size() == 2);
    CHECK(rep.mu1[0].first == 0);
    CHECK(rep.mu1[0].second == 0.0);
    CHECK(rep.mu1[1].first == 1);
    CHECK(rep.mu1[1].second == Approx(0.5).epsilon(1e-12));

    CHECK(rep.guarantees.coherence_thm.holds);       // 0.5 < 1
    CHECK(rep.guarantees.coherence_thm.lhs == Approx(0.5).epsilon(1e-12));
    CHECK_FALSE(rep.guarantees.rip_third.holds);     // delta_2 = 0.5 > 1/3
    CHECK(rep.guarantees.rip_third.lhs == Approx(0.5).epsilon(1e-12));
    CHECK(rep.guarantees.rip_third.rhs == Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(rep.guarantees.rip_robust.holds);          // 0.5 < 4/sqrt(41)
    CHECK(rep.guarantees.rip_robust.rhs == Approx(4.0 / std::sqrt(41.0)).epsilon(1e-15));
    CHECK(rep.guarantees.certified);
    REQUIRE(rep.nsp.size() == 1);
    CHECK(rep.nsp[0].holds);
    CHECK(rep.frame.is_equiangular);
}

TEST_CASE("guarantee report falls back to monte carlo above the guard") {
    const DenseMatrix a(gaussian_cols(8, 46, 6, true));
    const DiagnosticsReport rep = guarantee_report(a, 4, 60, 5);
    REQUIRE(rep.rip.size() == 2);
    CHECK(rep.rip[0].s == 4);
    CHECK(rep.rip[0].method == RipMethod::exact);
    CHECK(rep.rip[1].s == 8);
    CHECK(rep.rip[1].method == RipMethod::monte_carlo);
    CHECK(rep.rip[1].supports_examined == 60);
    CHECK_FALSE(rep.guarantees.certified);
    CHECK(rep.nsp.empty());                          // above the LP budget
    CHECK(rep.rip[1].delta >= 0.0);
}

TEST_CASE("guarantee report on a complex frame") {
    const DenseMatrix alltop = build({EnsembleKind::alltop_gabor, 5, 25, false, 0});
    const DiagnosticsReport rep = guarantee_report(alltop, 2);
    CHECK(rep.mu == Approx(1.0 / std::sqrt(5.0)).epsilon(1e-9));
    CHECK(rep.nsp.empty());
    REQUIRE(rep.rip.size() == 2);
    CHECK(rep.guarantees.certified);
    CHECK(rep.welch_s_valid);

    CHECK_THROWS_AS(guarantee_report(alltop, 0), ValidationError);
    CHECK_THROWS_AS(guarantee_report(alltop, 26), ValidationError);
}
