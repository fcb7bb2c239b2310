#include "ripkit/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "ripkit/linprog.hpp"
#include "ripkit/parallel.hpp"
#include "ripkit/rng.hpp"
#include "ripkit/svd.hpp"

namespace ripkit {

namespace {

const RMat& real_input(const DenseMatrix& a, const Vec& y) {
    if (!a.is_real())
        throw ValidationError("recovery supports real matrices only");
    if (y.size() != a.rows())
        throw ValidationError("measurement length does not match the matrix");
    return a.real();
}

double l1(const Vec& v) {
    double acc = 0.0;
    for (const double x : v) acc += std::fabs(x);
    return acc;
}

} // namespace

RecoveryResult basis_pursuit(const DenseMatrix& a, const Vec& y) {
    const RMat& mat = real_input(a, y);
    const std::size_t m = mat.rows();
    const std::size_t n = mat.cols();

    LpProblem lp;
    lp.objective.assign(2 * n, 1.0);
    lp.nonneg.assign(2 * n, true);
    for (std::size_t i = 0; i < m; ++i) {
        Vec row(2 * n, 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            row[j] = mat(i, j);
            row[n + j] = -mat(i, j);
        }
        lp.eq_rows.push_back(std::move(row));
        lp.eq_rhs.push_back(y[i]);
    }

    const LpResult res = solve_lp(lp);
    RecoveryResult out;
    out.iterations = res.iterations;
    if (res.status == LpStatus::infeasible) {
        out.status = RecoveryStatus::infeasible;
        out.solution.assign(n, 0.0);
        out.residual = norm2(y);
        return out;
    }
    if (res.status != LpStatus::optimal)
        throw NumericalError("basis pursuit LP did not reach an optimum");

    out.solution.resize(n);
    for (std::size_t j = 0; j < n; ++j)
        out.solution[j] = res.point[j] - res.point[n + j];
    out.objective = l1(out.solution);
    out.residual = norm2(subtract(matvec(mat, out.solution), y));
    out.status = RecoveryStatus::optimal;
    out.non_unique = res.alternative_optimum;
    return out;
}

RecoveryResult basis_pursuit_denoise(const DenseMatrix& a, const Vec& y,
                                     double eta) {
    const RMat& mat = real_input(a, y);
    if (!(eta >= 0.0))
        throw ValidationError("basis_pursuit_denoise requires eta >= 0");
    const std::size_t m = mat.rows();
    const std::size_t n = mat.cols();
    const double y_norm = norm2(y);
    const double y_scale = std::max(1.0, y_norm);

    RecoveryResult out;
    if (eta >= y_norm) {
        // The origin is feasible, and nothing has smaller l1 norm.
        out.solution.assign(n, 0.0);
        out.residual = 0.0;
        out.status = RecoveryStatus::optimal;
        return out;
    }

    double lip = spectral_norm(mat);
    if (lip < 1e-150) lip = 1e-150;
    const double tau = 0.995 / lip;
    const double sigma = 0.995 / lip;

    const RMat mat_t = adjoint(mat);
    Vec z(n, 0.0), z_prev(n, 0.0), w(m, 0.0);
    Vec az(m, 0.0), az_prev(m, 0.0);
    Vec best_z(n, 0.0);
    double best_violation = std::max(0.0, y_norm - eta);
    double best_obj = 0.0;

    constexpr std::size_t kCap = 100000;
    std::size_t iter = 0;
    bool converged = false;
    while (iter < kCap) {
        ++iter;

        // Dual ascent against the l2-ball indicator.
        Vec v(m);
        for (std::size_t i = 0; i < m; ++i)
            v[i] = w[i] + sigma * (2.0 * az[i] - az_prev[i]);
        double dist = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double d = v[i] / sigma - y[i];
            dist += d * d;
        }
        dist = std::sqrt(dist);
        const double shrink_ball = dist > eta && dist > 0.0 ? eta / dist : 1.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double proj =
                y[i] + (v[i] / sigma - y[i]) * shrink_ball;
            w[i] = v[i] - sigma * proj;
        }

        // Primal shrinkage step.
        const Vec grad = matvec(mat_t, w);
        z_prev = z;
        for (std::size_t j = 0; j < n; ++j) {
            const double t = z[j] - tau * grad[j];
            z[j] = t > tau ? t - tau : (t < -tau ? t + tau : 0.0);
        }

        az_prev = az;
        az = matvec(mat, z);
        double resid = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double d = az[i] - y[i];
            resid += d * d;
        }
        resid = std::sqrt(resid);
        const double violation = std::max(0.0, resid - eta);
        const double obj = l1(z);
        if (violation < best_violation - 1e-15 ||
            (violation <= best_violation + 1e-15 && obj < best_obj)) {
            best_violation = violation;
            best_obj = obj;
            best_z = z;
        }

        double step = 0.0, z_norm = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double d = z[j] - z_prev[j];
            step += d * d;
            z_norm += z_prev[j] * z_prev[j];
        }
        if (std::sqrt(step) <= 1e-8 * std::max(1.0, std::sqrt(z_norm)) &&
            violation <= 1e-8 * y_scale) {
            converged = true;
            break;
        }
    }

    out.iterations = iter;
    if (converged) {
        out.solution = z;
        out.status = RecoveryStatus::optimal;
    } else {
        out.solution = best_z;
        out.status = RecoveryStatus::numerical_failure;
    }
    out.objective = l1(out.solution);
    const double resid = norm2(subtract(matvec(mat, out.solution), y));
    out.residual = std::max(0.0, resid - eta);
    return out;
}

BatchSummary batch_recovery_experiment(const DenseMatrix& a, std::size_t s,
                                       std::size_t trials, double eta,
                                       std::uint64_t seed) {
    if (!a.is_real())
        throw ValidationError("recovery supports real matrices only");
    if (trials == 0)
        throw ValidationError("batch recovery requires trials >= 1");
    const std::size_t n = a.cols();
    if (s == 0 || s > n)
        throw ValidationError("batch recovery requires 1 <= s <= N");
    if (!(eta >= 0.0))
        throw ValidationError("batch recovery requires eta >= 0");
    const RMat& mat = a.real();
    const std::size_t m = mat.rows();

    BatchSummary summary;
    summary.s = s;
    summary.trials = trials;
    summary.eta = eta;
    summary.seed = seed;
    summary.records.resize(trials);

    parallel_chunk_reduce<int>(
        trials, 0,
        [&](std::size_t lo, std::size_t hi) {
            for (std::size_t t = lo; t < hi; ++t) {
                TrialRecord rec;
                rec.trial = t;
                rec.seed = derive_seed(seed, "trial", t);
                RngStream stream(rec.seed);
                rec.support = stream.random_subset(n, s);

                Vec x(n, 0.0);
                for (const std::size_t j : rec.support)
                    x[j] = stream.next_gaussian();
                Vec y = matvec(mat, x);
                if (eta > 0.0) {
                    Vec noise(m);
                    for (std::size_t i = 0; i < m; ++i)
                        noise[i] = stream.next_gaussian();
                    const double nn = norm2(noise);
                    if (nn > 0.0)
                        for (std::size_t i = 0; i < m; ++i)
                            y[i] += noise[i] * (eta / nn);
                }

                const RecoveryResult res =
                    eta > 0.0 ? basis_pursuit_denoise(a, y, eta)
                              : basis_pursuit(a, y);
                const Vec diff = subtract(x, res.solution);
                rec.err_l1 = l1(diff);
                rec.err_l2 = norm2(diff);
                rec.success = res.status == RecoveryStatus::optimal &&
                              rec.err_l2 <= 1e-6 * norm2(x);
                summary.records[t] = std::move(rec);
            }
            return 0;
        },
        [](int acc, int) { return acc; });

    std::size_t ok = 0;
    for (const TrialRecord& rec : summary.records) {
        if (rec.success) ++ok;
        summary.max_err_l1 = std::max(summary.max_err_l1, rec.err_l1);
        summary.max_err_l2 = std::max(summary.max_err_l2, rec.err_l2);
    }
    summary.success_rate =
        static_cast<double>(ok) / static_cast<double>(trials);
    return summary;
}

} // namespace ripkit
