#include "ripkit/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <set>
#include <string>

#include "ripkit/eigen.hpp"
#include "ripkit/linprog.hpp"
#include "ripkit/parallel.hpp"
#include "ripkit/rng.hpp"
#include "ripkit/svd.hpp"

namespace ripkit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNspSlack = 1e-10;
constexpr std::uint64_t kNspSupportGuard = 100000;
constexpr std::uint64_t kRipSupportGuard = 1000000;

template <typename T>
void check_unit_columns(const Mat<T>& a) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
        double sq = 0.0;
        for (std::size_t i = 0; i < a.rows(); ++i) sq += abs_sq(a(i, j));
        if (std::fabs(std::sqrt(sq) - 1.0) > 1e-8)
            throw ValidationError("column " + std::to_string(j) +
                                  " is not unit-norm");
    }
}

void check_unit_columns(const DenseMatrix& a) {
    if (a.is_real())
        check_unit_columns(a.real());
    else
        check_unit_columns(a.cplx());
}

// Entrywise |adjoint(A) A|.
RMat abs_gram(const DenseMatrix& a) {
    const std::size_t n = a.cols();
    RMat g(n, n);
    if (a.is_real()) {
        const RMat full = gram(a.real());
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) g(i, j) = std::fabs(full(i, j));
    } else {
        const CMat full = gram(a.cplx());
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) g(i, j) = std::abs(full(i, j));
    }
    return g;
}

std::vector<std::size_t> complement(const std::vector<std::size_t>& sup,
                                    std::size_t n) {
    std::vector<std::size_t> out;
    out.reserve(n - sup.size());
    std::size_t k = 0;
    for (std::size_t j = 0; j < n; ++j) {
        if (k < sup.size() && sup[k] == j) {
            ++k;
        } else {
            out.push_back(j);
        }
    }
    return out;
}

} // namespace

double coherence(const DenseMatrix& a) {
    if (a.cols() < 2)
        throw ValidationError("coherence requires at least two columns");
    check_unit_columns(a);
    const RMat g = abs_gram(a);
    double mu = 0.0;
    for (std::size_t i = 0; i < g.rows(); ++i)
        for (std::size_t j = i + 1; j < g.cols(); ++j) mu = std::max(mu, g(i, j));
    return mu;
}

double l1_coherence(const DenseMatrix& a, std::size_t s) {
    if (s == 0) return 0.0;
    const std::size_t n = a.cols();
    if (s > n - 1)
        throw ValidationError("l1_coherence order must satisfy s <= N - 1");
    check_unit_columns(a);
    const RMat g = abs_gram(a);
    std::vector<double> off(n - 1);
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t k = 0;
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) off[k++] = g(i, j);
        std::partial_sort(off.begin(),
                          off.begin() + static_cast<std::ptrdiff_t>(s),
                          off.end(), std::greater<double>());
        double sum = 0.0;
        for (std::size_t t = 0; t < s; ++t) sum += off[t];
        worst = std::max(worst, sum);
    }
    return worst;
}

double welch_bound(std::size_t m, std::size_t n, std::size_t s) {
    if (m == 0 || n < m)
        throw ValidationError("welch_bound requires 1 <= m <= N");
    if (s == 0) throw ValidationError("welch_bound requires s >= 1");
    if (n == m) return 0.0;
    return static_cast<double>(s) *
           std::sqrt(static_cast<double>(n - m) /
                     (static_cast<double>(m) * static_cast<double>(n - 1)));
}

bool welch_s_valid(std::size_t n, std::size_t s) {
    if (s <= 1) return true;
    if (n < 2) return false;
    return static_cast<double>(s) * static_cast<double>(s) <
           static_cast<double>(n - 1);
}

FrameCheck frame_check(const DenseMatrix& a, double tol) {
    FrameCheck out;
    const std::size_t n = a.cols();
    const std::size_t m = a.rows();

    const RMat g = abs_gram(a);
    double mean = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            mean += g(i, j);
            ++pairs;
        }
    if (pairs == 0) {
        out.is_equiangular = true;
        out.c = 0.0;
    } else {
        mean /= static_cast<double>(pairs);
        out.c = mean;
        out.is_equiangular = true;
        for (std::size_t i = 0; i < n && out.is_equiangular; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (std::fabs(g(i, j) - mean) > tol) {
                    out.is_equiangular = false;
                    break;
                }
    }

    // Tightness against the trace-matched frame constant.
    double trace = 0.0;
    double norm_sq = 0.0;
    double diff_sq = 0.0;
    if (a.is_real()) {
        const RMat b = outer_gram(a.real());
        for (std::size_t i = 0; i < m; ++i) trace += b(i, i);
        const double lam_inv = trace / static_cast<double>(m);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) {
                const double e = b(i, j) - (i == j ? lam_inv : 0.0);
                diff_sq += e * e;
                norm_sq += b(i, j) * b(i, j);
            }
    } else {
        const CMat b = outer_gram(a.cplx());
        for (std::size_t i = 0; i < m; ++i) trace += b(i, i).real();
        const double lam_inv = trace / static_cast<double>(m);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) {
                const Complex e = b(i, j) - (i == j ? Complex(lam_inv) : Complex(0.0));
                diff_sq += abs_sq(e);
                norm_sq += abs_sq(b(i, j));
            }
    }
    if (trace > 0.0) {
        out.lambda = static_cast<double>(m) / trace;
        out.is_tight = std::sqrt(diff_sq) <= tol * std::sqrt(norm_sq);
    }
    return out;
}

std::uint64_t binomial_capped(std::size_t n, std::size_t k, std::uint64_t cap) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    unsigned __int128 c = 1;
    for (std::size_t i = 1; i <= k; ++i) {
        c = c * (n - k + i) / i;
        if (c > cap) return cap;
    }
    return static_cast<std::uint64_t>(c);
}

bool next_combination(std::vector<std::size_t>& c, std::size_t n) {
    const std::size_t s = c.size();
    std::size_t i = s;
    while (i > 0) {
        --i;
        if (c[i] < n - s + i) {
            ++c[i];
            for (std::size_t j = i + 1; j < s; ++j) c[j] = c[j - 1] + 1;
            return true;
        }
    }
    return false;
}

std::vector<std::size_t> unrank_combination(std::uint64_t rank, std::size_t n,
                                            std::size_t s) {
    std::vector<std::size_t> c(s);
    std::uint64_t r = rank;
    std::size_t v = 0;
    for (std::size_t i = 0; i < s; ++i) {
        for (;; ++v) {
            const std::uint64_t cnt =
                binomial_capped(n - 1 - v, s - 1 - i, UINT64_C(1) << 62);
            if (r < cnt) {
                c[i] = v++;
                break;
            }
            r -= cnt;
        }
    }
    return c;
}

namespace {

// --- null space property -------------------------------------------------

// max over the kernel of sum_i eps_i v_{S_i} subject to ||v_{Sbar}||_1 <= 1,
// where v = K z. Returns the achieved value and z; unbounded means some
// kernel vector is supported inside S.
struct KernelLpOutcome {
    bool unbounded = false;
    double value = 0.0;
    Vec z;
};

KernelLpOutcome kernel_support_lp(const RMat& k,
                                  const std::vector<std::size_t>& sup,
                                  const std::vector<std::size_t>& sbar,
                                  const std::vector<int>& eps) {
    const std::size_t d = k.cols();
    const std::size_t nbar = sbar.size();
    const std::size_t n_vars = d + 3 * nbar + 1;
    const std::size_t t0 = d;
    const std::size_t p0 = d + nbar;
    const std::size_t q0 = d + 2 * nbar;
    const std::size_t u0 = d + 3 * nbar;

    LpProblem lp;
    lp.objective.assign(n_vars, 0.0);
    for (std::size_t l = 0; l < d; ++l) {
        double c = 0.0;
        for (std::size_t i = 0; i < sup.size(); ++i)
            c += eps[i] * k(sup[i], l);
        lp.objective[l] = -c;
    }
    lp.nonneg.assign(n_vars, true);
    for (std::size_t l = 0; l < d; ++l) lp.nonneg[l] = false;

    for (std::size_t j2 = 0; j2 < nbar; ++j2) {
        Vec lo(n_vars, 0.0), hi(n_vars, 0.0);
        for (std::size_t l = 0; l < d; ++l) {
            lo[l] = -k(sbar[j2], l);
            hi[l] = k(sbar[j2], l);
        }
        lo[t0 + j2] = 1.0;
        lo[p0 + j2] = -1.0;
        hi[t0 + j2] = 1.0;
        hi[q0 + j2] = -1.0;
        lp.eq_rows.push_back(std::move(lo));
        lp.eq_rows.push_back(std::move(hi));
        lp.eq_rhs.push_back(0.0);
        lp.eq_rhs.push_back(0.0);
    }
    Vec budget(n_vars, 0.0);
    for (std::size_t j2 = 0; j2 < nbar; ++j2) budget[t0 + j2] = 1.0;
    budget[u0] = 1.0;
    lp.eq_rows.push_back(std::move(budget));
    lp.eq_rhs.push_back(1.0);

    const LpResult res = solve_lp(lp);
    KernelLpOutcome out;
    if (res.status == LpStatus::unbounded) {
        out.unbounded = true;
        return out;
    }
    if (res.status != LpStatus::optimal)
        throw NumericalError("kernel support LP did not reach an optimum");
    out.value = -res.value;
    out.z.assign(res.point.begin(), res.point.begin() + static_cast<std::ptrdiff_t>(d));
    return out;
}

// min rho ||v_{Sbar}||_1 + tau ||A v||_1 over sign-constrained v with
// ||v_S||_1 = 1; the robust inequality holds on this cell iff the value
// is >= 1.
double robust_support_lp(const RMat& a, const std::vector<std::size_t>& sup,
                         const std::vector<std::size_t>& sbar,
                         const std::vector<int>& eps, double rho, double tau,
                         Vec* v_out) {
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    const std::size_t s = sup.size();
    const std::size_t nbar = sbar.size();

    const std::size_t g0 = 0;
    const std::size_t vb0 = s;
    const std::size_t t0 = s + nbar;
    const std::size_t u0 = s + 2 * nbar;
    const std::size_t p0 = u0 + m;
    const std::size_t q0 = p0 + nbar;
    const std::size_t r0 = q0 + nbar;
    const std::size_t w0 = r0 + m;
    const std::size_t n_vars = w0 + m;

    LpProblem lp;
    lp.objective.assign(n_vars, 0.0);
    for (std::size_t j2 = 0; j2 < nbar; ++j2) lp.objective[t0 + j2] = rho;
    for (std::size_t i = 0; i < m; ++i) lp.objective[u0 + i] = tau;
    lp.nonneg.assign(n_vars, true);
    for (std::size_t j2 = 0; j2 < nbar; ++j2) lp.nonneg[vb0 + j2] = false;

    Vec unit(n_vars, 0.0);
    for (std::size_t i = 0; i < s; ++i) unit[g0 + i] = 1.0;
    lp.eq_rows.push_back(std::move(unit));
    lp.eq_rhs.push_back(1.0);

    for (std::size_t j2 = 0; j2 < nbar; ++j2) {
        Vec lo(n_vars, 0.0), hi(n_vars, 0.0);
        lo[t0 + j2] = 1.0;
        lo[vb0 + j2] = -1.0;
        lo[p0 + j2] = -1.0;
        hi[t0 + j2] = 1.0;
        hi[vb0 + j2] = 1.0;
        hi[q0 + j2] = -1.0;
        lp.eq_rows.push_back(std::move(lo));
        lp.eq_rows.push_back(std::move(hi));
        lp.eq_rhs.push_back(0.0);
        lp.eq_rhs.push_back(0.0);
    }
    for (std::size_t i = 0; i < m; ++i) {
        Vec lo(n_vars, 0.0), hi(n_vars, 0.0);
        for (std::size_t kk = 0; kk < s; ++kk) {
            const double coeff = a(i, sup[kk]) * eps[kk];
            lo[g0 + kk] = -coeff;
            hi[g0 + kk] = coeff;
        }
        for (std::size_t j2 = 0; j2 < nbar; ++j2) {
            lo[vb0 + j2] = -a(i, sbar[j2]);
            hi[vb0 + j2] = a(i, sbar[j2]);
        }
        lo[u0 + i] = 1.0;
        lo[r0 + i] = -1.0;
        hi[u0 + i] = 1.0;
        hi[w0 + i] = -1.0;
        lp.eq_rows.push_back(std::move(lo));
        lp.eq_rows.push_back(std::move(hi));
        lp.eq_rhs.push_back(0.0);
        lp.eq_rhs.push_back(0.0);
    }

    const LpResult res = solve_lp(lp);
    if (res.status != LpStatus::optimal)
        throw NumericalError("robust NSP LP did not reach an optimum");
    if (v_out) {
        v_out->assign(n, 0.0);
        for (std::size_t i = 0; i < s; ++i)
            (*v_out)[sup[i]] = eps[i] * res.point[g0 + i];
        for (std::size_t j2 = 0; j2 < nbar; ++j2)
            (*v_out)[sbar[j2]] = res.point[vb0 + j2];
    }
    return res.value;
}

void fill_sign_pattern(std::vector<int>& eps, std::uint64_t mask) {
    eps[0] = 1;
    for (std::size_t i = 1; i < eps.size(); ++i)
        eps[i] = ((mask >> (i - 1)) & 1u) ? -1 : 1;
}

NspReport nsp_kernel_modes(const DenseMatrix& a, std::size_t s, NspMode mode,
                           double rho) {
    NspReport rep;
    rep.s = s;
    rep.mode = mode;
    rep.rho = mode == NspMode::plain ? 1.0 : rho;

    const RMat kern = null_space_basis(a.real());
    const std::size_t n = a.cols();
    const std::size_t d = kern.cols();
    if (d == 0) {
        rep.holds = true;
        rep.worst_ratio = 0.0;
        return rep;
    }

    if (s == n) {
        // Empty complement: any nonzero kernel vector violates the property.
        Vec v(n, 0.0);
        std::vector<std::size_t> sup(s);
        for (std::size_t i = 0; i < s; ++i) sup[i] = i;
        for (std::size_t r = 0; r < n; ++r) v[r] = kern(r, 0);
        rep.worst_ratio = kInf;
        rep.holds = false;
        rep.witness = NspWitness{std::move(v), std::move(sup)};
        return rep;
    }

    const std::uint64_t patterns = s >= 2 ? (UINT64_C(1) << (s - 1)) : 1;
    std::vector<std::size_t> sup(s);
    for (std::size_t i = 0; i < s; ++i) sup[i] = i;
    std::vector<int> eps(s, 1);

    double worst = 0.0;
    Vec best_z;
    std::vector<std::size_t> best_sup;
    bool more = true;
    while (more) {
        const std::vector<std::size_t> sbar = complement(sup, n);
        for (std::uint64_t mask = 0; mask < patterns; ++mask) {
            fill_sign_pattern(eps, mask);
            const KernelLpOutcome out = kernel_support_lp(kern, sup, sbar, eps);
            if (out.unbounded) {
                // A kernel vector lives inside S; exhibit one.
                RMat ksub(sbar.size(), d);
                for (std::size_t r = 0; r < sbar.size(); ++r)
                    for (std::size_t l = 0; l < d; ++l)
                        ksub(r, l) = kern(sbar[r], l);
                const RMat z_basis = null_space_basis(ksub);
                Vec v(n, 0.0);
                if (z_basis.cols() > 0) {
                    for (std::size_t r = 0; r < n; ++r) {
                        double acc = 0.0;
                        for (std::size_t l = 0; l < d; ++l)
                            acc += kern(r, l) * z_basis(l, 0);
                        v[r] = acc;
                    }
                }
                rep.worst_ratio = kInf;
                rep.holds = false;
                rep.witness = NspWitness{std::move(v), sup};
                return rep;
            }
            if (out.value > worst) {
                worst = out.value;
                best_z = out.z;
                best_sup = sup;
            }
        }
        more = next_combination(sup, n);
    }

    rep.worst_ratio = worst;
    if (mode == NspMode::plain)
        rep.holds = worst < 1.0 - kNspSlack;
    else
        rep.holds = worst <= rho + kNspSlack;
    if (worst > 0.0) {
        Vec v(n, 0.0);
        for (std::size_t r = 0; r < n; ++r) {
            double acc = 0.0;
            for (std::size_t l = 0; l < d; ++l) acc += kern(r, l) * best_z[l];
            v[r] = acc;
        }
        rep.witness = NspWitness{std::move(v), std::move(best_sup)};
    }
    return rep;
}

NspReport nsp_robust_mode(const DenseMatrix& a, std::size_t s, double rho,
                          double tau) {
    NspReport rep;
    rep.s = s;
    rep.mode = NspMode::robust_l1;
    rep.rho = rho;
    rep.tau = tau;

    const RMat& mat = a.real();
    const std::size_t n = a.cols();
    const std::uint64_t patterns = s >= 2 ? (UINT64_C(1) << (s - 1)) : 1;
    std::vector<std::size_t> sup(s);
    for (std::size_t i = 0; i < s; ++i) sup[i] = i;
    std::vector<int> eps(s, 1);

    double vmin = kInf;
    Vec best_v;
    std::vector<std::size_t> best_sup;
    bool more = true;
    while (more) {
        const std::vector<std::size_t> sbar = complement(sup, n);
        for (std::uint64_t mask = 0; mask < patterns; ++mask) {
            fill_sign_pattern(eps, mask);
            Vec v;
            const double val =
                robust_support_lp(mat, sup, sbar, eps, rho, tau, &v);
            if (val < vmin) {
                vmin = val;
                best_v = std::move(v);
                best_sup = sup;
            }
        }
        more = next_combination(sup, n);
    }

    rep.worst_ratio = vmin > 0.0 ? 1.0 / vmin : kInf;
    rep.holds = vmin >= 1.0 - kNspSlack;
    rep.witness = NspWitness{std::move(best_v), std::move(best_sup)};
    return rep;
}

} // namespace

NspReport nsp_check(const DenseMatrix& a, std::size_t s, NspMode mode,
                    double rho, double tau) {
    if (!a.is_real())
        throw ValidationError("nsp_check supports real matrices only");
    const std::size_t n = a.cols();
    if (s == 0 || s > n)
        throw ValidationError("nsp_check requires 1 <= s <= N");
    if (binomial_capped(n, s, kNspSupportGuard + 1) > kNspSupportGuard)
        throw ValidationError("nsp_check: C(N, s) exceeds the 1e5 guard");
    if (mode != NspMode::plain) {
        if (!(rho > 0.0 && rho < 1.0))
            throw ValidationError("nsp_check requires 0 < rho < 1");
    }
    if (mode == NspMode::robust_l1 && !(tau > 0.0))
        throw ValidationError("nsp_check robust mode requires tau > 0");

    if (mode == NspMode::robust_l1) return nsp_robust_mode(a, s, rho, tau);
    return nsp_kernel_modes(a, s, mode, rho);
}

double nsp_witness_ratio(const DenseMatrix& a, const NspReport& report) {
    if (!report.witness)
        throw ValidationError("NSP report carries no witness");
    const Vec& v = report.witness->v;
    if (v.size() != a.cols())
        throw ValidationError("NSP witness dimension mismatch");
    double l1_s = 0.0;
    for (const std::size_t i : report.witness->support) l1_s += std::fabs(v[i]);
    double l1_all = 0.0;
    for (const double x : v) l1_all += std::fabs(x);
    const double l1_bar = l1_all - l1_s;

    double denom = l1_bar;
    if (report.mode == NspMode::robust_l1) {
        const Vec av = matvec(a.real(), v);
        double l1_av = 0.0;
        for (const double x : av) l1_av += std::fabs(x);
        denom = report.rho * l1_bar + report.tau * l1_av;
    }
    if (denom <= 0.0) return l1_s > 0.0 ? kInf : 0.0;
    return l1_s / denom;
}

namespace {

// --- restricted isometry --------------------------------------------------

struct RipBest {
    double delta = -1.0;
    std::vector<std::size_t> support;
};

template <typename T>
double support_delta(const Mat<T>& g, const std::vector<std::size_t>& sup) {
    const std::size_t s = sup.size();
    Mat<T> gs(s, s);
    for (std::size_t i = 0; i < s; ++i)
        for (std::size_t j = 0; j < s; ++j) gs(i, j) = g(sup[i], sup[j]);
    Vec ev;
    if constexpr (std::is_same_v<T, double>)
        ev = sym_eigenvalues(std::move(gs));
    else
        ev = herm_eigenvalues(std::move(gs));
    return std::max(ev.back() - 1.0, 1.0 - ev.front());
}

template <typename T>
RipEstimate rip_exact_with(const Mat<T>& g, std::size_t n, std::size_t s,
                           std::uint64_t total) {
    const RipBest best = parallel_chunk_reduce<RipBest>(
        static_cast<std::size_t>(total), RipBest{},
        [&](std::size_t lo, std::size_t hi) {
            RipBest acc;
            std::vector<std::size_t> c = unrank_combination(lo, n, s);
            for (std::size_t r = lo; r < hi; ++r) {
                const double d = support_delta(g, c);
                if (d > acc.delta) {
                    acc.delta = d;
                    acc.support = c;
                }
                if (r + 1 < hi) next_combination(c, n);
            }
            return acc;
        },
        [](RipBest acc, const RipBest& x) {
            return x.delta > acc.delta ? x : acc;
        });

    RipEstimate est;
    est.s = s;
    est.method = RipMethod::exact;
    est.delta = best.delta;
    est.supports_examined = total;
    est.extremal_support = best.support;
    return est;
}

template <typename T>
RipEstimate rip_monte_carlo_with(const Mat<T>& g, std::size_t n, std::size_t s,
                                 std::uint64_t trials, std::uint64_t seed) {
    constexpr std::uint64_t kHuge = 4000000;
    const std::uint64_t total = binomial_capped(n, s, kHuge);
    RngStream stream(derive_seed(seed, "rip", 0));

    RipBest best;
    std::uint64_t examined = 0;
    auto consider = [&](const std::vector<std::size_t>& sup) {
        const double d = support_delta(g, sup);
        if (d > best.delta) {
            best.delta = d;
            best.support = sup;
        }
        ++examined;
    };

    if (trials >= total && total < kHuge) {
        // The sample covers every support; sweep lexicographically.
        std::vector<std::size_t> c(s);
        for (std::size_t i = 0; i < s; ++i) c[i] = i;
        bool more = true;
        while (more) {
            consider(c);
            more = next_combination(c, n);
        }
    } else if (total < kHuge && trials * 2 > total) {
        // Dense sample: pick ranks by partial shuffle, then visit in order.
        std::vector<std::uint64_t> ranks(total);
        for (std::uint64_t r = 0; r < total; ++r) ranks[r] = r;
        for (std::uint64_t i = 0; i < trials; ++i)
            std::swap(ranks[i], ranks[i + stream.next_below(total - i)]);
        ranks.resize(trials);
        std::sort(ranks.begin(), ranks.end());
        for (const std::uint64_t r : ranks)
            consider(unrank_combination(r, n, s));
    } else {
        // Sparse sample: rejection on whole supports.
        std::set<std::vector<std::size_t>> sample;
        while (sample.size() < trials) sample.insert(stream.random_subset(n, s));
        for (const auto& sup : sample) consider(sup);
    }

    RipEstimate est;
    est.s = s;
    est.method = RipMethod::monte_carlo;
    est.delta = best.delta;
    est.supports_examined = examined;
    est.extremal_support = best.support;
    est.seed = seed;
    return est;
}

} // namespace

RipEstimate rip_constant(const DenseMatrix& a, std::size_t s, RipMethod method,
                         std::uint64_t trials, std::uint64_t seed) {
    const std::size_t n = a.cols();
    if (s == 0 || s > n)
        throw ValidationError("rip_constant requires 1 <= s <= N");

    if (method == RipMethod::exact) {
        const std::uint64_t total =
            binomial_capped(n, s, kRipSupportGuard + 1);
        if (total > kRipSupportGuard)
            throw ValidationError("rip_constant exact: C(N, s) exceeds the 1e6 guard");
        if (a.is_real()) return rip_exact_with(gram(a.real()), n, s, total);
        return rip_exact_with(gram(a.cplx()), n, s, total);
    }

    if (trials == 0)
        throw ValidationError("rip_constant monte_carlo requires trials >= 1");
    if (trials > kRipSupportGuard)
        throw ValidationError("rip_constant monte_carlo: trials exceed the 1e6 guard");
    if (a.is_real())
        return rip_monte_carlo_with(gram(a.real()), n, s, trials, seed);
    return rip_monte_carlo_with(gram(a.cplx()), n, s, trials, seed);
}

DiagnosticsReport guarantee_report(const DenseMatrix& a, std::size_t s,
                                   std::uint64_t rip_trials,
                                   std::uint64_t seed) {
    const std::size_t n = a.cols();
    const std::size_t m = a.rows();
    if (s == 0 || s > n)
        throw ValidationError("guarantee_report requires 1 <= s <= N");

    DiagnosticsReport rep;
    rep.s = s;
    rep.mu = coherence(a);

    // Orders are clamped: no more than N - 1 off-diagonal entries exist, and
    // supports never exceed N columns.
    const std::size_t o1 = std::min(s, n - 1);
    const std::size_t o0 = std::min(s - 1, n - 1);
    const double mu1_s = l1_coherence(a, o1);
    const double mu1_sm1 = l1_coherence(a, o0);
    rep.mu1.emplace_back(o0, mu1_sm1);
    if (o1 != o0) rep.mu1.emplace_back(o1, mu1_s);

    rep.welch1 = m <= n ? welch_bound(m, n, 1) : 0.0;
    rep.welch_s_valid = welch_s_valid(n, s);
    rep.frame = frame_check(a, 1e-10);

    // NSP is included while the LP count C(N, s) * 2^(s-1) stays desk-sized.
    const std::uint64_t lp_budget = UINT64_C(50000) >> std::min<std::size_t>(s - 1, 63);
    if (a.is_real() && binomial_capped(n, s, kNspSupportGuard + 1) <= lp_budget)
        rep.nsp.push_back(nsp_check(a, s, NspMode::plain));

    const std::size_t s2 = std::min(2 * s, n);
    bool certified = true;
    auto estimate = [&](std::size_t order) {
        if (binomial_capped(n, order, kRipSupportGuard + 1) <= kRipSupportGuard)
            return rip_constant(a, order, RipMethod::exact);
        certified = false;
        return rip_constant(a, order, RipMethod::monte_carlo, rip_trials, seed);
    };
    rep.rip.push_back(estimate(s));
    if (s2 != s) rep.rip.push_back(estimate(s2));
    const double delta_2s = rep.rip.back().delta;

    rep.guarantees.coherence_thm =
        GuaranteeCheck{mu1_s + mu1_sm1 < 1.0, mu1_s + mu1_sm1, 1.0};
    rep.guarantees.rip_third =
        GuaranteeCheck{delta_2s < 1.0 / 3.0, delta_2s, 1.0 / 3.0};
    const double robust_rhs = 4.0 / std::sqrt(41.0);
    rep.guarantees.rip_robust =
        GuaranteeCheck{delta_2s < robust_rhs, delta_2s, robust_rhs};
    rep.guarantees.certified = certified;
    return rep;
}

} // namespace ripkit
