#include "ripkit/svd.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <type_traits>

#include "ripkit/eigen.hpp"
#include "ripkit/error.hpp"

namespace ripkit {

namespace {

// Appends orthonormal columns to w (held column-count `have`) until it is
// square, drawing candidates from the standard basis: at each step the basis
// vector with the largest residual after projection is taken (lowest index on
// ties), keeping the completion deterministic.
template <typename T>
void complete_basis(Mat<T>& w, std::size_t have) {
    const std::size_t n = w.rows();
    for (std::size_t col = have; col < n; ++col) {
        std::vector<T> best;
        double best_norm = -1.0;
        for (std::size_t k = 0; k < n; ++k) {
            std::vector<T> cand(n, T{});
            cand[k] = T{1};
            for (std::size_t j = 0; j < col; ++j) {
                T proj{};
                for (std::size_t i = 0; i < n; ++i) proj += conj_of(w(i, j)) * cand[i];
                for (std::size_t i = 0; i < n; ++i) cand[i] -= proj * w(i, j);
            }
            double nrm = 0.0;
            for (const auto& x : cand) nrm += abs_sq(x);
            nrm = std::sqrt(nrm);
            if (nrm > best_norm + 1e-12) {
                best_norm = nrm;
                best = std::move(cand);
            }
        }
        for (std::size_t i = 0; i < n; ++i) w(i, col) = best[i] / best_norm;
    }
}

// Re-orthonormalizes the first `count` columns in place (two MGS passes).
template <typename T>
void orthonormalize(Mat<T>& w, std::size_t count) {
    for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t j = 0; j < count; ++j) {
            for (std::size_t k = 0; k < j; ++k) {
                T proj{};
                for (std::size_t i = 0; i < w.rows(); ++i) {
                    proj += conj_of(w(i, k)) * w(i, j);
                }
                for (std::size_t i = 0; i < w.rows(); ++i) {
                    w(i, j) -= proj * w(i, k);
                }
            }
            double nrm = 0.0;
            for (std::size_t i = 0; i < w.rows(); ++i) nrm += abs_sq(w(i, j));
            nrm = std::sqrt(nrm);
            for (std::size_t i = 0; i < w.rows(); ++i) w(i, j) /= nrm;
        }
    }
}

template <typename T>
void svd_kernel(const Mat<T>& a, bool want_factors, Vec& sv, Mat<T>& u, Mat<T>& v) {
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    const std::size_t k = std::min(m, n);

    // Eigensystem of the smaller Gram; ascending order flipped to descending.
    const bool use_cols = n <= m;
    Vec evals;
    Mat<T> evecs;
    if (use_cols) {
        if (want_factors) {
            if constexpr (std::is_same_v<T, double>) {
                auto [w, q] = sym_eigensystem(gram(a));
                evals = std::move(w);
                evecs = std::move(q);
            } else {
                auto [w, q] = herm_eigensystem(gram(a));
                evals = std::move(w);
                evecs = std::move(q);
            }
        } else {
            if constexpr (std::is_same_v<T, double>) {
                evals = sym_eigenvalues(gram(a));
            } else {
                evals = herm_eigenvalues(gram(a));
            }
        }
    } else {
        if (want_factors) {
            if constexpr (std::is_same_v<T, double>) {
                auto [w, q] = sym_eigensystem(outer_gram(a));
                evals = std::move(w);
                evecs = std::move(q);
            } else {
                auto [w, q] = herm_eigensystem(outer_gram(a));
                evals = std::move(w);
                evecs = std::move(q);
            }
        } else {
            if constexpr (std::is_same_v<T, double>) {
                evals = sym_eigenvalues(outer_gram(a));
            } else {
                evals = herm_eigenvalues(outer_gram(a));
            }
        }
    }

    sv.assign(k, 0.0);
    const std::size_t side = use_cols ? n : m;
    for (std::size_t i = 0; i < k; ++i) {
        // evals ascending over `side` values; the top k are the squares.
        sv[i] = std::sqrt(std::max(0.0, evals[side - 1 - i]));
    }

    if (!want_factors) return;

    // Columns of the decomposed side, descending by singular value.
    Mat<T> w(side, side);
    for (std::size_t j = 0; j < side; ++j) {
        for (std::size_t i = 0; i < side; ++i) w(i, j) = evecs(i, side - 1 - j);
    }

    const double cut = sv.empty() ? 0.0 : sv[0] * 1e-13;
    std::size_t rank = 0;
    while (rank < k && sv[rank] > cut) ++rank;

    const std::size_t other = use_cols ? m : n;
    Mat<T> z(other, other);
    if (use_cols) {
        // w holds V; propagate U = A V / sigma on the numerically solid part.
        for (std::size_t j = 0; j < rank; ++j) {
            for (std::size_t i = 0; i < m; ++i) {
                T s{};
                for (std::size_t l = 0; l < n; ++l) s += a(i, l) * w(l, j);
                z(i, j) = s / sv[j];
            }
        }
    } else {
        // w holds U; propagate V = A* U / sigma.
        for (std::size_t j = 0; j < rank; ++j) {
            for (std::size_t i = 0; i < n; ++i) {
                T s{};
                for (std::size_t l = 0; l < m; ++l) s += conj_of(a(l, i)) * w(l, j);
                z(i, j) = s / sv[j];
            }
        }
    }
    orthonormalize(z, rank);
    complete_basis(z, rank);

    if (use_cols) {
        u = std::move(z);
        v = std::move(w);
    } else {
        u = std::move(w);
        v = std::move(z);
    }
}

} // namespace

SvdResult svd(const DenseMatrix& a, bool want_factors) {
    SvdResult r;
    if (a.is_real()) {
        RMat u, v;
        svd_kernel(a.real(), want_factors, r.singular_values, u, v);
        if (want_factors) {
            r.u.emplace(std::move(u));
            r.v.emplace(std::move(v));
        }
    } else {
        CMat u, v;
        svd_kernel(a.cplx(), want_factors, r.singular_values, u, v);
        if (want_factors) {
            r.u.emplace(std::move(u));
            r.v.emplace(std::move(v));
        }
    }
    return r;
}

RMat null_space_basis(const RMat& a, double rank_tol) {
    Vec sv;
    RMat u, v;
    svd_kernel(a, true, sv, u, v);
    const std::size_t n = a.cols();
    const double top = sv.empty() ? 0.0 : sv[0];
    std::size_t rank = 0;
    while (rank < sv.size() && sv[rank] > rank_tol * std::max(top, 1e-300)) ++rank;
    const std::size_t d = n - rank;
    RMat kbasis(n, d);
    for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t i = 0; i < n; ++i) kbasis(i, j) = v(i, rank + j);
    }
    return kbasis;
}

namespace {

// A+ = A* Q diag(1/lambda) Q* from the eigensystem of the m x m frame
// operator; skips the full SVD factors, whose n x n completion is wasted
// work on wide inputs.
template <typename T>
Mat<T> pinv_kernel(const Mat<T>& a, double rank_tol) {
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    Vec evals;
    Mat<T> q;
    if constexpr (std::is_same_v<T, double>) {
        auto [w, z] = sym_eigensystem(outer_gram(a));
        evals = std::move(w);
        q = std::move(z);
    } else {
        auto [w, z] = herm_eigensystem(outer_gram(a));
        evals = std::move(w);
        q = std::move(z);
    }
    const double top = std::sqrt(std::max(evals.back(), 0.0));
    const double bottom = std::sqrt(std::max(evals.front(), 0.0));
    const double ratio = top > 0.0 ? bottom / top : 0.0;
    if (!(top > 0.0) || ratio <= rank_tol) {
        throw SingularityError(
            "pseudoinverse: rank-deficient input, smallest/largest singular "
            "value ratio " +
            std::to_string(ratio));
    }
    // b = A* Q with columns scaled by 1/lambda, then p = b Q*.
    Mat<T> b(n, m);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            T s{};
            for (std::size_t l = 0; l < m; ++l) s += conj_of(a(l, i)) * q(l, j);
            b(i, j) = s / evals[j];
        }
    }
    Mat<T> p(n, m);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            T s{};
            for (std::size_t l = 0; l < m; ++l) s += b(i, l) * conj_of(q(j, l));
            p(i, j) = s;
        }
    }
    return p;
}

} // namespace

DenseMatrix pseudoinverse(const DenseMatrix& a, double rank_tol) {
    if (a.rows() > a.cols()) {
        throw ValidationError(
            "pseudoinverse: expected a wide matrix (rows <= cols)");
    }
    if (a.is_real()) {
        return DenseMatrix(pinv_kernel(a.real(), rank_tol));
    }
    return DenseMatrix(pinv_kernel(a.cplx(), rank_tol));
}

double spectral_norm(const RMat& a) {
    Vec sv;
    RMat u, v;
    svd_kernel(a, false, sv, u, v);
    return sv.empty() ? 0.0 : sv[0];
}

} // namespace ripkit
