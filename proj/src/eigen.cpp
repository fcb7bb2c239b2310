#include "ripkit/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ripkit/error.hpp"

namespace ripkit {

namespace {

double pivot_phase(double apq, double /*r*/) { return apq >= 0.0 ? 1.0 : -1.0; }
Complex pivot_phase(const Complex& apq, double r) { return apq / r; }

template <typename T>
double off_diagonal_norm(const Mat<T>& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            if (i != j) s += abs_sq(a(i, j));
        }
    }
    return std::sqrt(s);
}

// One cyclic Jacobi pass: for every pivot (p,q) the Hermitian 2x2 block is
// reduced to a real symmetric one by the unitary diag(ph, 1) with
// ph = a_pq/|a_pq|, then rotated away by the classical symmetric Schur
// rotation. The combined column transform is J = [[ph*c, ph*s], [-s, c]].
template <typename T>
void jacobi(Mat<T>& a, Mat<T>* v, Vec& evals) {
    const std::size_t n = a.rows();
    const double fro = frobenius_norm(a);
    const double stop = 1e-14 * std::max(fro, 1e-300);
    const int max_sweeps = 64;

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        if (off_diagonal_norm(a) <= stop) break;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const T apq = a(p, q);
                const double r = std::sqrt(abs_sq(apq));
                if (r <= stop / n) continue;
                const T ph = pivot_phase(apq, r);
                const double app = real_part(a(p, p));
                const double aqq = real_part(a(q, q));
                const double tau = (aqq - app) / (2.0 * r);
                const double t =
                    (tau >= 0.0 ? 1.0 : -1.0) / (std::fabs(tau) + std::hypot(1.0, tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const T jpp = ph * c;
                const T jpq = ph * s;

                for (std::size_t k = 0; k < n; ++k) {
                    if (k == p || k == q) continue;
                    const T akp = a(k, p);
                    const T akq = a(k, q);
                    a(k, p) = akp * jpp - akq * s;
                    a(k, q) = akp * jpq + akq * c;
                    a(p, k) = conj_of(a(k, p));
                    a(q, k) = conj_of(a(k, q));
                }
                a(p, p) = T{app - t * r};
                a(q, q) = T{aqq + t * r};
                a(p, q) = T{};
                a(q, p) = T{};

                if (v) {
                    for (std::size_t k = 0; k < n; ++k) {
                        const T vkp = (*v)(k, p);
                        const T vkq = (*v)(k, q);
                        (*v)(k, p) = vkp * jpp - vkq * s;
                        (*v)(k, q) = vkp * jpq + vkq * c;
                    }
                }
            }
        }
    }

    evals.resize(n);
    for (std::size_t i = 0; i < n; ++i) evals[i] = real_part(a(i, i));

    // Sort ascending, permuting eigenvector columns to match.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return evals[i] < evals[j]; });
    Vec sorted(n);
    for (std::size_t i = 0; i < n; ++i) sorted[i] = evals[order[i]];
    evals = std::move(sorted);
    if (v) {
        Mat<T> w(n, n);
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t i = 0; i < n; ++i) w(i, j) = (*v)(i, order[j]);
        }
        *v = std::move(w);
    }
}

template <typename T>
void symmetrize(Mat<T>& a) {
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = i; j < a.cols(); ++j) {
            const T m = (a(i, j) + conj_of(a(j, i))) * 0.5;
            a(i, j) = m;
            a(j, i) = conj_of(m);
        }
    }
}

template <typename T>
double hermitian_defect(const Mat<T>& a) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = i; j < a.cols(); ++j) {
            const T diff = a(i, j) - conj_of(a(j, i));
            d = std::max(d, std::sqrt(abs_sq(diff)));
        }
    }
    return d;
}

} // namespace

Vec sym_eigenvalues(RMat a) {
    symmetrize(a);
    Vec evals;
    jacobi(a, static_cast<RMat*>(nullptr), evals);
    return evals;
}

Vec herm_eigenvalues(CMat a) {
    symmetrize(a);
    Vec evals;
    jacobi(a, static_cast<CMat*>(nullptr), evals);
    return evals;
}

std::pair<Vec, RMat> sym_eigensystem(RMat a) {
    symmetrize(a);
    RMat v = RMat::identity(a.rows());
    Vec evals;
    jacobi(a, &v, evals);
    return {std::move(evals), std::move(v)};
}

std::pair<Vec, CMat> herm_eigensystem(CMat a) {
    symmetrize(a);
    CMat v = CMat::identity(a.rows());
    Vec evals;
    jacobi(a, &v, evals);
    return {std::move(evals), std::move(v)};
}

EigenResult symmetric_eig(const DenseMatrix& a, bool want_vectors) {
    if (a.rows() != a.cols()) {
        throw ValidationError("symmetric_eig: matrix must be square");
    }
    const double scale = a.is_real() ? max_abs(a.real()) : max_abs(a.cplx());
    EigenResult result;
    if (a.is_real()) {
        if (hermitian_defect(a.real()) > 1e-10 * std::max(scale, 1.0)) {
            throw ValidationError("symmetric_eig: matrix is not symmetric");
        }
        if (want_vectors) {
            auto [evals, v] = sym_eigensystem(a.real());
            result.eigenvalues = std::move(evals);
            result.eigenvectors.emplace(std::move(v));
        } else {
            result.eigenvalues = sym_eigenvalues(a.real());
        }
    } else {
        if (hermitian_defect(a.cplx()) > 1e-10 * std::max(scale, 1.0)) {
            throw ValidationError("symmetric_eig: matrix is not Hermitian");
        }
        if (want_vectors) {
            auto [evals, v] = herm_eigensystem(a.cplx());
            result.eigenvalues = std::move(evals);
            result.eigenvectors.emplace(std::move(v));
        } else {
            result.eigenvalues = herm_eigenvalues(a.cplx());
        }
    }
    return result;
}

} // namespace ripkit
