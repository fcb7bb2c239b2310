#include "ripkit/matrix.hpp"

#include <cmath>
#include <string>

namespace ripkit {

template <typename T>
Mat<T> matmul(const Mat<T>& a, const Mat<T>& b) {
    if (a.cols() != b.rows()) {
        throw ValidationError("matmul: inner dimensions disagree (" +
                              std::to_string(a.cols()) + " vs " +
                              std::to_string(b.rows()) + ")");
    }
    Mat<T> c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const T aik = a(i, k);
            if (aik == T{}) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) {
                c(i, j) += aik * b(k, j);
            }
        }
    }
    return c;
}

template <typename T>
Mat<T> adjoint(const Mat<T>& a) {
    Mat<T> t(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            t(j, i) = conj_of(a(i, j));
        }
    }
    return t;
}

template <typename T>
Mat<T> gram(const Mat<T>& a) {
    const std::size_t n = a.cols();
    Mat<T> g(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            T s{};
            for (std::size_t k = 0; k < a.rows(); ++k) {
                s += conj_of(a(k, i)) * a(k, j);
            }
            g(i, j) = s;
            g(j, i) = conj_of(s);
        }
    }
    return g;
}

template <typename T>
Mat<T> outer_gram(const Mat<T>& a) {
    const std::size_t m = a.rows();
    Mat<T> g(m, m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i; j < m; ++j) {
            T s{};
            for (std::size_t k = 0; k < a.cols(); ++k) {
                s += a(i, k) * conj_of(a(j, k));
            }
            g(i, j) = s;
            g(j, i) = conj_of(s);
        }
    }
    return g;
}

template <typename T>
std::vector<T> matvec(const Mat<T>& a, const std::vector<T>& x) {
    if (a.cols() != x.size()) {
        throw ValidationError("matvec: dimension mismatch");
    }
    std::vector<T> y(a.rows(), T{});
    for (std::size_t i = 0; i < a.rows(); ++i) {
        T s{};
        for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

template <typename T>
double frobenius_norm(const Mat<T>& a) {
    double s = 0.0;
    for (const auto& x : a.data()) s += abs_sq(x);
    return std::sqrt(s);
}

template <typename T>
double max_abs(const Mat<T>& a) {
    double m = 0.0;
    for (const auto& x : a.data()) m = std::max(m, std::sqrt(abs_sq(x)));
    return m;
}

template <typename T>
double frobenius_distance(const Mat<T>& a, const Mat<T>& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw ValidationError("frobenius_distance: shape mismatch");
    }
    double s = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i) {
        s += abs_sq(a.data()[i] - b.data()[i]);
    }
    return std::sqrt(s);
}

template Mat<double> matmul(const Mat<double>&, const Mat<double>&);
template Mat<Complex> matmul(const Mat<Complex>&, const Mat<Complex>&);
template Mat<double> adjoint(const Mat<double>&);
template Mat<Complex> adjoint(const Mat<Complex>&);
template Mat<double> gram(const Mat<double>&);
template Mat<Complex> gram(const Mat<Complex>&);
template Mat<double> outer_gram(const Mat<double>&);
template Mat<Complex> outer_gram(const Mat<Complex>&);
template std::vector<double> matvec(const Mat<double>&, const std::vector<double>&);
template std::vector<Complex> matvec(const Mat<Complex>&, const std::vector<Complex>&);
template double frobenius_norm(const Mat<double>&);
template double frobenius_norm(const Mat<Complex>&);
template double max_abs(const Mat<double>&);
template double max_abs(const Mat<Complex>&);
template double frobenius_distance(const Mat<double>&, const Mat<double>&);
template double frobenius_distance(const Mat<Complex>&, const Mat<Complex>&);

double norm2(const Vec& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

double norm1(const Vec& v) {
    double s = 0.0;
    for (double x : v) s += std::fabs(x);
    return s;
}

double norm_inf(const Vec& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::fabs(x));
    return m;
}

double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

Vec subtract(const Vec& a, const Vec& b) {
    Vec d(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
    return d;
}

namespace {

bool finite_entry(double x) { return std::isfinite(x); }
bool finite_entry(const Complex& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

template <typename T>
void check_dense(const Mat<T>& m) {
    if (m.rows() == 0 || m.cols() == 0) {
        throw ValidationError("DenseMatrix: rows and cols must be positive");
    }
    for (const auto& x : m.data()) {
        if (!finite_entry(x)) {
            throw ValidationError("DenseMatrix: non-finite entry");
        }
    }
}

} // namespace

DenseMatrix::DenseMatrix(RMat m) : field_(Field::real), m_(std::move(m)) {
    check_dense(std::get<RMat>(m_));
}

DenseMatrix::DenseMatrix(CMat m) : field_(Field::complex), m_(std::move(m)) {
    check_dense(std::get<CMat>(m_));
}

std::size_t DenseMatrix::rows() const {
    return is_real() ? std::get<RMat>(m_).rows() : std::get<CMat>(m_).rows();
}

std::size_t DenseMatrix::cols() const {
    return is_real() ? std::get<RMat>(m_).cols() : std::get<CMat>(m_).cols();
}

const RMat& DenseMatrix::real() const {
    if (!is_real()) {
        throw ValidationError("DenseMatrix: expected a real matrix");
    }
    return std::get<RMat>(m_);
}

const CMat& DenseMatrix::cplx() const {
    if (is_real()) {
        throw ValidationError("DenseMatrix: expected a complex matrix");
    }
    return std::get<CMat>(m_);
}

CMat DenseMatrix::as_complex() const {
    if (!is_real()) return std::get<CMat>(m_);
    const RMat& r = std::get<RMat>(m_);
    CMat c(r.rows(), r.cols());
    for (std::size_t i = 0; i < r.data().size(); ++i) {
        c.data()[i] = Complex(r.data()[i], 0.0);
    }
    return c;
}

} // namespace ripkit
