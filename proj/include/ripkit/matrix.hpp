#pragma once

#include <complex>
#include <cstddef>
#include <variant>
#include <vector>

#include "ripkit/error.hpp"

namespace ripkit {

using Vec = std::vector<double>;
using Complex = std::complex<double>;
using CVec = std::vector<Complex>;

enum class Field { real, complex };

inline double conj_of(double x) { return x; }
inline Complex conj_of(const Complex& z) { return std::conj(z); }
inline double abs_sq(double x) { return x * x; }
inline double abs_sq(const Complex& z) { return std::norm(z); }
inline double real_part(double x) { return x; }
inline double real_part(const Complex& z) { return z.real(); }

// Row-major dense storage. Raw workhorse type; no invariants enforced here
// beyond the shape, so intermediates stay cheap.
template <typename T>
class Mat {
public:
    Mat() = default;
    Mat(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, T{}) {}

    static Mat identity(std::size_t n) {
        Mat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T{1};
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const {
        return data_[i * cols_ + j];
    }

    std::vector<T>& data() { return data_; }
    const std::vector<T>& data() const { return data_; }

    std::vector<T> column(std::size_t j) const {
        std::vector<T> c(rows_);
        for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
        return c;
    }

    std::vector<T> row(std::size_t i) const {
        std::vector<T> r(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                         data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
        return r;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using RMat = Mat<double>;
using CMat = Mat<Complex>;

template <typename T>
Mat<T> matmul(const Mat<T>& a, const Mat<T>& b);

// Conjugate transpose (plain transpose over the reals).
template <typename T>
Mat<T> adjoint(const Mat<T>& a);

// adjoint(a) * a, the column Gram matrix.
template <typename T>
Mat<T> gram(const Mat<T>& a);

// a * adjoint(a), the frame operator.
template <typename T>
Mat<T> outer_gram(const Mat<T>& a);

template <typename T>
std::vector<T> matvec(const Mat<T>& a, const std::vector<T>& x);

template <typename T>
double frobenius_norm(const Mat<T>& a);

template <typename T>
double max_abs(const Mat<T>& a);

// ||a - b||_F without forming the difference.
template <typename T>
double frobenius_distance(const Mat<T>& a, const Mat<T>& b);

double norm2(const Vec& v);
double norm1(const Vec& v);
double norm_inf(const Vec& v);
double dot(const Vec& a, const Vec& b);
Vec subtract(const Vec& a, const Vec& b);

// Tagged dense matrix: the carrier type for module interfaces and JSON I/O.
// Construction validates shape (both dimensions positive) and that every
// entry is finite.
class DenseMatrix {
public:
    explicit DenseMatrix(RMat m);
    explicit DenseMatrix(CMat m);

    Field field() const { return field_; }
    std::size_t rows() const;
    std::size_t cols() const;

    bool is_real() const { return field_ == Field::real; }

    const RMat& real() const;
    const CMat& cplx() const;

    // Widening copy; real matrices get zero imaginary parts.
    CMat as_complex() const;

private:
    Field field_;
    std::variant<RMat, CMat> m_;
};

} // namespace ripkit
