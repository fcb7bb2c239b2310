#include "ripkit/sparsity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "ripkit/error.hpp"

namespace ripkit {

namespace {

template <typename V>
void validate_sparse(std::size_t dim, const std::vector<std::size_t>& idx,
                     const V& vals) {
    if (dim == 0) throw ValidationError("SparseVector: dim must be positive");
    if (idx.size() != vals.size()) {
        throw ValidationError("SparseVector: index/value length mismatch");
    }
    for (std::size_t i = 0; i < idx.size(); ++i) {
        if (idx[i] >= dim) {
            throw ValidationError("SparseVector: index " + std::to_string(idx[i]) +
                                  " out of range");
        }
        if (i > 0 && idx[i] <= idx[i - 1]) {
            throw ValidationError("SparseVector: indices must strictly increase");
        }
        const double mag = std::sqrt(abs_sq(vals[i]));
        if (mag == 0.0 || !std::isfinite(mag)) {
            throw ValidationError("SparseVector: stored values must be nonzero "
                                  "and finite");
        }
    }
}

// Indices of the s entries kept by magnitude, ties to the lower index;
// zero entries are excluded. Returned ascending.
template <typename V>
std::vector<std::size_t> keep_set(const V& x, std::size_t s) {
    const std::size_t n = x.size();
    if (s > n) {
        throw ValidationError("s exceeds the vector dimension");
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const double ma = abs_sq(x[a]);
        const double mb = abs_sq(x[b]);
        if (ma != mb) return ma > mb;
        return a < b;
    });
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < s; ++i) {
        if (abs_sq(x[order[i]]) > 0.0) keep.push_back(order[i]);
    }
    std::sort(keep.begin(), keep.end());
    return keep;
}

} // namespace

SparseVector::SparseVector(std::size_t dim, std::vector<std::size_t> indices,
                           Vec values)
    : dim_(dim), field_(Field::real), indices_(std::move(indices)),
      values_(std::move(values)) {
    validate_sparse(dim_, indices_, std::get<Vec>(values_));
}

SparseVector::SparseVector(std::size_t dim, std::vector<std::size_t> indices,
                           CVec values)
    : dim_(dim), field_(Field::complex), indices_(std::move(indices)),
      values_(std::move(values)) {
    validate_sparse(dim_, indices_, std::get<CVec>(values_));
}

const Vec& SparseVector::values() const {
    if (!is_real()) {
        throw ValidationError("SparseVector: expected real values");
    }
    return std::get<Vec>(values_);
}

const CVec& SparseVector::cvalues() const {
    if (is_real()) {
        throw ValidationError("SparseVector: expected complex values");
    }
    return std::get<CVec>(values_);
}

Vec SparseVector::to_dense() const {
    const Vec& v = values();
    Vec out(dim_, 0.0);
    for (std::size_t i = 0; i < indices_.size(); ++i) out[indices_[i]] = v[i];
    return out;
}

std::size_t l0_norm(const SparseVector& x) { return x.indices().size(); }

SparseVector hard_threshold(const Vec& x, std::size_t s) {
    auto keep = keep_set(x, s);
    Vec vals(keep.size());
    for (std::size_t i = 0; i < keep.size(); ++i) vals[i] = x[keep[i]];
    return SparseVector(x.size(), std::move(keep), std::move(vals));
}

SparseVector hard_threshold(const CVec& x, std::size_t s) {
    auto keep = keep_set(x, s);
    CVec vals(keep.size());
    for (std::size_t i = 0; i < keep.size(); ++i) vals[i] = x[keep[i]];
    return SparseVector(x.size(), std::move(keep), std::move(vals));
}

double best_s_term_error(const Vec& x, std::size_t s, double p) {
    if (!(p >= 1.0)) {
        throw ValidationError("best_s_term_error: p must be >= 1");
    }
    auto keep = keep_set(x, s);
    // Residual magnitudes outside the kept support.
    std::vector<bool> kept(x.size(), false);
    for (std::size_t i : keep) kept[i] = true;

    if (std::isinf(p)) {
        double m = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (!kept[i]) m = std::max(m, std::fabs(x[i]));
        }
        return m;
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (kept[i]) continue;
        const double a = std::fabs(x[i]);
        if (p == 1.0) {
            acc += a;
        } else if (p == 2.0) {
            acc += a * a;
        } else {
            acc += std::pow(a, p);
        }
    }
    if (p == 1.0) return acc;
    if (p == 2.0) return std::sqrt(acc);
    return std::pow(acc, 1.0 / p);
}

} // namespace ripkit
