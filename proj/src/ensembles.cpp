#include "ripkit/ensembles.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>

#include "ripkit/error.hpp"
#include "ripkit/rng.hpp"

namespace ripkit {

namespace {

bool is_prime(std::size_t m) {
    if (m < 2) return false;
    for (std::size_t d = 2; d * d <= m; ++d) {
        if (m % d == 0) return false;
    }
    return true;
}

RMat gaussian_matrix(const EnsembleSpec& spec) {
    RngStream stream(derive_seed(spec.seed, "gaussian", 0));
    const double scale = 1.0 / std::sqrt(static_cast<double>(spec.m));
    RMat a(spec.m, spec.n);
    for (auto& x : a.data()) x = stream.next_gaussian() * scale;
    return a;
}

RMat bernoulli_matrix(const EnsembleSpec& spec) {
    RngStream stream(derive_seed(spec.seed, "bernoulli", 0));
    const double scale = 1.0 / std::sqrt(static_cast<double>(spec.m));
    RMat a(spec.m, spec.n);
    for (auto& x : a.data()) x = stream.next_sign() * scale;
    return a;
}

// Vertices of the regular simplex, written in the orthonormal Helmert basis
// of the hyperplane orthogonal to the all-ones vector. Row k-1 of column i is
// h_k[i] * sqrt((m+1)/m) with h_k the k-th Helmert row, which makes every
// pairwise inner product exactly -1/m.
RMat simplex_etf_matrix(std::size_t m) {
    const std::size_t n = m + 1;
    const double lift = std::sqrt((static_cast<double>(m) + 1.0) / m);
    RMat a(m, n);
    for (std::size_t k = 1; k <= m; ++k) {
        const double norm = 1.0 / std::sqrt(static_cast<double>(k) * (k + 1));
        for (std::size_t i = 0; i < n; ++i) {
            double h;
            if (i < k) {
                h = norm;
            } else if (i == k) {
                h = -static_cast<double>(k) * norm;
            } else {
                h = 0.0;
            }
            a(k - 1, i) = h * lift;
        }
    }
    return a;
}

CMat alltop_gabor_matrix(std::size_t m) {
    const std::int64_t mi = static_cast<std::int64_t>(m);
    const double scale = 1.0 / std::sqrt(static_cast<double>(m));
    CMat a(m, m * m);
    for (std::size_t k = 0; k < m; ++k) {
        for (std::size_t l = 0; l < m; ++l) {
            const std::size_t col = k * m + l;
            for (std::size_t j = 0; j < m; ++j) {
                // Integer phase arithmetic mod m keeps the roots of unity
                // exact up to one cos/sin evaluation.
                std::int64_t d = (static_cast<std::int64_t>(j) -
                                  static_cast<std::int64_t>(k)) % mi;
                if (d < 0) d += mi;
                const std::int64_t cubic = ((d * d) % mi) * d % mi;
                const std::int64_t phase =
                    (cubic + static_cast<std::int64_t>(l * j) % mi) % mi;
                const double angle =
                    2.0 * std::numbers::pi * static_cast<double>(phase) / m;
                a(j, col) = Complex(std::cos(angle), std::sin(angle)) * scale;
            }
        }
    }
    return a;
}

} // namespace

DenseMatrix build(const EnsembleSpec& spec) {
    switch (spec.kind) {
        case EnsembleKind::gaussian:
        case EnsembleKind::bernoulli: {
            if (spec.m < 1 || spec.m > spec.n) {
                throw ValidationError("build: gaussian/bernoulli needs 1 <= m <= N");
            }
            RMat a = spec.kind == EnsembleKind::gaussian ? gaussian_matrix(spec)
                                                         : bernoulli_matrix(spec);
            DenseMatrix d(std::move(a));
            return spec.normalize_columns ? ripkit::normalize_columns(d)
                                          : std::move(d);
        }
        case EnsembleKind::simplex_etf: {
            if (spec.m < 1 || spec.n != spec.m + 1) {
                throw ValidationError("build: simplex_etf needs N = m + 1");
            }
            return DenseMatrix(simplex_etf_matrix(spec.m));
        }
        case EnsembleKind::alltop_gabor: {
            if (spec.m < 5 || !is_prime(spec.m)) {
                throw ValidationError(
                    "build: alltop_gabor needs prime m >= 5, got m = " +
                    std::to_string(spec.m));
            }
            if (spec.n != spec.m * spec.m) {
                throw ValidationError("build: alltop_gabor needs N = m^2");
            }
            return DenseMatrix(alltop_gabor_matrix(spec.m));
        }
    }
    throw ValidationError("build: unknown ensemble kind");
}

namespace {

template <typename T>
Mat<T> normalize_kernel(const Mat<T>& a) {
    Mat<T> out = a;
    for (std::size_t j = 0; j < a.cols(); ++j) {
        double nrm = 0.0;
        for (std::size_t i = 0; i < a.rows(); ++i) nrm += abs_sq(a(i, j));
        nrm = std::sqrt(nrm);
        if (nrm == 0.0) {
            throw SingularityError("normalize_columns: column " +
                                   std::to_string(j) + " is zero");
        }
        for (std::size_t i = 0; i < a.rows(); ++i) out(i, j) = a(i, j) / nrm;
    }
    return out;
}

} // namespace

DenseMatrix normalize_columns(const DenseMatrix& a) {
    if (a.is_real()) return DenseMatrix(normalize_kernel(a.real()));
    return DenseMatrix(normalize_kernel(a.cplx()));
}

std::size_t suggest_m(std::size_t s, std::size_t n, double delta, double c) {
    if (s < 1 || s >= n) {
        throw ValidationError("suggest_m: needs 1 <= s < N");
    }
    if (!(delta > 0.0 && delta < 1.0)) {
        throw ValidationError("suggest_m: delta must lie in (0, 1)");
    }
    if (!(c > 0.0)) {
        throw ValidationError("suggest_m: c must be positive");
    }
    const double raw = c * static_cast<double>(s) *
                       std::log(static_cast<double>(n) / static_cast<double>(s)) /
                       (delta * delta);
    const double ceiled = std::ceil(raw);
    if (ceiled < 1.0) return 1;
    if (ceiled > static_cast<double>(n)) return n;
    return static_cast<std::size_t>(ceiled);
}

RMat hierarchical_dataset(std::size_t count, std::size_t dim, std::size_t depth,
                          double decay, std::uint64_t seed) {
    if (count < 1 || dim < 1) {
        throw ValidationError("hierarchical_dataset: count and dim must be >= 1");
    }
    if (!(decay > 0.0 && decay < 1.0)) {
        throw ValidationError("hierarchical_dataset: decay must lie in (0, 1)");
    }
    if (depth > 20) {
        throw ValidationError("hierarchical_dataset: depth beyond 20 is not "
                              "a desk-scale tree");
    }

    // Centers by heap index: node 1 is the root at the origin; node h at
    // level L sits at parent + decay^L * (random unit direction).
    const std::size_t leaves = std::size_t{1} << depth;
    std::vector<Vec> center(2 * leaves, Vec(dim, 0.0));
    double radius = 1.0;
    std::size_t level_begin = 2;  // first heap index of level 1
    for (std::size_t level = 1; level <= depth; ++level) {
        radius *= decay;
        const std::size_t level_end = level_begin * 2;
        for (std::size_t h = level_begin; h < level_end; ++h) {
            RngStream stream(derive_seed(seed, "tree", h));
            Vec dir(dim);
            double nrm = 0.0;
            for (auto& x : dir) {
                x = stream.next_gaussian();
                nrm += x * x;
            }
            nrm = std::sqrt(nrm);
            const Vec& parent = center[h / 2];
            for (std::size_t i = 0; i < dim; ++i) {
                center[h][i] = parent[i] + radius * dir[i] / nrm;
            }
        }
        level_begin = level_end;
    }

    const double leaf_scale = radius;  // decay^depth; 1 when depth = 0
    RMat points(count, dim);
    for (std::size_t p = 0; p < count; ++p) {
        const std::size_t leaf_heap = leaves + p % leaves;
        const Vec& base = center[leaf_heap];
        RngStream stream(derive_seed(seed, "point", p));
        for (std::size_t i = 0; i < dim; ++i) {
            points(p, i) = base[i] + leaf_scale * stream.next_gaussian();
        }
    }
    return points;
}

} // namespace ripkit
