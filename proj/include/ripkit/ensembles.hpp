#pragma once

#include <cstdint>

#include "ripkit/matrix.hpp"

namespace ripkit {

enum class EnsembleKind { gaussian, bernoulli, simplex_etf, alltop_gabor };

struct EnsembleSpec {
    EnsembleKind kind = EnsembleKind::gaussian;
    std::size_t m = 0;
    std::size_t n = 0;                // column count N
    bool normalize_columns = false;
    std::uint64_t seed = 0;           // ignored by the deterministic kinds
};

// Sensing-matrix constructions.
//   gaussian:     entries i.i.d. N(0, 1/m)
//   bernoulli:    entries +-1/sqrt(m)
//   simplex_etf:  N = m+1 unit columns with pairwise inner products -1/m
//   alltop_gabor: m prime >= 5, N = m^2; time-frequency shifts of the cubic
//                 phase sequence g_j = e^{2 pi i j^3 / m}/sqrt(m)
DenseMatrix build(const EnsembleSpec& spec);

// Column-wise l2 normalization; zero columns are a singularity error.
DenseMatrix normalize_columns(const DenseMatrix& a);

// ceil(c * s * ln(N/s) / delta^2), clamped to [1, N].
std::size_t suggest_m(std::size_t s, std::size_t n, double delta, double c);

// Points (as rows) from a complete binary tree of cluster centers: children
// sit at distance decay^level from their parent along random unit directions,
// leaves emit Gaussian points at scale decay^depth, points assigned to leaves
// round-robin. depth = 0 degenerates to one standard Gaussian cluster.
RMat hierarchical_dataset(std::size_t count, std::size_t dim, std::size_t depth,
                          double decay, std::uint64_t seed);

} // namespace ripkit
