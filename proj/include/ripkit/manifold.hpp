#pragma once

#include <cstdint>
#include <vector>

#include "ripkit/ensembles.hpp"
#include "ripkit/matrix.hpp"

namespace ripkit {

struct PointCloud {
    std::size_t dim = 0;
    std::vector<Vec> points;
    std::size_t size() const { return points.size(); }
};

// Throws unless every point matches dim and dim >= 1.
void validate_cloud(const PointCloud& pc);

RMat euclidean_distances(const PointCloud& pc);

enum class CompressionMode { shared, per_point };

struct CompressionRun {
    CompressionMode mode = CompressionMode::shared;
    EnsembleKind ensemble = EnsembleKind::gaussian;
    std::uint64_t seed = 0;
    PointCloud original;
    PointCloud projected;                // dim m
    std::vector<DenseMatrix> matrices;   // 1 (shared) or n (per_point)
    std::vector<DenseMatrix> pullbacks;  // right inverses, A_k * DF_k = I
    std::vector<DenseMatrix> metrics;    // G_k = DF_k^T DF_k, positive-definite
};

// Draws the compression matrices (rank-deficient draws retried up to 3 times
// on derived seeds), projects the cloud, and verifies the pullback and
// metric invariants.
CompressionRun compress(const PointCloud& sigma0, std::size_t m,
                        CompressionMode mode, EnsembleKind kind,
                        std::uint64_t seed);

// Exponential map of the radius-r sphere at p; v must be tangent at p.
// Beyond ||v|| = pi r the map wraps past the antipode; callers guard.
Vec sphere_exp(const Vec& p, const Vec& v, double r);

bool within_injectivity_radius(const Vec& v, double r);

// d(p, q) = r arccos(<p, q>/r^2) for points on the radius-r sphere,
// evaluated in the half-angle chord form to keep small angles accurate.
RMat geodesic_distances(const PointCloud& pts, double r);

// max over pairs of |d_test^2 - d_ref^2| / d_ref^2.
double distortion(const RMat& d_ref, const RMat& d_test);

struct SphereExtension {
    double radius = 0.0;
    Vec base_point;            // north pole (0, ..., 0, R)
    PointCloud lifted;         // dim m+1, every point at norm R
    RMat geodesic;             // n x n
    double delta_sphere = 0.0; // geodesic vs original distances
    double delta_linear = 0.0; // projected vs original distances
};

// Mean-centers the projected cloud, plants it in the tangent plane at the
// north pole, and lifts through the exponential map.
SphereExtension extend_to_sphere(const CompressionRun& run, double r);

struct RadiusFit {
    double radius = 0.0;
    SphereExtension extension;
};

// Minimizes delta_sphere over the grid; ties go to the smallest radius.
// Grid entries at or below diameter/pi are skipped; all-invalid throws.
RadiusFit fit_radius(const CompressionRun& run, const Vec& grid);
RadiusFit fit_radius(const CompressionRun& run);

// 16 log-spaced radii from the projected diameter to 1000x it.
Vec default_radius_grid(const CompressionRun& run);

// Marchenko-Pastur density and CDF at aspect ratio lambda in (0, 1]; the
// support is [(1 - sqrt(lambda))^2, (1 + sqrt(lambda))^2].
double mp_density(double x, double lambda);
double mp_cdf(double x, double lambda);

// Kolmogorov-Smirnov distance between the sample and the MP law.
double mp_ks_statistic(Vec sample, double lambda);

struct SpectralComparison {
    Vec eigenvalues;           // pooled over k, ascending
    double lambda = 0.0;       // m/N
    double support_lo = 0.0;
    double support_hi = 0.0;
    double ks_statistic = 0.0;
    bool ensemble_mismatch = false;  // comparison assumes Gaussian entries
};

// Pools the spectra of (m/N) A_k A_k^T, whose entries are variance-1/N
// after the rescaling, and compares against mp_cdf(., m/N).
SpectralComparison spectral_compare(const CompressionRun& run);

} // namespace ripkit
