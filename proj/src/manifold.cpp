#include "ripkit/manifold.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <utility>

#include "ripkit/eigen.hpp"
#include "ripkit/error.hpp"
#include "ripkit/rng.hpp"
#include "ripkit/svd.hpp"

namespace ripkit {
namespace {

constexpr double kPi = std::numbers::pi;

struct MpSupport {
    double lo = 0.0;
    double hi = 0.0;
};

MpSupport mp_support(double lambda) {
    const double rt = std::sqrt(lambda);
    return {(1.0 - rt) * (1.0 - rt), (1.0 + rt) * (1.0 + rt)};
}

void check_lambda(double lambda) {
    if (!(lambda > 0.0) || lambda > 1.0)
        throw ValidationError("aspect ratio must lie in (0, 1]");
}

// Density after the substitution x = lo + w sin^2(theta), which absorbs the
// edge (and, at lambda = 1, the hard-edge 1/sqrt(x)) singularities:
//   f(x) dx = w^2 sin^2(2 theta) / (4 pi lambda x) d theta.
double mp_theta_integrand(double theta, double lo, double w, double lambda) {
    const double st = std::sin(theta);
    const double s2 = std::sin(2.0 * theta);
    const double x = lo + w * st * st;
    if (x <= 0.0) return w / (kPi * lambda);  // limit at theta = 0 when lo = 0
    return w * w * s2 * s2 / (4.0 * kPi * lambda * x);
}

double simpson(double fa, double fm, double fb, double a, double b) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <typename F>
double adaptive_simpson(const F& f, double a, double b, double fa, double fm,
                        double fb, double whole, double tol, int depth) {
    const double mid = 0.5 * (a + b);
    const double flm = f(0.5 * (a + mid));
    const double frm = f(0.5 * (mid + b));
    const double left = simpson(fa, flm, fm, a, mid);
    const double right = simpson(fm, frm, fb, mid, b);
    const double err = left + right - whole;
    if (depth <= 0 || std::abs(err) <= 15.0 * tol)
        return left + right + err / 15.0;
    return adaptive_simpson(f, a, mid, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, mid, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <typename F>
double integrate(const F& f, double a, double b, double tol) {
    if (!(b > a)) return 0.0;
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    return adaptive_simpson(f, a, b, fa, fm, fb, simpson(fa, fm, fb, a, b), tol, 30);
}

double projected_diameter(const CompressionRun& run) {
    return max_abs(euclidean_distances(run.projected));
}

} // namespace

void validate_cloud(const PointCloud& pc) {
    if (pc.dim == 0)
        throw ValidationError("point cloud dimension must be positive");
    for (const Vec& p : pc.points)
        if (p.size() != pc.dim)
            throw ValidationError("point cloud holds a vector of mismatched dimension");
}

RMat euclidean_distances(const PointCloud& pc) {
    validate_cloud(pc);
    const std::size_t n = pc.size();
    RMat d(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double dist = norm2(subtract(pc.points[i], pc.points[j]));
            d(i, j) = dist;
            d(j, i) = dist;
        }
    return d;
}

CompressionRun compress(const PointCloud& sigma0, std::size_t m,
                        CompressionMode mode, EnsembleKind kind,
                        std::uint64_t seed) {
    validate_cloud(sigma0);
    if (sigma0.points.empty())
        throw ValidationError("compress needs at least one point");
    const std::size_t n_dim = sigma0.dim;
    if (m == 0 || m > n_dim)
        throw ValidationError("target dimension must satisfy 1 <= m <= N");
    if (kind != EnsembleKind::gaussian && kind != EnsembleKind::bernoulli)
        throw ValidationError("compress draws from the gaussian or bernoulli ensembles");

    CompressionRun run;
    run.mode = mode;
    run.ensemble = kind;
    run.seed = seed;
    run.original = sigma0;

    const std::size_t count = mode == CompressionMode::shared ? 1 : sigma0.size();
    const double id_tol = 1e-10 * std::sqrt(static_cast<double>(m));
    for (std::size_t k = 0; k < count; ++k) {
        bool accepted = false;
        for (std::uint64_t attempt = 0; attempt < 4 && !accepted; ++attempt) {
            EnsembleSpec spec;
            spec.kind = kind;
            spec.m = m;
            spec.n = n_dim;
            spec.seed = derive_seed(seed, "compress", k * 4 + attempt);
            DenseMatrix a = build(spec);
            try {
                DenseMatrix df = pseudoinverse(a);
                if (frobenius_distance(matmul(a.real(), df.real()),
                                       RMat::identity(m)) > id_tol)
                    continue;
                RMat g = gram(df.real());
                const Vec evals = sym_eigenvalues(g);
                if (evals.empty() || !(evals.front() > 0.0)) continue;
                run.matrices.push_back(std::move(a));
                run.pullbacks.push_back(std::move(df));
                run.metrics.emplace_back(std::move(g));
                accepted = true;
            } catch (const SingularityError&) {
                // rank-deficient draw; the next attempt reseeds
            }
        }
        if (!accepted)
            throw NumericalError("compression draw stayed rank-deficient after 4 attempts");
    }

    run.projected.dim = m;
    run.projected.points.reserve(sigma0.size());
    for (std::size_t i = 0; i < sigma0.size(); ++i) {
        const std::size_t k = mode == CompressionMode::shared ? 0 : i;
        run.projected.points.push_back(matvec(run.matrices[k].real(), sigma0.points[i]));
    }
    return run;
}

Vec sphere_exp(const Vec& p, const Vec& v, double r) {
    if (!(r > 0.0)) throw ValidationError("sphere radius must be positive");
    if (p.empty() || p.size() != v.size())
        throw ValidationError("base point and tangent vector dimensions differ");
    if (std::abs(norm2(p) - r) > 1e-9 * r)
        throw ValidationError("base point is not on the sphere");
    const double vn = norm2(v);
    if (std::abs(dot(p, v)) > 1e-9 * r * vn)
        throw ValidationError("tangent vector is not orthogonal to the base point");
    if (vn == 0.0) return p;
    const double theta = vn / r;
    const double c = std::cos(theta);
    const double s = r * std::sin(theta) / vn;
    Vec out(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) out[i] = c * p[i] + s * v[i];
    return out;
}

bool within_injectivity_radius(const Vec& v, double r) {
    return norm2(v) < kPi * r;
}

RMat geodesic_distances(const PointCloud& pts, double r) {
    validate_cloud(pts);
    if (!(r > 0.0)) throw ValidationError("sphere radius must be positive");
    for (const Vec& p : pts.points)
        if (std::abs(norm2(p) - r) > 1e-6 * r)
            throw ValidationError("point is off the sphere");
    const std::size_t n = pts.size();
    RMat d(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            // half-angle form of r arccos(<p,q>/r^2); unlike the arccos it
            // stays accurate for nearly coincident and antipodal pairs
            const Vec& p = pts.points[i];
            const Vec& q = pts.points[j];
            Vec sum(p.size());
            for (std::size_t l = 0; l < p.size(); ++l) sum[l] = p[l] + q[l];
            const double dist = 2.0 * r * std::atan2(norm2(subtract(p, q)), norm2(sum));
            d(i, j) = dist;
            d(j, i) = dist;
        }
    return d;
}

double distortion(const RMat& d_ref, const RMat& d_test) {
    if (d_ref.rows() != d_ref.cols() || d_test.rows() != d_ref.rows() ||
        d_test.cols() != d_ref.cols())
        throw ValidationError("distance matrices must be square with one shared shape");
    const std::size_t n = d_ref.rows();
    if (n < 2) throw ValidationError("distortion needs at least two points");
    const double diag_tol = 1e-12 * std::max(1.0, max_abs(d_ref) + max_abs(d_test));
    for (std::size_t i = 0; i < n; ++i)
        if (std::abs(d_ref(i, i)) > diag_tol || std::abs(d_test(i, i)) > diag_tol)
            throw ValidationError("distance matrix diagonal must be zero");
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double ref = d_ref(i, j);
            if (!(ref > 0.0))
                throw ValidationError("reference distance matrix has a zero off-diagonal entry");
            const double ref2 = ref * ref;
            const double test2 = d_test(i, j) * d_test(i, j);
            worst = std::max(worst, std::abs(test2 - ref2) / ref2);
        }
    return worst;
}

SphereExtension extend_to_sphere(const CompressionRun& run, double r) {
    if (!(r > 0.0)) throw ValidationError("sphere radius must be positive");
    validate_cloud(run.original);
    validate_cloud(run.projected);
    const std::size_t n = run.projected.size();
    if (n < 2) throw ValidationError("sphere extension needs at least two points");
    if (run.original.size() != n)
        throw ValidationError("original and projected point counts differ");
    const std::size_t m = run.projected.dim;

    Vec mean(m, 0.0);
    for (const Vec& v : run.projected.points)
        for (std::size_t j = 0; j < m; ++j) mean[j] += v[j];
    for (double& c : mean) c /= static_cast<double>(n);

    Vec pole(m + 1, 0.0);
    pole[m] = r;

    SphereExtension ext;
    ext.radius = r;
    ext.base_point = pole;
    ext.lifted.dim = m + 1;
    ext.lifted.points.reserve(n);
    for (const Vec& v : run.projected.points) {
        Vec tangent(m + 1, 0.0);
        for (std::size_t j = 0; j < m; ++j) tangent[j] = v[j] - mean[j];
        if (!within_injectivity_radius(tangent, r))
            throw ValidationError("radius too small: a centered point reaches the antipode");
        ext.lifted.points.push_back(sphere_exp(pole, tangent, r));
    }
    ext.geodesic = geodesic_distances(ext.lifted, r);
    const RMat d_orig = euclidean_distances(run.original);
    ext.delta_sphere = distortion(d_orig, ext.geodesic);
    ext.delta_linear = distortion(d_orig, euclidean_distances(run.projected));
    return ext;
}

RadiusFit fit_radius(const CompressionRun& run, const Vec& grid) {
    if (grid.empty()) throw ValidationError("radius grid is empty");
    const double diam = projected_diameter(run);
    Vec sorted = grid;
    std::sort(sorted.begin(), sorted.end());
    RadiusFit best;
    bool any = false;
    for (double r : sorted) {
        // centered norms never exceed the diameter, so r > diam/pi keeps
        // every lift inside the injectivity radius
        if (!(r > diam / kPi)) continue;
        SphereExtension ext = extend_to_sphere(run, r);
        if (!any || ext.delta_sphere < best.extension.delta_sphere) {
            best.radius = r;
            best.extension = std::move(ext);
            any = true;
        }
    }
    if (!any)
        throw ValidationError("no grid radius exceeds diameter/pi");
    return best;
}

RadiusFit fit_radius(const CompressionRun& run) {
    return fit_radius(run, default_radius_grid(run));
}

Vec default_radius_grid(const CompressionRun& run) {
    const double diam = projected_diameter(run);
    if (!(diam > 0.0))
        throw ValidationError("projected cloud has zero diameter");
    Vec grid(16);
    for (std::size_t i = 0; i < grid.size(); ++i)
        grid[i] = diam * std::pow(1000.0, static_cast<double>(i) / 15.0);
    return grid;
}

double mp_density(double x, double lambda) {
    check_lambda(lambda);
    if (!std::isfinite(x)) throw ValidationError("density argument must be finite");
    const MpSupport sup = mp_support(lambda);
    if (!(x > sup.lo) || !(x < sup.hi)) return 0.0;
    return std::sqrt((sup.hi - x) * (x - sup.lo)) / (2.0 * kPi * lambda * x);
}

double mp_cdf(double x, double lambda) {
    check_lambda(lambda);
    if (!std::isfinite(x)) throw ValidationError("CDF argument must be finite");
    const MpSupport sup = mp_support(lambda);
    if (x <= sup.lo) return 0.0;
    const double w = sup.hi - sup.lo;
    const double frac = std::min((x - sup.lo) / w, 1.0);
    const double theta_x = std::asin(std::min(1.0, std::sqrt(frac)));
    auto f = [&](double t) { return mp_theta_integrand(t, sup.lo, w, lambda); };
    return integrate(f, 0.0, theta_x, 1e-10);
}

double mp_ks_statistic(Vec sample, double lambda) {
    check_lambda(lambda);
    if (sample.empty()) throw ValidationError("KS statistic needs a nonempty sample");
    for (double v : sample)
        if (!std::isfinite(v)) throw ValidationError("sample entries must be finite");
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double cdf = mp_cdf(sample[i], lambda);
        const double hi = (static_cast<double>(i) + 1.0) / n - cdf;
        const double lo = cdf - static_cast<double>(i) / n;
        worst = std::max(worst, std::max(hi, lo));
    }
    return worst;
}

SpectralComparison spectral_compare(const CompressionRun& run) {
    if (run.matrices.empty())
        throw ValidationError("compression run has no matrices");
    const std::size_t m = run.matrices.front().rows();
    const std::size_t n_dim = run.matrices.front().cols();
    for (const DenseMatrix& a : run.matrices)
        if (!a.is_real() || a.rows() != m || a.cols() != n_dim)
            throw ValidationError("compression matrices must be real with one shared shape");
    if (m > n_dim)
        throw ValidationError("compression matrices must be wide");

    SpectralComparison cmp;
    cmp.ensemble_mismatch = run.ensemble != EnsembleKind::gaussian;
    cmp.lambda = static_cast<double>(m) / static_cast<double>(n_dim);
    const MpSupport sup = mp_support(cmp.lambda);
    cmp.support_lo = sup.lo;
    cmp.support_hi = sup.hi;

    cmp.eigenvalues.reserve(m * run.matrices.size());
    for (const DenseMatrix& a : run.matrices) {
        // entries have variance 1/m, so (m/N) A A^T matches the MP
        // normalization of a variance-1/N sample covariance
        RMat b = outer_gram(a.real());
        for (double& v : b.data()) v *= cmp.lambda;
        const Vec evals = sym_eigenvalues(b);
        cmp.eigenvalues.insert(cmp.eigenvalues.end(), evals.begin(), evals.end());
    }
    std::sort(cmp.eigenvalues.begin(), cmp.eigenvalues.end());
    cmp.ks_statistic = mp_ks_statistic(cmp.eigenvalues, cmp.lambda);
    return cmp;
}

} // namespace ripkit
