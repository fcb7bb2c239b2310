#include "ripkit/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "ripkit/diagnostics.hpp"
#include "ripkit/error.hpp"
#include "ripkit/matrix.hpp"
#include "ripkit/recovery.hpp"
#include "ripkit/rng.hpp"

namespace ripkit {
namespace {

constexpr std::uint64_t kMaxTrials = 1000000;
constexpr std::uint64_t kMaxDraws = 10000;

[[noreturn]] void bad_config(const std::string& what) {
    throw ValidationError("config: " + what);
}

[[noreturn]] void malformed(const std::string& what) {
    throw ValidationError("malformed report: " + what);
}

const Json& report_field(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) {
        malformed(std::string("missing field '") + key + "'");
    }
    return j.at(key);
}

bool known_command(const std::string& c) {
    return c == "gen-matrix" || c == "diagnose" || c == "recover" ||
           c == "manifold" || c == "mp-check";
}

void reject_unknown_keys(const Json& obj,
                         std::initializer_list<const char*> allowed,
                         const char* where) {
    for (const auto& item : obj.items()) {
        bool known = false;
        for (const char* k : allowed) {
            if (item.key() == k) {
                known = true;
                break;
            }
        }
        if (!known) {
            bad_config("unknown field '" + item.key() + "' in " + where);
        }
    }
}

std::uint64_t config_uint(const Json& j, const char* name) {
    if (j.is_number_unsigned()) {
        return j.get<std::uint64_t>();
    }
    if (j.is_number_integer() && j.get<std::int64_t>() >= 0) {
        return static_cast<std::uint64_t>(j.get<std::int64_t>());
    }
    bad_config(std::string("field '") + name +
               "' must be a nonnegative integer");
}

std::size_t config_size(const Json& j, const char* name) {
    return static_cast<std::size_t>(config_uint(j, name));
}

double config_real(const Json& j, const char* name) {
    if (!j.is_number()) {
        bad_config(std::string("field '") + name + "' must be a number");
    }
    return j.get<double>();
}

bool config_bool(const Json& j, const char* name) {
    if (!j.is_boolean()) {
        bad_config(std::string("field '") + name + "' must be a boolean");
    }
    return j.get<bool>();
}

std::string config_str(const Json& j, const char* name) {
    if (!j.is_string()) {
        bad_config(std::string("field '") + name + "' must be a string");
    }
    return j.get<std::string>();
}

std::uint64_t resolved_ensemble_seed(const ExperimentConfig& c) {
    return c.ensemble_seed_explicit ? c.ensemble.seed
                                    : derive_seed(c.seed, "ensemble", 0);
}

EnsembleSpec resolved_spec(const ExperimentConfig& c) {
    EnsembleSpec spec = c.ensemble;
    spec.seed = resolved_ensemble_seed(c);
    if (spec.m < 1) bad_config("field 'ensemble.m' must be >= 1");
    if (spec.n < 1) bad_config("field 'ensemble.n' must be >= 1");
    return spec;
}

void check_sparsity(const ExperimentConfig& c, std::size_t n) {
    if (c.s < 1 || c.s > n) {
        bad_config("field 's' must lie in [1, ensemble.n]");
    }
}

PointCloud cloud_from_rows(const RMat& rows) {
    PointCloud pc;
    pc.dim = rows.cols();
    pc.points.reserve(rows.rows());
    for (std::size_t r = 0; r < rows.rows(); ++r) {
        pc.points.push_back(rows.row(r));
    }
    return pc;
}

void validate_diagnose(const ExperimentConfig& c) {
    check_sparsity(c, resolved_spec(c).n);
    if (c.rip_trials < 1 || c.rip_trials > kMaxTrials) {
        bad_config("field 'rip_trials' must lie in [1, 1000000]");
    }
}

void validate_recover(const ExperimentConfig& c) {
    check_sparsity(c, resolved_spec(c).n);
    if (c.trials < 1 || c.trials > kMaxTrials) {
        bad_config("field 'trials' must lie in [1, 1000000]");
    }
    if (!(std::isfinite(c.eta) && c.eta >= 0.0)) {
        bad_config("field 'eta' must be finite and >= 0");
    }
}

void validate_manifold(const ExperimentConfig& c) {
    if (c.ensemble.kind != EnsembleKind::gaussian &&
        c.ensemble.kind != EnsembleKind::bernoulli) {
        bad_config("field 'ensemble.kind' must be gaussian or bernoulli "
                   "for manifold runs");
    }
    const DatasetSpec& d = c.manifold.dataset;
    if (d.count < 2) bad_config("field 'manifold.dataset.count' must be >= 2");
    if (d.dim < 1) bad_config("field 'manifold.dataset.dim' must be >= 1");
    if (d.depth > 20) {
        bad_config("field 'manifold.dataset.depth' must be <= 20");
    }
    if (!(d.decay > 0.0 && d.decay < 1.0)) {
        bad_config("field 'manifold.dataset.decay' must lie in (0, 1)");
    }
    if (c.manifold.m < 1 || c.manifold.m > d.dim) {
        bad_config("field 'manifold.m' must lie in [1, dataset.dim]");
    }
    if (c.manifold.radius_grid && c.manifold.radius_grid->empty()) {
        bad_config("field 'manifold.radius_grid' must not be empty");
    }
}

void validate_mp_check(const ExperimentConfig& c) {
    if (c.ensemble.kind == EnsembleKind::alltop_gabor) {
        bad_config("field 'ensemble.kind': mp-check needs a real ensemble");
    }
    const EnsembleSpec spec = resolved_spec(c);
    if (spec.m > spec.n) {
        bad_config("field 'ensemble.m' must be <= ensemble.n for mp-check");
    }
    if (c.trials < 1 || c.trials > kMaxDraws) {
        bad_config("field 'trials' must lie in [1, 10000] for mp-check");
    }
}

// Every check the runner itself owns, with nothing computed and nothing
// touched on disk. Ensemble-internal constraints (an ETF's forced shape, a
// prime Gabor dimension) stay with build(), which also throws before any
// output file exists.
void validate_config(const ExperimentConfig& c) {
    if (c.command.empty() || !known_command(c.command)) {
        bad_config("unknown command '" + c.command + "'");
    }
    if (c.command == "gen-matrix") {
        resolved_spec(c);
    } else if (c.command == "diagnose") {
        validate_diagnose(c);
    } else if (c.command == "recover") {
        validate_recover(c);
    } else if (c.command == "manifold") {
        validate_manifold(c);
    } else {
        validate_mp_check(c);
    }
}

Json gen_matrix_payload(const ExperimentConfig& c) {
    const DenseMatrix a = build(resolved_spec(c));
    Json p = Json::object();
    p["matrix"] = matrix_to_json(a);
    return p;
}

Json diagnose_payload(const ExperimentConfig& c) {
    validate_diagnose(c);
    const DenseMatrix a = build(resolved_spec(c));
    const DiagnosticsReport report =
        guarantee_report(a, c.s, c.rip_trials, derive_seed(c.seed, "rip", 0));
    Json p = Json::object();
    p["matrix"] = matrix_to_json(a);
    p["report"] = diagnostics_to_json(report);
    return p;
}

Json recover_payload(const ExperimentConfig& c) {
    validate_recover(c);
    const DenseMatrix a = build(resolved_spec(c));
    const BatchSummary summary = batch_recovery_experiment(
        a, c.s, c.trials, c.eta, derive_seed(c.seed, "recover", 0));
    Json p = Json::object();
    p["matrix"] = matrix_to_json(a);
    p["summary"] = batch_summary_to_json(summary);
    return p;
}

Json manifold_payload(const ExperimentConfig& c) {
    validate_manifold(c);
    const DatasetSpec& d = c.manifold.dataset;
    const RMat rows = hierarchical_dataset(d.count, d.dim, d.depth, d.decay,
                                           derive_seed(c.seed, "dataset", 0));
    const PointCloud cloud = cloud_from_rows(rows);
    const CompressionRun run = compress(cloud, c.manifold.m, c.manifold.mode,
                                        c.ensemble.kind,
                                        resolved_ensemble_seed(c));
    const Vec grid = c.manifold.radius_grid ? *c.manifold.radius_grid
                                            : default_radius_grid(run);
    const RadiusFit fit = fit_radius(run, grid);

    Json p = Json::object();
    p["run"] = compression_run_to_json(run);
    Json grid_json = Json::array();
    for (double r : grid) grid_json.push_back(real_to_json(r));
    p["radius_grid"] = std::move(grid_json);
    Json fit_json = Json::object();
    fit_json["radius"] = real_to_json(fit.radius);
    fit_json["extension"] = sphere_extension_to_json(fit.extension);
    p["fit"] = std::move(fit_json);
    return p;
}

Json mp_check_payload(const ExperimentConfig& c) {
    validate_mp_check(c);
    const EnsembleSpec spec = resolved_spec(c);
    CompressionRun run;
    run.mode = CompressionMode::shared;
    run.ensemble = spec.kind;
    run.seed = spec.seed;
    run.matrices.reserve(c.trials);
    for (std::size_t i = 0; i < c.trials; ++i) {
        EnsembleSpec draw = spec;
        draw.seed =
            c.trials == 1 ? spec.seed : derive_seed(spec.seed, "draw", i);
        run.matrices.push_back(build(draw));
    }
    const SpectralComparison cmp = spectral_compare(run);
    Json p = Json::object();
    p["comparison"] = spectral_comparison_to_json(cmp);
    return p;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw ValidationError("cannot open '" + path.string() +
                              "' for writing");
    }
    f << text;
    f.flush();
    if (!f) {
        throw ValidationError("write to '" + path.string() + "' failed");
    }
}

bool finite_close(double stored, double recomputed, double rel) {
    if (!std::isfinite(stored) || !std::isfinite(recomputed)) {
        return stored == recomputed;  // matching infinities agree
    }
    return std::abs(stored - recomputed) <=
           rel * std::max(1.0, std::abs(stored));
}

void verify_diagnose(const Json& payload, VerifyResult& out) {
    const DenseMatrix a = matrix_from_json(report_field(payload, "matrix"));
    const DiagnosticsReport report =
        diagnostics_from_json(report_field(payload, "report"));
    for (const NspReport& n : report.nsp) {
        if (!n.witness) continue;
        double recomputed = 0.0;
        try {
            recomputed = nsp_witness_ratio(a, n);
        } catch (const ValidationError& e) {
            out.ok = false;
            out.violations.push_back(
                std::string("null space witness re-check failed: ") +
                e.what());
            continue;
        }
        if (!finite_close(n.worst_ratio, recomputed, 0.0) &&
            std::abs(n.worst_ratio - recomputed) > 1e-9) {
            out.ok = false;
            out.violations.push_back(
                "null space witness at order " + std::to_string(n.s) +
                " no longer attains the stored ratio: stored " +
                fmt_double(n.worst_ratio) + ", recomputed " +
                fmt_double(recomputed));
        }
    }
}

void verify_recover(const Json& payload, VerifyResult& out) {
    const BatchSummary s =
        batch_summary_from_json(report_field(payload, "summary"));
    auto violate = [&](const std::string& msg) {
        out.ok = false;
        out.violations.push_back(msg);
    };
    if (s.records.size() != s.trials) {
        violate("summary trial count does not match the record list");
        return;
    }
    if (s.records.empty()) {
        violate("summary contains no trial records");
        return;
    }
    std::size_t successes = 0;
    double max_l1 = 0.0;
    double max_l2 = 0.0;
    for (const TrialRecord& r : s.records) {
        if (r.success) ++successes;
        max_l1 = std::max(max_l1, r.err_l1);
        max_l2 = std::max(max_l2, r.err_l2);
    }
    const double rate =
        static_cast<double>(successes) / static_cast<double>(s.trials);
    if (rate != s.success_rate) {
        violate("success rate disagrees with the trial records: stored " +
                fmt_double(s.success_rate) + ", recomputed " +
                fmt_double(rate));
    }
    if (max_l1 != s.max_err_l1) {
        violate("max l1 error disagrees with the trial records");
    }
    if (max_l2 != s.max_err_l2) {
        violate("max l2 error disagrees with the trial records");
    }
}

void verify_manifold(const Json& payload, VerifyResult& out) {
    auto violate = [&](const std::string& msg) {
        out.ok = false;
        out.violations.push_back(msg);
    };
    const CompressionRun run =
        compression_run_from_json(report_field(payload, "run"));
    const Json& fit = report_field(payload, "fit");
    const double radius =
        real_from_json(report_field(fit, "radius"), "fit.radius");
    const SphereExtension ext =
        sphere_extension_from_json(report_field(fit, "extension"));

    if (run.pullbacks.size() != run.matrices.size()) {
        violate("pullback count differs from the matrix count");
        return;
    }
    for (std::size_t k = 0; k < run.matrices.size(); ++k) {
        const RMat& a = run.matrices[k].real();
        const RMat& df = run.pullbacks[k].real();
        const std::size_t m = a.rows();
        if (df.rows() != a.cols() || df.cols() != m) {
            violate("pullback " + std::to_string(k) + " has the wrong shape");
            continue;
        }
        const double resid =
            frobenius_distance(matmul(a, df), RMat::identity(m));
        if (!(resid <= 1e-10 * std::sqrt(static_cast<double>(m)))) {
            violate("pullback " + std::to_string(k) +
                    " is no longer a right inverse: residual " +
                    fmt_double(resid));
        }
    }

    if (ext.radius != radius) {
        violate("fit radius disagrees with the stored extension");
    }
    const RMat& g = ext.geodesic;
    const std::size_t n = g.rows();
    bool geodesic_clean = true;
    if (g.cols() != n || n != ext.lifted.points.size()) {
        violate("geodesic matrix shape does not match the lifted cloud");
        geodesic_clean = false;
    }
    if (geodesic_clean) {
        const double upper = std::numbers::pi * radius * (1.0 + 1e-12);
        for (std::size_t i = 0; i < n && geodesic_clean; ++i) {
            if (g(i, i) != 0.0) {
                violate("geodesic diagonal entry " + std::to_string(i) +
                        " is nonzero");
                geodesic_clean = false;
                break;
            }
            for (std::size_t j = i + 1; j < n; ++j) {
                if (g(i, j) != g(j, i)) {
                    violate("geodesic matrix is not symmetric at (" +
                            std::to_string(i) + ", " + std::to_string(j) +
                            ")");
                    geodesic_clean = false;
                    break;
                }
                if (!(g(i, j) >= 0.0 && g(i, j) <= upper)) {
                    violate("geodesic entry (" + std::to_string(i) + ", " +
                            std::to_string(j) +
                            ") lies outside [0, pi * radius]");
                    geodesic_clean = false;
                    break;
                }
            }
        }
    }

    if (ext.lifted.dim != run.projected.dim + 1) {
        violate("lifted cloud dimension is not projected dimension + 1");
    }
    for (std::size_t i = 0; i < ext.lifted.points.size(); ++i) {
        const double nrm = norm2(ext.lifted.points[i]);
        if (!(std::abs(nrm - radius) <= 1e-9 * radius)) {
            violate("lifted point " + std::to_string(i) +
                    " is off the sphere: norm " + fmt_double(nrm));
            break;
        }
    }

    if (geodesic_clean) {
        // The stored matrix must be reproducible from the lifted points;
        // a max-based distortion alone would miss edits to non-extremal
        // entries.
        try {
            const RMat recomputed = geodesic_distances(ext.lifted, radius);
            const double tol = 1e-9 * std::max(1.0, radius);
            for (std::size_t i = 0; i < n && geodesic_clean; ++i) {
                for (std::size_t j = i + 1; j < n; ++j) {
                    if (!(std::abs(recomputed(i, j) - g(i, j)) <= tol)) {
                        violate("geodesic entry (" + std::to_string(i) +
                                ", " + std::to_string(j) +
                                ") does not match the lifted points: "
                                "stored " +
                                fmt_double(g(i, j)) + ", recomputed " +
                                fmt_double(recomputed(i, j)));
                        geodesic_clean = false;
                        break;
                    }
                }
            }
        } catch (const ValidationError& e) {
            violate(std::string("geodesic re-check failed: ") + e.what());
            geodesic_clean = false;
        }
    }

    if (geodesic_clean) {
        try {
            const RMat d_ref = euclidean_distances(run.original);
            const double rec_sphere = distortion(d_ref, ext.geodesic);
            const double rec_linear =
                distortion(d_ref, euclidean_distances(run.projected));
            if (!finite_close(ext.delta_sphere, rec_sphere, 1e-12)) {
                violate("stored delta_sphere disagrees with the distance "
                        "matrices: stored " +
                        fmt_double(ext.delta_sphere) + ", recomputed " +
                        fmt_double(rec_sphere));
            }
            if (!finite_close(ext.delta_linear, rec_linear, 1e-12)) {
                violate("stored delta_linear disagrees with the distance "
                        "matrices: stored " +
                        fmt_double(ext.delta_linear) + ", recomputed " +
                        fmt_double(rec_linear));
            }
        } catch (const ValidationError& e) {
            violate(std::string("distortion re-check failed: ") + e.what());
        }
    }
}

void verify_mp_check(const Json& payload, VerifyResult& out) {
    auto violate = [&](const std::string& msg) {
        out.ok = false;
        out.violations.push_back(msg);
    };
    const SpectralComparison cmp =
        spectral_comparison_from_json(report_field(payload, "comparison"));
    const double root = std::sqrt(cmp.lambda);
    if (!finite_close(cmp.support_lo, (1.0 - root) * (1.0 - root), 1e-12) ||
        !finite_close(cmp.support_hi, (1.0 + root) * (1.0 + root), 1e-12)) {
        violate("stored support edges disagree with lambda");
    }
    try {
        const double ks = mp_ks_statistic(cmp.eigenvalues, cmp.lambda);
        if (!finite_close(cmp.ks_statistic, ks, 1e-12)) {
            violate("stored KS statistic disagrees with the eigenvalue "
                    "sample: stored " +
                    fmt_double(cmp.ks_statistic) + ", recomputed " +
                    fmt_double(ks));
        }
    } catch (const ValidationError& e) {
        violate(std::string("KS re-check failed: ") + e.what());
    }
}

}  // namespace

ExperimentConfig config_from_json(const Json& j) {
    if (!j.is_object()) bad_config("document must be a JSON object");
    reject_unknown_keys(j,
                        {"command", "seed", "out", "ensemble", "s",
                         "rip_trials", "trials", "eta", "manifold"},
                        "config");
    ExperimentConfig c;
    if (j.contains("command")) {
        c.command = config_str(j.at("command"), "command");
        if (!known_command(c.command)) {
            bad_config("unknown command '" + c.command + "'");
        }
    }
    if (j.contains("seed")) c.seed = config_uint(j.at("seed"), "seed");
    if (j.contains("out")) {
        c.out_dir = config_str(j.at("out"), "out");
        if (c.out_dir.empty()) bad_config("field 'out' must not be empty");
    }
    if (j.contains("ensemble")) {
        const Json& e = j.at("ensemble");
        if (!e.is_object()) bad_config("field 'ensemble' must be an object");
        reject_unknown_keys(e, {"kind", "m", "n", "normalize_columns", "seed"},
                            "ensemble");
        if (e.contains("kind")) {
            c.ensemble.kind =
                ensemble_kind_from_name(config_str(e.at("kind"), "ensemble.kind"));
        }
        if (e.contains("m")) c.ensemble.m = config_size(e.at("m"), "ensemble.m");
        if (e.contains("n")) c.ensemble.n = config_size(e.at("n"), "ensemble.n");
        if (e.contains("normalize_columns")) {
            c.ensemble.normalize_columns =
                config_bool(e.at("normalize_columns"), "ensemble.normalize_columns");
        }
        if (e.contains("seed")) {
            c.ensemble.seed = config_uint(e.at("seed"), "ensemble.seed");
            c.ensemble_seed_explicit = true;
        }
    }
    if (j.contains("s")) c.s = config_size(j.at("s"), "s");
    if (j.contains("rip_trials")) {
        c.rip_trials = config_uint(j.at("rip_trials"), "rip_trials");
    }
    if (j.contains("trials")) c.trials = config_size(j.at("trials"), "trials");
    if (j.contains("eta")) {
        c.eta = config_real(j.at("eta"), "eta");
        if (!(std::isfinite(c.eta) && c.eta >= 0.0)) {
            bad_config("field 'eta' must be finite and >= 0");
        }
    }
    if (j.contains("manifold")) {
        const Json& m = j.at("manifold");
        if (!m.is_object()) bad_config("field 'manifold' must be an object");
        reject_unknown_keys(m, {"m", "mode", "radius_grid", "dataset"},
                            "manifold");
        if (m.contains("m")) {
            c.manifold.m = config_size(m.at("m"), "manifold.m");
        }
        if (m.contains("mode")) {
            c.manifold.mode = compression_mode_from_name(
                config_str(m.at("mode"), "manifold.mode"));
        }
        if (m.contains("radius_grid")) {
            const Json& grid = m.at("radius_grid");
            if (!grid.is_array()) {
                bad_config("field 'manifold.radius_grid' must be an array");
            }
            Vec values;
            values.reserve(grid.size());
            for (const Json& entry : grid) {
                const double r = config_real(entry, "manifold.radius_grid");
                if (!(std::isfinite(r) && r > 0.0)) {
                    bad_config("field 'manifold.radius_grid' entries must be "
                               "positive and finite");
                }
                values.push_back(r);
            }
            c.manifold.radius_grid = std::move(values);
        }
        if (m.contains("dataset")) {
            const Json& d = m.at("dataset");
            if (!d.is_object()) {
                bad_config("field 'manifold.dataset' must be an object");
            }
            reject_unknown_keys(d, {"count", "dim", "depth", "decay"},
                                "dataset");
            if (d.contains("count")) {
                c.manifold.dataset.count =
                    config_size(d.at("count"), "manifold.dataset.count");
            }
            if (d.contains("dim")) {
                c.manifold.dataset.dim =
                    config_size(d.at("dim"), "manifold.dataset.dim");
            }
            if (d.contains("depth")) {
                c.manifold.dataset.depth =
                    config_size(d.at("depth"), "manifold.dataset.depth");
            }
            if (d.contains("decay")) {
                c.manifold.dataset.decay =
                    config_real(d.at("decay"), "manifold.dataset.decay");
            }
        }
    }
    return c;
}

Json config_to_json(const ExperimentConfig& c) {
    Json j = Json::object();
    j["command"] = c.command;
    j["seed"] = c.seed;
    j["out"] = c.out_dir;
    Json e = Json::object();
    e["kind"] = ensemble_kind_name(c.ensemble.kind);
    if (c.command != "manifold") {
        e["m"] = c.ensemble.m;
        e["n"] = c.ensemble.n;
        e["normalize_columns"] = c.ensemble.normalize_columns;
    }
    e["seed"] = resolved_ensemble_seed(c);
    j["ensemble"] = std::move(e);
    if (c.command == "diagnose") {
        j["s"] = c.s;
        j["rip_trials"] = c.rip_trials;
    } else if (c.command == "recover") {
        j["s"] = c.s;
        j["trials"] = c.trials;
        j["eta"] = real_to_json(c.eta);
    } else if (c.command == "mp-check") {
        j["trials"] = c.trials;
    } else if (c.command == "manifold") {
        Json m = Json::object();
        m["m"] = c.manifold.m;
        m["mode"] = compression_mode_name(c.manifold.mode);
        if (c.manifold.radius_grid) {
            Json grid = Json::array();
            for (double r : *c.manifold.radius_grid) {
                grid.push_back(real_to_json(r));
            }
            m["radius_grid"] = std::move(grid);
        }
        Json d = Json::object();
        d["count"] = c.manifold.dataset.count;
        d["dim"] = c.manifold.dataset.dim;
        d["depth"] = c.manifold.dataset.depth;
        d["decay"] = real_to_json(c.manifold.dataset.decay);
        m["dataset"] = std::move(d);
        j["manifold"] = std::move(m);
    }
    return j;
}

Json run_payload(const ExperimentConfig& c) {
    if (c.command.empty()) bad_config("no command given");
    if (c.command == "gen-matrix") return gen_matrix_payload(c);
    if (c.command == "diagnose") return diagnose_payload(c);
    if (c.command == "recover") return recover_payload(c);
    if (c.command == "manifold") return manifold_payload(c);
    if (c.command == "mp-check") return mp_check_payload(c);
    bad_config("unknown command '" + c.command + "'");
}

RunArtifacts run_experiment(const ExperimentConfig& c) {
    namespace fs = std::filesystem;
    validate_config(c);

    // Output paths are probed after field validation and before any
    // computation: a rejected config touches nothing, and an unusable output
    // directory fails fast without wasted work.
    std::error_code ec;
    fs::create_directories(c.out_dir, ec);
    if (ec) {
        bad_config("output directory '" + c.out_dir +
                   "' cannot be created: " + ec.message());
    }
    const fs::path out(c.out_dir);
    {
        const fs::path probe = out / ".ripkit-write-probe";
        std::ofstream f(probe);
        if (!f) {
            bad_config("output directory '" + c.out_dir +
                       "' is not writable");
        }
        f.close();
        fs::remove(probe, ec);
    }

    const auto t0 = std::chrono::steady_clock::now();
    Json payload = run_payload(c);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();

    RunArtifacts art;
    art.envelope = Json::object();
    art.envelope["tool"] = kToolName;
    art.envelope["version"] = kToolVersion;
    art.envelope["command"] = c.command;
    art.envelope["config"] = config_to_json(c);
    art.envelope["wall_time_s"] = wall;
    art.envelope["payload"] = std::move(payload);

    const fs::path report = out / ("report-" + c.command + ".json");
    write_text(report, art.envelope.dump(2) + "\n");
    art.files.push_back(report.string());

    const Json& body = art.envelope["payload"];
    if (c.command == "recover") {
        const BatchSummary s =
            batch_summary_from_json(body.at("summary"));
        const fs::path csv = out / "recover-records.csv";
        write_text(csv, trial_records_csv(s.records));
        art.files.push_back(csv.string());
    } else if (c.command == "manifold") {
        const SphereExtension e =
            sphere_extension_from_json(body.at("fit").at("extension"));
        const fs::path csv = out / "manifold-geodesic.csv";
        write_text(csv, rmat_csv(e.geodesic));
        art.files.push_back(csv.string());
    } else if (c.command == "mp-check") {
        const SpectralComparison cmp =
            spectral_comparison_from_json(body.at("comparison"));
        const fs::path csv = out / "mp-eigenvalues.csv";
        write_text(csv, values_csv(cmp.eigenvalues, "eigenvalue"));
        art.files.push_back(csv.string());
    }
    return art;
}

VerifyResult verify_report(const Json& envelope) {
    if (!envelope.is_object()) {
        malformed("document must be a JSON object");
    }
    const Json& tool = report_field(envelope, "tool");
    if (!tool.is_string() || tool.get<std::string>() != kToolName) {
        malformed("field 'tool' must be \"ripkit\"");
    }
    report_field(envelope, "version");
    const Json& cmd = report_field(envelope, "command");
    if (!cmd.is_string() || !known_command(cmd.get<std::string>())) {
        malformed("field 'command' is not a known command");
    }
    const std::string command = cmd.get<std::string>();
    config_from_json(report_field(envelope, "config"));
    const Json& payload = report_field(envelope, "payload");
    if (!payload.is_object()) malformed("field 'payload' must be an object");

    VerifyResult out;
    if (command == "gen-matrix") {
        matrix_from_json(report_field(payload, "matrix"));
    } else if (command == "diagnose") {
        verify_diagnose(payload, out);
    } else if (command == "recover") {
        verify_recover(payload, out);
    } else if (command == "manifold") {
        verify_manifold(payload, out);
    } else {
        verify_mp_check(payload, out);
    }
    return out;
}

}  // namespace ripkit
