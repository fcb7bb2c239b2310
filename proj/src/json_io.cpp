#include "ripkit/json_io.hpp"

#include <charconv>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>

#include "ripkit/error.hpp"

namespace ripkit {
namespace {

[[noreturn]] void malformed(const std::string& what) {
    throw ValidationError("malformed document: " + what);
}

const Json& field(const Json& j, const char* key) {
    if (!j.is_object()) malformed(std::string("expected object holding '") + key + "'");
    const auto it = j.find(key);
    if (it == j.end()) malformed(std::string("missing field '") + key + "'");
    return *it;
}

std::uint64_t uint_from_json(const Json& j, const char* what) {
    if (j.is_number_unsigned()) return j.get<std::uint64_t>();
    if (j.is_number_integer() && j.get<std::int64_t>() >= 0)
        return static_cast<std::uint64_t>(j.get<std::int64_t>());
    malformed(std::string("field '") + what + "' must be a nonnegative integer");
}

std::uint64_t uint_at(const Json& j, const char* key) {
    return uint_from_json(field(j, key), key);
}

double num_at(const Json& j, const char* key) {
    return real_from_json(field(j, key), key);
}

bool bool_at(const Json& j, const char* key) {
    const Json& v = field(j, key);
    if (!v.is_boolean()) malformed(std::string("field '") + key + "' must be a boolean");
    return v.get<bool>();
}

std::string str_at(const Json& j, const char* key) {
    const Json& v = field(j, key);
    if (!v.is_string()) malformed(std::string("field '") + key + "' must be a string");
    return v.get<std::string>();
}

Json vec_to_json(const Vec& v) {
    Json arr = Json::array();
    for (const double x : v) arr.push_back(real_to_json(x));
    return arr;
}

Vec vec_from_json(const Json& j, const char* what) {
    if (!j.is_array()) malformed(std::string("field '") + what + "' must be an array");
    Vec v;
    v.reserve(j.size());
    for (const Json& e : j) v.push_back(real_from_json(e, what));
    return v;
}

Json indices_to_json(const std::vector<std::size_t>& idx) {
    Json arr = Json::array();
    for (const std::size_t i : idx) arr.push_back(i);
    return arr;
}

std::vector<std::size_t> indices_from_json(const Json& j, const char* what) {
    if (!j.is_array()) malformed(std::string("field '") + what + "' must be an array");
    std::vector<std::size_t> idx;
    idx.reserve(j.size());
    for (const Json& e : j) idx.push_back(static_cast<std::size_t>(uint_from_json(e, what)));
    return idx;
}

std::string mode_name(NspMode mode) {
    switch (mode) {
        case NspMode::plain: return "plain";
        case NspMode::stable: return "stable";
        case NspMode::robust_l1: return "robust_l1";
    }
    malformed("unknown nsp mode");
}

NspMode mode_from_name(const std::string& name) {
    if (name == "plain") return NspMode::plain;
    if (name == "stable") return NspMode::stable;
    if (name == "robust_l1") return NspMode::robust_l1;
    malformed("unknown nsp mode '" + name + "'");
}

} // namespace

std::string fmt_double(double x) {
    if (std::isnan(x)) throw ValidationError("cannot format NaN");
    if (std::isinf(x)) return x > 0.0 ? "inf" : "-inf";
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

Json real_to_json(double x) {
    if (std::isnan(x)) throw ValidationError("cannot serialize NaN");
    if (std::isinf(x)) return Json(x > 0.0 ? "inf" : "-inf");
    return Json(x);
}

double real_from_json(const Json& j, const char* what) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
    }
    malformed(std::string("field '") + what + "' must be a number or \"inf\"");
}

Json matrix_to_json(const DenseMatrix& a) {
    Json j;
    j["rows"] = a.rows();
    j["cols"] = a.cols();
    j["field"] = a.is_real() ? "real" : "complex";
    Json data = Json::array();
    if (a.is_real()) {
        for (const double x : a.real().data()) data.push_back(real_to_json(x));
    } else {
        for (const Complex& z : a.cplx().data()) {
            data.push_back(real_to_json(z.real()));
            data.push_back(real_to_json(z.imag()));
        }
    }
    j["data"] = std::move(data);
    return j;
}

DenseMatrix matrix_from_json(const Json& j) {
    const std::size_t rows = static_cast<std::size_t>(uint_at(j, "rows"));
    const std::size_t cols = static_cast<std::size_t>(uint_at(j, "cols"));
    const std::string kind = str_at(j, "field");
    const Json& data = field(j, "data");
    if (!data.is_array()) malformed("field 'data' must be an array");
    if (kind == "real") {
        if (data.size() != rows * cols) malformed("matrix data length mismatch");
        RMat m(rows, cols);
        std::size_t k = 0;
        for (const Json& e : data) m.data()[k++] = real_from_json(e, "data");
        return DenseMatrix(std::move(m));
    }
    if (kind == "complex") {
        if (data.size() != 2 * rows * cols) malformed("matrix data length mismatch");
        CMat m(rows, cols);
        for (std::size_t k = 0; k < rows * cols; ++k) {
            m.data()[k] = Complex(real_from_json(data[2 * k], "data"),
                                  real_from_json(data[2 * k + 1], "data"));
        }
        return DenseMatrix(std::move(m));
    }
    malformed("field 'field' must be \"real\" or \"complex\"");
}

Json rmat_to_json(const RMat& a) {
    Json j;
    j["rows"] = a.rows();
    j["cols"] = a.cols();
    j["field"] = "real";
    Json data = Json::array();
    for (const double x : a.data()) data.push_back(real_to_json(x));
    j["data"] = std::move(data);
    return j;
}

RMat rmat_from_json(const Json& j) {
    const std::size_t rows = static_cast<std::size_t>(uint_at(j, "rows"));
    const std::size_t cols = static_cast<std::size_t>(uint_at(j, "cols"));
    if (str_at(j, "field") != "real") malformed("expected a real matrix");
    const Json& data = field(j, "data");
    if (!data.is_array() || data.size() != rows * cols)
        malformed("matrix data length mismatch");
    RMat m(rows, cols);
    std::size_t k = 0;
    for (const Json& e : data) m.data()[k++] = real_from_json(e, "data");
    return m;
}

Json sparse_to_json(const SparseVector& x) {
    Json j;
    j["dim"] = x.dim();
    j["field"] = x.is_real() ? "real" : "complex";
    j["indices"] = indices_to_json(x.indices());
    Json vals = Json::array();
    if (x.is_real()) {
        for (const double v : x.values()) vals.push_back(real_to_json(v));
    } else {
        for (const Complex& z : x.cvalues()) {
            vals.push_back(real_to_json(z.real()));
            vals.push_back(real_to_json(z.imag()));
        }
    }
    j["values"] = std::move(vals);
    return j;
}

SparseVector sparse_from_json(const Json& j) {
    const std::size_t dim = static_cast<std::size_t>(uint_at(j, "dim"));
    const std::string kind = str_at(j, "field");
    std::vector<std::size_t> idx = indices_from_json(field(j, "indices"), "indices");
    const Json& vals = field(j, "values");
    if (!vals.is_array()) malformed("field 'values' must be an array");
    if (kind == "real") {
        Vec v;
        v.reserve(vals.size());
        for (const Json& e : vals) v.push_back(real_from_json(e, "values"));
        return SparseVector(dim, std::move(idx), std::move(v));
    }
    if (kind == "complex") {
        if (vals.size() % 2 != 0) malformed("complex values length must be even");
        CVec v(vals.size() / 2);
        for (std::size_t k = 0; k < v.size(); ++k) {
            v[k] = Complex(real_from_json(vals[2 * k], "values"),
                           real_from_json(vals[2 * k + 1], "values"));
        }
        return SparseVector(dim, std::move(idx), std::move(v));
    }
    malformed("field 'field' must be \"real\" or \"complex\"");
}

Json point_cloud_to_json(const PointCloud& pc) {
    Json j;
    j["dim"] = pc.dim;
    Json pts = Json::array();
    for (const Vec& p : pc.points) pts.push_back(vec_to_json(p));
    j["points"] = std::move(pts);
    return j;
}

PointCloud point_cloud_from_json(const Json& j) {
    PointCloud pc;
    pc.dim = static_cast<std::size_t>(uint_at(j, "dim"));
    const Json& pts = field(j, "points");
    if (!pts.is_array()) malformed("field 'points' must be an array");
    pc.points.reserve(pts.size());
    for (const Json& p : pts) pc.points.push_back(vec_from_json(p, "points"));
    validate_cloud(pc);
    return pc;
}

Json frame_check_to_json(const FrameCheck& f) {
    Json j;
    j["is_equiangular"] = f.is_equiangular;
    j["c"] = real_to_json(f.c);
    j["is_tight"] = f.is_tight;
    j["lambda"] = real_to_json(f.lambda);
    return j;
}

FrameCheck frame_check_from_json(const Json& j) {
    FrameCheck f;
    f.is_equiangular = bool_at(j, "is_equiangular");
    f.c = num_at(j, "c");
    f.is_tight = bool_at(j, "is_tight");
    f.lambda = num_at(j, "lambda");
    return f;
}

Json nsp_report_to_json(const NspReport& r) {
    Json j;
    j["s"] = r.s;
    j["mode"] = mode_name(r.mode);
    j["holds"] = r.holds;
    j["worst_ratio"] = real_to_json(r.worst_ratio);
    j["rho"] = real_to_json(r.rho);
    j["tau"] = real_to_json(r.tau);
    if (r.witness) {
        Json w;
        w["v"] = vec_to_json(r.witness->v);
        w["support"] = indices_to_json(r.witness->support);
        j["witness"] = std::move(w);
    } else {
        j["witness"] = nullptr;
    }
    return j;
}

NspReport nsp_report_from_json(const Json& j) {
    NspReport r;
    r.s = static_cast<std::size_t>(uint_at(j, "s"));
    r.mode = mode_from_name(str_at(j, "mode"));
    r.holds = bool_at(j, "holds");
    r.worst_ratio = num_at(j, "worst_ratio");
    r.rho = num_at(j, "rho");
    r.tau = num_at(j, "tau");
    const Json& w = field(j, "witness");
    if (!w.is_null()) {
        NspWitness wit;
        wit.v = vec_from_json(field(w, "v"), "witness.v");
        wit.support = indices_from_json(field(w, "support"), "witness.support");
        r.witness = std::move(wit);
    }
    return r;
}

Json rip_estimate_to_json(const RipEstimate& r) {
    Json j;
    j["s"] = r.s;
    j["method"] = r.method == RipMethod::exact ? "exact" : "monte_carlo";
    j["delta"] = real_to_json(r.delta);
    j["supports_examined"] = r.supports_examined;
    j["extremal_support"] = indices_to_json(r.extremal_support);
    j["seed"] = r.seed;
    return j;
}

RipEstimate rip_estimate_from_json(const Json& j) {
    RipEstimate r;
    r.s = static_cast<std::size_t>(uint_at(j, "s"));
    const std::string method = str_at(j, "method");
    if (method == "exact") {
        r.method = RipMethod::exact;
    } else if (method == "monte_carlo") {
        r.method = RipMethod::monte_carlo;
    } else {
        malformed("unknown rip method '" + method + "'");
    }
    r.delta = num_at(j, "delta");
    r.supports_examined = uint_at(j, "supports_examined");
    r.extremal_support = indices_from_json(field(j, "extremal_support"), "extremal_support");
    r.seed = uint_at(j, "seed");
    return r;
}

namespace {

Json guarantee_check_to_json(const GuaranteeCheck& g) {
    Json j;
    j["holds"] = g.holds;
    j["lhs"] = real_to_json(g.lhs);
    j["rhs"] = real_to_json(g.rhs);
    return j;
}

GuaranteeCheck guarantee_check_from_json(const Json& j) {
    GuaranteeCheck g;
    g.holds = bool_at(j, "holds");
    g.lhs = num_at(j, "lhs");
    g.rhs = num_at(j, "rhs");
    return g;
}

} // namespace

Json diagnostics_to_json(const DiagnosticsReport& r) {
    Json j;
    j["s"] = r.s;
    j["mu"] = real_to_json(r.mu);
    Json mu1 = Json::array();
    for (const auto& [order, value] : r.mu1) {
        Json e;
        e["order"] = order;
        e["value"] = real_to_json(value);
        mu1.push_back(std::move(e));
    }
    j["mu1"] = std::move(mu1);
    j["welch1"] = real_to_json(r.welch1);
    j["welch_s_valid"] = r.welch_s_valid;
    j["frame"] = frame_check_to_json(r.frame);
    Json nsp = Json::array();
    for (const NspReport& n : r.nsp) nsp.push_back(nsp_report_to_json(n));
    j["nsp"] = std::move(nsp);
    Json rip = Json::array();
    for (const RipEstimate& e : r.rip) rip.push_back(rip_estimate_to_json(e));
    j["rip"] = std::move(rip);
    Json g;
    g["coherence_thm"] = guarantee_check_to_json(r.guarantees.coherence_thm);
    g["rip_third"] = guarantee_check_to_json(r.guarantees.rip_third);
    g["rip_robust"] = guarantee_check_to_json(r.guarantees.rip_robust);
    g["certified"] = r.guarantees.certified;
    j["guarantees"] = std::move(g);
    return j;
}

DiagnosticsReport diagnostics_from_json(const Json& j) {
    DiagnosticsReport r;
    r.s = static_cast<std::size_t>(uint_at(j, "s"));
    r.mu = num_at(j, "mu");
    const Json& mu1 = field(j, "mu1");
    if (!mu1.is_array()) malformed("field 'mu1' must be an array");
    for (const Json& e : mu1)
        r.mu1.emplace_back(static_cast<std::size_t>(uint_at(e, "order")),
                           num_at(e, "value"));
    r.welch1 = num_at(j, "welch1");
    r.welch_s_valid = bool_at(j, "welch_s_valid");
    r.frame = frame_check_from_json(field(j, "frame"));
    const Json& nsp = field(j, "nsp");
    if (!nsp.is_array()) malformed("field 'nsp' must be an array");
    for (const Json& e : nsp) r.nsp.push_back(nsp_report_from_json(e));
    const Json& rip = field(j, "rip");
    if (!rip.is_array()) malformed("field 'rip' must be an array");
    for (const Json& e : rip) r.rip.push_back(rip_estimate_from_json(e));
    const Json& g = field(j, "guarantees");
    r.guarantees.coherence_thm = guarantee_check_from_json(field(g, "coherence_thm"));
    r.guarantees.rip_third = guarantee_check_from_json(field(g, "rip_third"));
    r.guarantees.rip_robust = guarantee_check_from_json(field(g, "rip_robust"));
    r.guarantees.certified = bool_at(g, "certified");
    return r;
}

Json trial_record_to_json(const TrialRecord& r) {
    Json j;
    j["trial"] = r.trial;
    j["seed"] = r.seed;
    j["support"] = indices_to_json(r.support);
    j["err_l1"] = real_to_json(r.err_l1);
    j["err_l2"] = real_to_json(r.err_l2);
    j["success"] = r.success;
    return j;
}

TrialRecord trial_record_from_json(const Json& j) {
    TrialRecord r;
    r.trial = static_cast<std::size_t>(uint_at(j, "trial"));
    r.seed = uint_at(j, "seed");
    r.support = indices_from_json(field(j, "support"), "support");
    r.err_l1 = num_at(j, "err_l1");
    r.err_l2 = num_at(j, "err_l2");
    r.success = bool_at(j, "success");
    return r;
}

Json batch_summary_to_json(const BatchSummary& s) {
    Json j;
    j["s"] = s.s;
    j["trials"] = s.trials;
    j["eta"] = real_to_json(s.eta);
    j["seed"] = s.seed;
    j["success_rate"] = real_to_json(s.success_rate);
    j["max_err_l1"] = real_to_json(s.max_err_l1);
    j["max_err_l2"] = real_to_json(s.max_err_l2);
    Json records = Json::array();
    for (const TrialRecord& r : s.records) records.push_back(trial_record_to_json(r));
    j["records"] = std::move(records);
    return j;
}

BatchSummary batch_summary_from_json(const Json& j) {
    BatchSummary s;
    s.s = static_cast<std::size_t>(uint_at(j, "s"));
    s.trials = static_cast<std::size_t>(uint_at(j, "trials"));
    s.eta = num_at(j, "eta");
    s.seed = uint_at(j, "seed");
    s.success_rate = num_at(j, "success_rate");
    s.max_err_l1 = num_at(j, "max_err_l1");
    s.max_err_l2 = num_at(j, "max_err_l2");
    const Json& records = field(j, "records");
    if (!records.is_array()) malformed("field 'records' must be an array");
    for (const Json& e : records) s.records.push_back(trial_record_from_json(e));
    return s;
}

std::string ensemble_kind_name(EnsembleKind kind) {
    switch (kind) {
        case EnsembleKind::gaussian: return "gaussian";
        case EnsembleKind::bernoulli: return "bernoulli";
        case EnsembleKind::simplex_etf: return "simplex_etf";
        case EnsembleKind::alltop_gabor: return "alltop_gabor";
    }
    malformed("unknown ensemble kind");
}

EnsembleKind ensemble_kind_from_name(const std::string& name) {
    if (name == "gaussian") return EnsembleKind::gaussian;
    if (name == "bernoulli") return EnsembleKind::bernoulli;
    if (name == "simplex_etf") return EnsembleKind::simplex_etf;
    if (name == "alltop_gabor") return EnsembleKind::alltop_gabor;
    malformed("unknown ensemble kind '" + name + "'");
}

std::string compression_mode_name(CompressionMode mode) {
    return mode == CompressionMode::shared ? "shared" : "per_point";
}

CompressionMode compression_mode_from_name(const std::string& name) {
    if (name == "shared") return CompressionMode::shared;
    if (name == "per_point") return CompressionMode::per_point;
    malformed("unknown compression mode '" + name + "'");
}

Json compression_run_to_json(const CompressionRun& run) {
    Json j;
    j["mode"] = compression_mode_name(run.mode);
    j["ensemble"] = ensemble_kind_name(run.ensemble);
    j["seed"] = run.seed;
    j["original"] = point_cloud_to_json(run.original);
    j["projected"] = point_cloud_to_json(run.projected);
    Json mats = Json::array();
    for (const DenseMatrix& a : run.matrices) mats.push_back(matrix_to_json(a));
    j["matrices"] = std::move(mats);
    Json pulls = Json::array();
    for (const DenseMatrix& a : run.pullbacks) pulls.push_back(matrix_to_json(a));
    j["pullbacks"] = std::move(pulls);
    Json mets = Json::array();
    for (const DenseMatrix& a : run.metrics) mets.push_back(matrix_to_json(a));
    j["metrics"] = std::move(mets);
    return j;
}

CompressionRun compression_run_from_json(const Json& j) {
    CompressionRun run;
    run.mode = compression_mode_from_name(str_at(j, "mode"));
    run.ensemble = ensemble_kind_from_name(str_at(j, "ensemble"));
    run.seed = uint_at(j, "seed");
    run.original = point_cloud_from_json(field(j, "original"));
    run.projected = point_cloud_from_json(field(j, "projected"));
    const Json& mats = field(j, "matrices");
    if (!mats.is_array()) malformed("field 'matrices' must be an array");
    for (const Json& e : mats) run.matrices.push_back(matrix_from_json(e));
    const Json& pulls = field(j, "pullbacks");
    if (!pulls.is_array()) malformed("field 'pullbacks' must be an array");
    for (const Json& e : pulls) run.pullbacks.push_back(matrix_from_json(e));
    const Json& mets = field(j, "metrics");
    if (!mets.is_array()) malformed("field 'metrics' must be an array");
    for (const Json& e : mets) run.metrics.push_back(matrix_from_json(e));
    return run;
}

Json sphere_extension_to_json(const SphereExtension& e) {
    Json j;
    j["radius"] = real_to_json(e.radius);
    j["base_point"] = vec_to_json(e.base_point);
    j["lifted"] = point_cloud_to_json(e.lifted);
    j["geodesic"] = rmat_to_json(e.geodesic);
    j["delta_sphere"] = real_to_json(e.delta_sphere);
    j["delta_linear"] = real_to_json(e.delta_linear);
    return j;
}

SphereExtension sphere_extension_from_json(const Json& j) {
    SphereExtension e;
    e.radius = num_at(j, "radius");
    e.base_point = vec_from_json(field(j, "base_point"), "base_point");
    e.lifted = point_cloud_from_json(field(j, "lifted"));
    e.geodesic = rmat_from_json(field(j, "geodesic"));
    e.delta_sphere = num_at(j, "delta_sphere");
    e.delta_linear = num_at(j, "delta_linear");
    return e;
}

Json spectral_comparison_to_json(const SpectralComparison& c) {
    Json j;
    j["eigenvalues"] = vec_to_json(c.eigenvalues);
    j["lambda"] = real_to_json(c.lambda);
    j["support_lo"] = real_to_json(c.support_lo);
    j["support_hi"] = real_to_json(c.support_hi);
    j["ks_statistic"] = real_to_json(c.ks_statistic);
    j["ensemble_mismatch"] = c.ensemble_mismatch;
    return j;
}

SpectralComparison spectral_comparison_from_json(const Json& j) {
    SpectralComparison c;
    c.eigenvalues = vec_from_json(field(j, "eigenvalues"), "eigenvalues");
    c.lambda = num_at(j, "lambda");
    c.support_lo = num_at(j, "support_lo");
    c.support_hi = num_at(j, "support_hi");
    c.ks_statistic = num_at(j, "ks_statistic");
    c.ensemble_mismatch = bool_at(j, "ensemble_mismatch");
    return c;
}

std::string trial_records_csv(const std::vector<TrialRecord>& records) {
    std::string out = "trial,seed,support,err_l1,err_l2,success\n";
    for (const TrialRecord& r : records) {
        out += std::to_string(r.trial);
        out += ',';
        out += std::to_string(r.seed);
        out += ',';
        for (std::size_t i = 0; i < r.support.size(); ++i) {
            if (i > 0) out += ';';
            out += std::to_string(r.support[i]);
        }
        out += ',';
        out += fmt_double(r.err_l1);
        out += ',';
        out += fmt_double(r.err_l2);
        out += ',';
        out += r.success ? '1' : '0';
        out += '\n';
    }
    return out;
}

std::string rmat_csv(const RMat& a) {
    std::string out;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            if (j > 0) out += ',';
            out += fmt_double(a(i, j));
        }
        out += '\n';
    }
    return out;
}

std::string values_csv(const Vec& values, const std::string& header) {
    std::string out = header + "\n";
    for (const double v : values) {
        out += fmt_double(v);
        out += '\n';
    }
    return out;
}

} // namespace ripkit
