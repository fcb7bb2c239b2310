#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "ripkit/diagnostics.hpp"
#include "ripkit/manifold.hpp"
#include "ripkit/matrix.hpp"
#include "ripkit/recovery.hpp"
#include "ripkit/sparsity.hpp"

namespace ripkit {

// Insertion-ordered documents keep report dumps byte-stable across runs.
using Json = nlohmann::ordered_json;

// Shortest round-trip decimal form; infinities become "inf"/"-inf".
std::string fmt_double(double x);

// Doubles as JSON numbers, except infinities, which JSON lacks; those are
// carried as the strings "inf"/"-inf". NaN is refused.
Json real_to_json(double x);
double real_from_json(const Json& j, const char* what);

Json matrix_to_json(const DenseMatrix& a);
DenseMatrix matrix_from_json(const Json& j);

Json rmat_to_json(const RMat& a);
RMat rmat_from_json(const Json& j);

Json sparse_to_json(const SparseVector& x);
SparseVector sparse_from_json(const Json& j);

Json point_cloud_to_json(const PointCloud& pc);
PointCloud point_cloud_from_json(const Json& j);

Json frame_check_to_json(const FrameCheck& f);
FrameCheck frame_check_from_json(const Json& j);

Json nsp_report_to_json(const NspReport& r);
NspReport nsp_report_from_json(const Json& j);

Json rip_estimate_to_json(const RipEstimate& r);
RipEstimate rip_estimate_from_json(const Json& j);

Json diagnostics_to_json(const DiagnosticsReport& r);
DiagnosticsReport diagnostics_from_json(const Json& j);

Json trial_record_to_json(const TrialRecord& r);
TrialRecord trial_record_from_json(const Json& j);

Json batch_summary_to_json(const BatchSummary& s);
BatchSummary batch_summary_from_json(const Json& j);

Json compression_run_to_json(const CompressionRun& run);
CompressionRun compression_run_from_json(const Json& j);

Json sphere_extension_to_json(const SphereExtension& e);
SphereExtension sphere_extension_from_json(const Json& j);

Json spectral_comparison_to_json(const SpectralComparison& c);
SpectralComparison spectral_comparison_from_json(const Json& j);

std::string ensemble_kind_name(EnsembleKind kind);
EnsembleKind ensemble_kind_from_name(const std::string& name);
std::string compression_mode_name(CompressionMode mode);
CompressionMode compression_mode_from_name(const std::string& name);

// CSV builders for the bulk outputs; doubles use fmt_double.
std::string trial_records_csv(const std::vector<TrialRecord>& records);
std::string rmat_csv(const RMat& a);
std::string values_csv(const Vec& values, const std::string& header);

} // namespace ripkit
