#pragma once

// Experiment driver behind the command-line tool.  A config document picks a
// command, an ensemble, and the experiment knobs; run_experiment validates
// everything up front, computes the payload, and only then touches the
// filesystem, so a rejected config never leaves partial output behind.
//
// Determinism contract: the payload document is a pure function of the
// resolved config.  All randomness is derived from the single master seed by
// hashing, so reruns of the same config produce byte-identical payloads.
// Wall time lives in the envelope, outside the payload.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ripkit/ensembles.hpp"
#include "ripkit/json_io.hpp"
#include "ripkit/manifold.hpp"

namespace ripkit {

inline constexpr const char* kToolName = "ripkit";
inline constexpr const char* kToolVersion = "0.1.0";

// Synthetic point-cloud parameters for the manifold command.
struct DatasetSpec {
    std::size_t count = 50;
    std::size_t dim = 100;
    std::size_t depth = 3;
    double decay = 0.5;
};

struct ManifoldOptions {
    std::size_t m = 0;  // compressed dimension, required for `manifold`
    CompressionMode mode = CompressionMode::shared;
    std::optional<Vec> radius_grid;  // absent: log-spaced default from the run
    DatasetSpec dataset;
};

struct ExperimentConfig {
    std::string command;  // gen-matrix | diagnose | recover | manifold | mp-check
    std::uint64_t seed = 0;
    std::string out_dir = ".";
    EnsembleSpec ensemble;  // kind/m/n/normalize_columns; seed 0 = derive from master
    bool ensemble_seed_explicit = false;
    std::size_t s = 1;
    std::uint64_t rip_trials = 2000;
    std::size_t trials = 1;
    double eta = 0.0;
    ManifoldOptions manifold;
};

// Parses a config document.  Unknown keys are rejected so a typo cannot
// silently fall back to a default.  Throws ValidationError naming the field.
ExperimentConfig config_from_json(const Json& j);

// Echo of the resolved config; parsing the echo reproduces the config.
Json config_to_json(const ExperimentConfig& c);

// Pure dispatch: validates the command-specific fields, runs the experiment,
// and returns the payload document.  No filesystem access.
Json run_payload(const ExperimentConfig& c);

struct RunArtifacts {
    Json envelope;
    std::vector<std::string> files;  // written paths, report first
};

// Full run: payload wrapped in an envelope (tool, version, config echo, wall
// time), report JSON plus any bulk CSVs written under the output directory.
RunArtifacts run_experiment(const ExperimentConfig& c);

struct VerifyResult {
    bool ok = true;
    std::vector<std::string> violations;
};

// Re-checks the cheap certificates embedded in a report envelope: null space
// witness ratios, pullback residuals, distance-matrix symmetry, recomputable
// aggregates.  Malformed documents throw ValidationError; a well-formed
// report that fails a check comes back with ok = false and one message per
// violated invariant.
VerifyResult verify_report(const Json& envelope);

}  // namespace ripkit
