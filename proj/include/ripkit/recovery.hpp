#pragma once

#include <cstdint>
#include <vector>

#include "ripkit/matrix.hpp"

namespace ripkit {

enum class RecoveryStatus { optimal, infeasible, numerical_failure };

struct RecoveryResult {
    Vec solution;
    double objective = 0.0;   // ||x#||_1
    double residual = 0.0;    // feasibility: ||Ax# - y||_2, less eta for the
                              // denoised variant (clamped at 0)
    RecoveryStatus status = RecoveryStatus::optimal;
    std::size_t iterations = 0;
    bool non_unique = false;  // second optimal basis within 1e-9
};

// min ||z||_1 subject to Az = y, via the split z = u - w with u, w >= 0.
RecoveryResult basis_pursuit(const DenseMatrix& a, const Vec& y);

// min ||z||_1 subject to ||Az - y||_2 <= eta, by a primal-dual scheme
// alternating l1 shrinkage with projection onto the l2 ball; steps
// tau = sigma = 0.995/||A||_2 so their product stays below 1/||A||_2^2.
// Fixed-point tolerance 1e-8, iteration cap 1e5 (cap -> numerical_failure
// with the best iterate seen).
RecoveryResult basis_pursuit_denoise(const DenseMatrix& a, const Vec& y,
                                     double eta);

struct TrialRecord {
    std::size_t trial = 0;
    std::uint64_t seed = 0;  // per-trial derived seed
    std::vector<std::size_t> support;
    double err_l1 = 0.0;
    double err_l2 = 0.0;
    bool success = false;
};

struct BatchSummary {
    std::size_t s = 0;
    std::size_t trials = 0;
    double eta = 0.0;
    std::uint64_t seed = 0;
    double success_rate = 0.0;
    double max_err_l1 = 0.0;
    double max_err_l2 = 0.0;
    std::vector<TrialRecord> records;
};

// Seeded recovery experiment: per trial, Gaussian amplitudes on a uniform
// random size-s support, measured by A (noise of l2 norm eta added when
// eta > 0), recovered by basis pursuit (eta = 0) or its denoised variant.
// Success means ||x - x#||_2 <= 1e-6 ||x||_2. Trials run independently on
// derived seeds, so the summary does not depend on the worker count.
BatchSummary batch_recovery_experiment(const DenseMatrix& a, std::size_t s,
                                       std::size_t trials, double eta,
                                       std::uint64_t seed);

} // namespace ripkit
