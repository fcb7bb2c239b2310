#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "ripkit/matrix.hpp"

namespace ripkit {

// Max |<a_i, a_j>| over distinct columns; requires unit columns within 1e-8.
double coherence(const DenseMatrix& a);

// mu_1(s): worst row-sum of the s largest off-diagonal |Gram| entries.
// s = 0 returns 0 so expressions like mu1(s) + mu1(s-1) stay evaluable.
double l1_coherence(const DenseMatrix& a, std::size_t s);

// s * sqrt((N-m)/(m(N-1))); the order-s variant is meaningful for
// s < sqrt(N-1), see welch_s_valid.
double welch_bound(std::size_t m, std::size_t n, std::size_t s);
bool welch_s_valid(std::size_t n, std::size_t s);

struct FrameCheck {
    bool is_equiangular = false;
    double c = 0.0;       // shared |inner product| (mean of off-diagonals)
    bool is_tight = false;
    double lambda = 0.0;  // AA* = (1/lambda) I
};

// Equiangularity: every off-diagonal |Gram| entry within tol of their mean.
// Tightness: ||AA* - (1/lambda) I||_F <= tol * ||AA*||_F at the trace-matched
// lambda.
FrameCheck frame_check(const DenseMatrix& a, double tol);

enum class NspMode { plain, stable, robust_l1 };

struct NspWitness {
    Vec v;
    std::vector<std::size_t> support;
};

struct NspReport {
    std::size_t s = 0;
    NspMode mode = NspMode::plain;
    bool holds = false;
    double worst_ratio = 0.0;  // +inf when a kernel vector hides inside S
    double rho = 1.0;          // threshold (stable/robust); 1 for plain
    double tau = 0.0;          // robust_l1 only
    std::optional<NspWitness> witness;
};

// Null space property certificate at order s via LPs over the kernel basis
// (plain/stable) or over all of R^N (robust_l1, measurement norm l1).
// Real matrices only; guard C(N, s) <= 1e5.
NspReport nsp_check(const DenseMatrix& a, std::size_t s, NspMode mode,
                    double rho = 1.0, double tau = 0.0);

// Re-evaluates the defining inequality on a witness; returns the achieved
// ratio (lhs/rhs form used by nsp_check).
double nsp_witness_ratio(const DenseMatrix& a, const NspReport& report);

enum class RipMethod { exact, monte_carlo };

struct RipEstimate {
    std::size_t s = 0;
    RipMethod method = RipMethod::exact;
    double delta = 0.0;
    std::uint64_t supports_examined = 0;
    std::vector<std::size_t> extremal_support;
    std::uint64_t seed = 0;  // monte_carlo only
};

// delta_s = max over supports of max(lambda_max - 1, 1 - lambda_min) of the
// support Gram. exact enumerates lexicographically (guard C(N, s) <= 1e6);
// monte_carlo examines a seeded set of distinct supports and is a lower
// bound. Ties keep the lexicographically first support.
RipEstimate rip_constant(const DenseMatrix& a, std::size_t s, RipMethod method,
                         std::uint64_t trials = 0, std::uint64_t seed = 0);

struct GuaranteeCheck {
    bool holds = false;
    double lhs = 0.0;
    double rhs = 0.0;
};

struct GuaranteeFlags {
    GuaranteeCheck coherence_thm;  // mu1(s) + mu1(s-1) < 1
    GuaranteeCheck rip_third;      // delta_2s < 1/3
    GuaranteeCheck rip_robust;     // delta_2s < 4/sqrt(41)
    bool certified = true;         // false when delta came from monte_carlo
};

struct DiagnosticsReport {
    std::size_t s = 0;
    double mu = 0.0;
    std::vector<std::pair<std::size_t, double>> mu1;  // (order, value)
    double welch1 = 0.0;       // order-1 Welch bound
    bool welch_s_valid = true;
    FrameCheck frame;
    std::vector<NspReport> nsp;       // empty when skipped (complex/guard)
    std::vector<RipEstimate> rip;     // delta_s and delta_min(2s, N)
    GuaranteeFlags guarantees;
};

// Aggregate certificate at sparsity s. RIP falls back to monte_carlo above
// the exact guard (flags then uncertified); NSP included for real matrices
// within its guard.
DiagnosticsReport guarantee_report(const DenseMatrix& a, std::size_t s,
                                   std::uint64_t rip_trials = 2000,
                                   std::uint64_t seed = 0);

// C(n, k) saturating at cap.
std::uint64_t binomial_capped(std::size_t n, std::size_t k, std::uint64_t cap);

// Lexicographic combination enumeration helpers.
bool next_combination(std::vector<std::size_t>& c, std::size_t n);
std::vector<std::size_t> unrank_combination(std::uint64_t rank, std::size_t n,
                                            std::size_t s);

} // namespace ripkit
