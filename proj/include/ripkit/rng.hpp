#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

namespace ripkit {

// SplitMix64 finalizer. Used to expand seeds and to derive substreams.
std::uint64_t mix64(std::uint64_t z);

// Derives an independent stream seed from (master, tag, index). The tag is
// hashed with FNV-1a and folded into the master before the index is mixed in,
// so adding streams under one tag never perturbs streams under another.
std::uint64_t derive_seed(std::uint64_t master, std::string_view tag,
                          std::uint64_t index);

// xoshiro256++ seeded through SplitMix64. The raw 64-bit stream is a pure
// function of the seed (integer shift/rotate ops only, no platform variance).
// Gaussian variates use the Marsaglia polar method on top of the uniform
// stream.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed);

    std::uint64_t seed() const { return seed_; }
    static constexpr const char* algorithm() { return "xoshiro256++/polar"; }

    std::uint64_t next_u64();

    // Uniform on [0, 1), 53 random bits.
    double next_uniform();

    // Standard normal via the polar method (rejection on the unit disc,
    // pairs cached).
    double next_gaussian();

    // +1.0 or -1.0 with equal probability (top bit of the raw stream).
    double next_sign();

    // Unbiased integer in [0, n). n must be positive.
    std::uint64_t next_below(std::uint64_t n);

    // First s entries of a Fisher-Yates shuffle of {0, ..., n-1}, sorted
    // ascending: a uniform random s-subset.
    std::vector<std::size_t> random_subset(std::size_t n, std::size_t s);

private:
    std::uint64_t seed_;
    std::array<std::uint64_t, 4> state_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

std::vector<double> rng_gaussian(RngStream& stream, std::size_t count);
std::vector<double> rng_sign(RngStream& stream, std::size_t count);

} // namespace ripkit
