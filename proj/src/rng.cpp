#include "ripkit/rng.hpp"

#include <algorithm>
#include <cmath>

#include "ripkit/error.hpp"

namespace ripkit {

namespace {

inline std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

} // namespace

std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::string_view tag,
                          std::uint64_t index) {
    return mix64(mix64(master ^ fnv1a(tag)) + index);
}

RngStream::RngStream(std::uint64_t seed) : seed_(seed) {
    // SplitMix64 expansion; guarantees a nonzero xoshiro state.
    std::uint64_t z = seed;
    for (auto& word : state_) {
        word = mix64(z);
        z = word;
    }
}

std::uint64_t RngStream::next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

double RngStream::next_uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::next_gaussian() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u, v, s;
    do {
        u = 2.0 * next_uniform() - 1.0;
        v = 2.0 * next_uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
}

double RngStream::next_sign() {
    return (next_u64() >> 63) ? 1.0 : -1.0;
}

std::uint64_t RngStream::next_below(std::uint64_t n) {
    if (n == 0) {
        throw ValidationError("next_below: n must be positive");
    }
    // Rejection keeps the draw unbiased: 2^64 mod n values are discarded.
    const std::uint64_t threshold = (0 - n) % n;
    std::uint64_t r;
    do {
        r = next_u64();
    } while (r < threshold);
    return r % n;
}

std::vector<std::size_t> RngStream::random_subset(std::size_t n, std::size_t s) {
    if (s > n) {
        throw ValidationError("random_subset: s exceeds n");
    }
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    for (std::size_t i = 0; i < s; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(next_below(n - i));
        std::swap(idx[i], idx[j]);
    }
    idx.resize(s);
    std::sort(idx.begin(), idx.end());
    return idx;
}

std::vector<double> rng_gaussian(RngStream& stream, std::size_t count) {
    std::vector<double> out(count);
    for (auto& x : out) x = stream.next_gaussian();
    return out;
}

std::vector<double> rng_sign(RngStream& stream, std::size_t count) {
    std::vector<double> out(count);
    for (auto& x : out) x = stream.next_sign();
    return out;
}

} // namespace ripkit
