#include "ripkit/parallel.hpp"

#include <cstdlib>
#include <string>

#include "ripkit/error.hpp"

namespace ripkit {

std::size_t worker_count() {
    const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
    const char* env = std::getenv("RIPKIT_THREADS");
    if (!env || *env == '\0') return hw;
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 0) {
        throw ValidationError("RIPKIT_THREADS must be a nonnegative integer");
    }
    if (v == 0) return hw;
    return std::min<std::size_t>(static_cast<std::size_t>(v), hw);
}

} // namespace ripkit
