#include "pairlearn/parallel.hpp"

#include <cstdlib>
#include <string>

namespace pairlearn {

std::size_t thread_count() {
    if (const char *env = std::getenv("PAIRLEARN_THREADS"); env != nullptr && *env != '\0') {
        try {
            const long v = std::stol(env);
            if (v > 0) { return static_cast<std::size_t>(v); }
        } catch (const std::exception &) {
            // malformed value: fall through to the default
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

}  // namespace pairlearn
