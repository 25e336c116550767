#include "jumpforge/ensemble.hpp"

#include <cstdlib>
#include <string>

namespace jumpforge {

int configured_threads() {
    const int fallback = omp_get_max_threads();
    const char* env = std::getenv("JUMPFORGE_THREADS");
    if (!env || !*env) return fallback;
    try {
        const int n = std::stoi(env);
        return n >= 1 ? n : fallback;
    } catch (const std::exception&) {
        return fallback;
    }
}

}  // namespace jumpforge
