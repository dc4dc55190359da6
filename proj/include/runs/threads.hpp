#pragma once

#include <algorithm>
#include <cstdlib>
#include <string>
#include <thread>

namespace runs {

// Worker count for the parallel enumeration/simulation paths.  `requested`
// overrides (tests use it to prove thread-count independence); otherwise the
// RUNS_APPROX_THREADS environment variable caps the hardware default.
// Results never depend on the count: chunk layout is fixed, merges ordered.
inline int worker_count(int requested = 0) {
    if (requested >= 1) return std::min(requested, 256);
    unsigned hw = std::thread::hardware_concurrency();
    int n = hw > 0 ? static_cast<int>(hw) : 1;
    if (const char* env = std::getenv("RUNS_APPROX_THREADS")) {
        try {
            const int cap = std::stoi(std::string(env));
            if (cap >= 1) n = std::min(n, cap);
        } catch (...) {
            // unparsable value: ignore and keep the hardware default
        }
    }
    return std::max(1, n);
}

}  // namespace runs
