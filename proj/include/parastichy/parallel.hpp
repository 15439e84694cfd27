#pragma once

#include <algorithm>
#include <cstdlib>
#include <string>
#include <thread>

namespace parastichy {

/// Worker cap for parallel enumerations. PARASTICHY_THREADS overrides the
/// hardware default; values below 1 are clamped.
inline int max_threads() {
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw < 1) hw = 1;
    if (const char* env = std::getenv("PARASTICHY_THREADS")) {
        try {
            int cap = std::stoi(env);
            return std::clamp(cap, 1, hw > 256 ? hw : 256);
        } catch (...) {
        }
    }
    return hw;
}

}  // namespace parastichy
