#pragma once

#include <chrono>
#include <cstdint>

namespace cortexc {

// Monotonic milliseconds since an arbitrary (per-process) epoch. All run
// timestamps use this source; wall-clock time is only for display.
inline int64_t now_ms() {
    using namespace std::chrono;
    static const steady_clock::time_point epoch = steady_clock::now();
    return duration_cast<milliseconds>(steady_clock::now() - epoch).count();
}

inline double elapsed_ms(std::chrono::steady_clock::time_point start) {
    using namespace std::chrono;
    return duration<double, std::milli>(steady_clock::now() - start).count();
}

} // namespace cortexc
