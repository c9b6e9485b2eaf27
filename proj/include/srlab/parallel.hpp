#pragma once

#include <cstdint>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

// Batch execution helper. Every data-parallel loop in the library goes
// through par::for_each_index so that the OpenMP path and the serial
// reference path run the same per-index code; results are written to
// preallocated slots, reductions happen serially afterwards, and the
// output is therefore identical (bitwise) in both modes.

namespace srlab::par {

inline bool& enabled_flag() {
    static bool flag = [] {
        const char* env = std::getenv("SRLAB_SERIAL");
        return !(env && env[0] == '1');
    }();
    return flag;
}

inline bool enabled() { return enabled_flag(); }
inline void set_enabled(bool on) { enabled_flag() = on; }

inline int max_threads() {
#ifdef _OPENMP
    return enabled() ? omp_get_max_threads() : 1;
#else
    return 1;
#endif
}

template <class F>
void for_each_index(std::int64_t n, F&& body) {
#ifdef _OPENMP
    if (enabled()) {
#pragma omp parallel for schedule(dynamic)
        for (std::int64_t i = 0; i < n; ++i)
            body(i);
        return;
    }
#endif
    for (std::int64_t i = 0; i < n; ++i)
        body(i);
}

} // namespace srlab::par
