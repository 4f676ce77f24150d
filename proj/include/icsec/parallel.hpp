#pragma once
#include <cstdlib>
#include <omp.h>

namespace icsec {

// ICSEC_THREADS caps worker parallelism; results never depend on the value.
inline int thread_cap() {
    static int n = [] {
        if (const char* e = std::getenv("ICSEC_THREADS")) {
            int v = std::atoi(e);
            if (v >= 1) return v;
        }
        return omp_get_max_threads();
    }();
    return n;
}

} // namespace icsec
