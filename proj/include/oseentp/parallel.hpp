#pragma once

#include <atomic>
#include <cstdlib>
#include <cstddef>

#if defined(OSEENTP_HAVE_OPENMP)
#include <omp.h>
#endif

// Point-parallel execution: independent iterations write disjoint slots, so
// the result does not depend on the thread count. ExecMode::serial forces the
// plain loop and is used by tests and the benchmark reference path.

namespace oseentp {

enum class ExecMode { serial, parallel };

inline std::atomic<int>& thread_override() {
    static std::atomic<int> n{0};
    return n;
}

// 0 restores the default (OSEEN_TP_THREADS env or the OpenMP default).
inline void set_thread_count(int n) { thread_override().store(n < 0 ? 0 : n); }

inline int thread_count() {
    int n = thread_override().load();
    if (n > 0) return n;
    if (const char* env = std::getenv("OSEEN_TP_THREADS")) {
        int e = std::atoi(env);
        if (e > 0) return e;
    }
#if defined(OSEENTP_HAVE_OPENMP)
    return omp_get_max_threads();
#else
    return 1;
#endif
}

template <class F>
void parallel_for(std::size_t n, F&& body, ExecMode mode = ExecMode::parallel) {
#if defined(OSEENTP_HAVE_OPENMP)
    int nt = thread_count();
    if (mode == ExecMode::parallel && nt > 1) {
        // 64-bit loop index; OpenMP requires a signed integral type.
        long long m = static_cast<long long>(n);
#pragma omp parallel for num_threads(nt) schedule(static)
        for (long long i = 0; i < m; ++i) body(static_cast<std::size_t>(i));
        return;
    }
#else
    (void)mode;
#endif
    for (std::size_t i = 0; i < n; ++i) body(i);
}

}  // namespace oseentp
