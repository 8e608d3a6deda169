#include "fedroute/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <string>

#ifdef FEDROUTE_HAVE_OPENMP
#include <omp.h>
#endif

namespace fedroute {

namespace {
std::atomic<int> g_override{0};

int env_threads() {
    const char* s = std::getenv("FEDROUTE_THREADS");
    if (s == nullptr || *s == '\0') return 0;
    char* end = nullptr;
    long v = std::strtol(s, &end, 10);
    if (end == s || v < 1) return 0;
    return static_cast<int>(v);
}
}  // namespace

int max_threads() {
    int t = g_override.load(std::memory_order_relaxed);
    if (t < 1) t = env_threads();
#ifdef FEDROUTE_HAVE_OPENMP
    if (t < 1) t = omp_get_max_threads();
#endif
    return t < 1 ? 1 : t;
}

void set_max_threads(int t) { g_override.store(t, std::memory_order_relaxed); }

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
    if (n == 0) return;
#ifdef FEDROUTE_HAVE_OPENMP
    const int workers = max_threads();
    if (workers > 1 && n > 1 && !omp_in_parallel()) {
        std::exception_ptr error;
#pragma omp parallel for schedule(dynamic, 1) num_threads(workers)
        for (long long i = 0; i < static_cast<long long>(n); ++i) {
            try {
                body(static_cast<std::size_t>(i));
            } catch (...) {
#pragma omp critical(fedroute_parallel_error)
                if (!error) error = std::current_exception();
            }
        }
        if (error) std::rethrow_exception(error);
        return;
    }
#endif
    for (std::size_t i = 0; i < n; ++i) body(i);
}

}  // namespace fedroute
