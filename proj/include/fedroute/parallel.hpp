#pragma once

#include <cstddef>
#include <functional>

namespace fedroute {

// Worker cap: explicit override > FEDROUTE_THREADS env var > OpenMP default.
// Returns at least 1.
int max_threads();

// Explicit override for the worker cap; 0 clears it back to env/OpenMP.
void set_max_threads(int t);

// Runs body(i) for i in [0, n). Parallel when OpenMP is available and the
// cap allows it, serial otherwise. Callers own determinism: bodies write to
// disjoint slots and any floating-point reduction happens afterwards in
// index order, so results never depend on the worker count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace fedroute
