#pragma once

#include <cstdint>
#include <string>

#include "fedroute/policy.hpp"

namespace fedroute {

struct GradCheckReport {
    std::string variant;
    double max_rel_err = 0.0;
    std::string worst_tensor;
    std::size_t params_checked = 0;
    std::size_t kink_retries = 0;  // components re-checked at a smaller step
};

// Central finite differences of weighted_logprob against the analytic
// reverse-mode gradient, component by component. Relative error uses an
// absolute floor so components with near-zero gradient are compared
// absolutely. Components whose difference quotient straddles a ReLU kink
// are re-checked with a 100x smaller step. Deterministic given the seed.
GradCheckReport run_gradcheck(const ArchConfig& arch, VariantSpec variant, int n,
                              int num_trajectories, std::uint64_t seed,
                              double fd_eps = 1e-5);

}  // namespace fedroute
