#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "fedroute/rng.hpp"
#include "fedroute/variant.hpp"

namespace fedroute {

// Default generation constants, shared by all variants. Distances and times
// share units (vehicle speed 1); capacity is normalized to 1.
inline constexpr double kDurationLimit = 3.0;
inline constexpr double kDepotDueTime = 3.0;
inline constexpr double kServiceTime = 0.2;
inline constexpr double kBackhaulProb = 0.2;
inline constexpr double kTwWidthMin = 0.15;
inline constexpr double kTwWidthMax = 0.6;

struct Instance {
    VariantSpec spec;
    std::array<double, 2> depot{};
    std::vector<std::array<double, 2>> coords;  // n customers
    std::vector<double> demands;                // n, signed (negative = backhaul)
    double capacity = 1.0;
    std::optional<double> duration_limit;  // present iff spec.duration_limit
    std::vector<double> tw_start;          // n+1 (index 0 = depot), iff spec.time_windows
    std::vector<double> tw_end;            // n+1, iff spec.time_windows
    std::vector<double> service;           // n, iff spec.time_windows

    // Optional linehaul-before-backhaul rule within each route. Off by
    // default; a construction-time toggle honored by the feasibility mask
    // and the heuristic's move filter.
    bool backhaul_precedence = false;

    int n() const { return static_cast<int>(coords.size()); }

    // Node indexing: 0 = depot, 1..n = customers.
    const std::array<double, 2>& point(int node) const {
        return node == 0 ? depot : coords[static_cast<std::size_t>(node - 1)];
    }

    double dist(int a, int b) const {
        const auto& p = point(a);
        const auto& q = point(b);
        return std::hypot(p[0] - q[0], p[1] - q[1]);
    }
};

// Draws an instance of the given variant. Deterministic given the rng state.
// Guarantees: demands are in (0, 0.3] before backhaul negation; with the
// backhaul flag both signs occur (for n >= 2); with time windows every
// single-customer round trip depot -> i -> depot is time- and, when limited,
// length-feasible.
Instance generate_instance(const VariantSpec& spec, int n, Rng& rng);

// k-th symmetry of the unit square applied to all coordinates, k in 0..7
// (0 = identity). Non-coordinate fields are unchanged.
Instance augment8(const Instance& instance, int k);

}  // namespace fedroute
