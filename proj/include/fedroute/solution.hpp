#pragma once

#include <string>
#include <vector>

#include "fedroute/instance.hpp"

namespace fedroute {

// Routes of customer indices (1..n). The depot is implicit at the start of
// each route, and at the end unless the variant is open.
struct Solution {
    std::vector<std::vector<int>> routes;
};

// Total Euclidean length; the final depot-return leg per route is omitted
// for open variants. Throws on duplicate/missing customers or empty routes.
double evaluate(const Instance& instance, const Solution& solution);

enum class ViolationKind { capacity, duration, time_window, coverage };

const char* to_string(ViolationKind kind);

struct Violation {
    int route;  // -1 for solution-level coverage problems
    ViolationKind kind;
    double magnitude;
};

struct FeasibilityReport {
    bool feasible = true;
    std::vector<Violation> violations;
};

// Checks coverage, per-route two-sided capacity (deliveries and pickups each
// within c), route length against the duration limit, and the time-window
// schedule with waiting. Violations are reported as data, never thrown.
FeasibilityReport check_feasibility(const Instance& instance,
                                    const Solution& solution);

}  // namespace fedroute
