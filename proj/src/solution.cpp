#include "fedroute/solution.hpp"

#include <algorithm>
#include <stdexcept>

namespace fedroute {

const char* to_string(ViolationKind kind) {
    switch (kind) {
        case ViolationKind::capacity: return "capacity";
        case ViolationKind::duration: return "duration";
        case ViolationKind::time_window: return "time_window";
        case ViolationKind::coverage: return "coverage";
    }
    return "unknown";
}

namespace {

double route_length(const Instance& inst, const std::vector<int>& route) {
    double len = 0.0;
    int prev = 0;
    for (int node : route) {
        len += inst.dist(prev, node);
        prev = node;
    }
    if (!inst.spec.open) len += inst.dist(prev, 0);
    return len;
}

}  // namespace

double evaluate(const Instance& instance, const Solution& solution) {
    const int n = instance.n();
    std::vector<int> seen(static_cast<std::size_t>(n) + 1, 0);
    for (const auto& route : solution.routes) {
        if (route.empty()) throw std::invalid_argument("evaluate: empty route");
        for (int node : route) {
            if (node < 1 || node > n)
                throw std::invalid_argument("evaluate: customer index out of range");
            if (++seen[static_cast<std::size_t>(node)] > 1)
                throw std::invalid_argument("evaluate: customer visited twice");
        }
    }
    for (int i = 1; i <= n; ++i) {
        if (seen[static_cast<std::size_t>(i)] == 0)
            throw std::invalid_argument("evaluate: customer not covered");
    }
    double total = 0.0;
    for (const auto& route : solution.routes) total += route_length(instance, route);
    return total;
}

FeasibilityReport check_feasibility(const Instance& instance,
                                    const Solution& solution) {
    FeasibilityReport report;
    const int n = instance.n();

    std::vector<int> seen(static_cast<std::size_t>(n) + 1, 0);
    for (std::size_t r = 0; r < solution.routes.size(); ++r) {
        const auto& route = solution.routes[r];
        if (route.empty()) {
            report.violations.push_back(
                {static_cast<int>(r), ViolationKind::coverage, 1.0});
            continue;
        }
        for (int node : route) {
            if (node < 1 || node > n) {
                report.violations.push_back(
                    {static_cast<int>(r), ViolationKind::coverage, 1.0});
            } else if (++seen[static_cast<std::size_t>(node)] > 1) {
                report.violations.push_back(
                    {static_cast<int>(r), ViolationKind::coverage, 1.0});
            }
        }
    }
    int missing = 0;
    for (int i = 1; i <= n; ++i) {
        if (seen[static_cast<std::size_t>(i)] == 0) ++missing;
    }
    if (missing > 0) {
        report.violations.push_back(
            {-1, ViolationKind::coverage, static_cast<double>(missing)});
    }

    for (std::size_t r = 0; r < solution.routes.size(); ++r) {
        const auto& route = solution.routes[r];
        if (route.empty()) continue;
        bool indices_ok = true;
        for (int node : route) {
            if (node < 1 || node > n) indices_ok = false;
        }
        if (!indices_ok) continue;

        // Two-sided capacity: deliveries booked at the depot and pickups
        // carried back must each fit within c. Accumulation order matches
        // the constructive environment so both agree bit-for-bit.
        double load_out = 0.0;
        double load_in = 0.0;
        for (int node : route) {
            const double d = instance.demands[static_cast<std::size_t>(node - 1)];
            if (d > 0.0) load_out += d;
            else load_in += -d;
        }
        if (load_out > instance.capacity) {
            report.violations.push_back({static_cast<int>(r), ViolationKind::capacity,
                                         load_out - instance.capacity});
        }
        if (load_in > instance.capacity) {
            report.violations.push_back({static_cast<int>(r), ViolationKind::capacity,
                                         load_in - instance.capacity});
        }

        if (instance.duration_limit) {
            const double len = route_length(instance, route);
            if (len > *instance.duration_limit) {
                report.violations.push_back({static_cast<int>(r),
                                             ViolationKind::duration,
                                             len - *instance.duration_limit});
            }
        }

        if (instance.spec.time_windows) {
            double clock = 0.0;
            int prev = 0;
            for (int node : route) {
                const auto idx = static_cast<std::size_t>(node);
                const double arrival = clock + instance.dist(prev, node);
                if (arrival > instance.tw_end[idx]) {
                    report.violations.push_back({static_cast<int>(r),
                                                 ViolationKind::time_window,
                                                 arrival - instance.tw_end[idx]});
                }
                const double start = std::max(arrival, instance.tw_start[idx]);
                clock = start + instance.service[idx - 1];
                prev = node;
            }
            if (!instance.spec.open) {
                const double back = clock + instance.dist(prev, 0);
                if (back > instance.tw_end[0]) {
                    report.violations.push_back({static_cast<int>(r),
                                                 ViolationKind::time_window,
                                                 back - instance.tw_end[0]});
                }
            }
        }
    }

    report.feasible = report.violations.empty();
    return report;
}

}  // namespace fedroute
