#pragma once

#include <array>
#include <vector>

#include <Eigen/Core>

#include "fedroute/instance.hpp"
#include "fedroute/solution.hpp"

namespace fedroute {

using RowMat =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline constexpr int kStaticFeatureDim = 8;
inline constexpr int kDynFeatureDim = 4;

// MDP state during autoregressive construction. Node 0 is the depot;
// returning to it starts a fresh route (all accumulators reset).
struct DecodeState {
    int current_node = 0;
    std::vector<char> visited;  // length n
    double load_out = 0.0;      // delivered on current route, sum of max(d,0)
    double load_in = 0.0;       // picked up on current route, sum of max(-d,0)
    double route_len = 0.0;     // distance traveled on current route
    double clock = 0.0;         // current time (TW variants)
    int step_count = 0;
    bool done = false;
    int num_visited = 0;

    bool all_visited(int n) const { return num_visited == n; }
};

DecodeState reset(const Instance& instance);

// Entry i (1..n): unvisited and adding i keeps both load directions within
// capacity, the route within the duration limit (including the return leg
// for closed variants), and the arrival within [e_i, l_i] with a feasible
// depot closure for closed TW variants. Entry 0 (depot): allowed whenever
// the vehicle is away from the depot, or everything is visited. Throws if
// nothing is feasible while customers remain (generation guarantee broken).
std::vector<char> feasible_mask(const Instance& instance,
                                const DecodeState& state);

// Applies one action in place. The node must be feasible per feasible_mask;
// a masked node throws.
void step_inplace(const Instance& instance, DecodeState& state, int node);

DecodeState step(const Instance& instance, const DecodeState& state, int node);

// Unified fixed-width node features: (x, y, demand, e, l, s, open-flag, L),
// zero for attributes absent in the variant. Row 0 is the depot.
RowMat static_features(const Instance& instance);

// (remaining delivery capacity, remaining pickup capacity,
//  remaining length budget / L or 1, clock / depot due time or 0)
std::array<double, kDynFeatureDim> dynamic_features(const Instance& instance,
                                                    const DecodeState& state);

// Splits a full action sequence (customer and depot visits) into routes.
Solution actions_to_solution(const std::vector<int>& actions);

}  // namespace fedroute
