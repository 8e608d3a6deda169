#pragma once

#include "fedroute/instance.hpp"
#include "fedroute/solution.hpp"

namespace fedroute {

inline constexpr int kDefaultSearchBudget = 2000;

// Nearest-feasible-customer construction driven by the environment mask;
// opens a new route via the depot when nothing is feasible. Always ends
// feasible.
Solution greedy_construct(const Instance& instance);

// First-improvement loop over intra-route 2-opt segment reversal,
// inter-route single-customer relocation (including into a fresh route),
// and inter-route customer swap. Every accepted move is re-verified
// feasible; cost never increases. The budget counts candidate move
// evaluations.
Solution local_search(const Instance& instance, const Solution& start,
                      int move_budget);

// greedy_construct followed by local_search.
Solution solve(const Instance& instance, int move_budget = kDefaultSearchBudget);

// 100 * (model_cost - ref_cost) / ref_cost; negative when the model wins.
double gap(double model_cost, double ref_cost);

}  // namespace fedroute
