#include "fedroute/baseline.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>

#include "fedroute/env.hpp"

namespace fedroute {

Solution greedy_construct(const Instance& instance) {
    DecodeState state = reset(instance);
    std::vector<int> actions;
    while (!state.done) {
        const std::vector<char> mask = feasible_mask(instance, state);
        int best = -1;
        double best_dist = 0.0;
        for (int i = 1; i <= instance.n(); ++i) {
            if (!mask[static_cast<std::size_t>(i)]) continue;
            const double d = instance.dist(state.current_node, i);
            if (best < 0 || d < best_dist) {
                best = i;
                best_dist = d;
            }
        }
        const int action = best >= 0 ? best : 0;
        step_inplace(instance, state, action);
        actions.push_back(action);
    }
    return actions_to_solution(actions);
}

namespace {

// Route cost plus feasibility under capacity / duration / time windows.
// Coverage is untouched by the moves below, so it is not rechecked here.
std::optional<double> route_cost_if_feasible(const Instance& inst,
                                             const std::vector<int>& route) {
    double load_out = 0.0;
    double load_in = 0.0;
    for (int node : route) {
        const double d = inst.demands[static_cast<std::size_t>(node - 1)];
        if (d > 0.0) {
            if (inst.backhaul_precedence && load_in > 0.0) return std::nullopt;
            load_out += d;
        } else {
            load_in += -d;
        }
    }
    if (load_out > inst.capacity || load_in > inst.capacity) return std::nullopt;

    double len = 0.0;
    int prev = 0;
    for (int node : route) {
        len += inst.dist(prev, node);
        prev = node;
    }
    if (!inst.spec.open) len += inst.dist(prev, 0);
    if (inst.duration_limit && len > *inst.duration_limit) return std::nullopt;

    if (inst.spec.time_windows) {
        double clock = 0.0;
        prev = 0;
        for (int node : route) {
            const auto idx = static_cast<std::size_t>(node);
            const double arrival = clock + inst.dist(prev, node);
            if (arrival > inst.tw_end[idx]) return std::nullopt;
            clock = std::max(arrival, inst.tw_start[idx]) + inst.service[idx - 1];
            prev = node;
        }
        if (!inst.spec.open && clock + inst.dist(prev, 0) > inst.tw_end[0])
            return std::nullopt;
    }
    return len;
}

constexpr double kImprovementEps = 1e-9;

}  // namespace

Solution local_search(const Instance& instance, const Solution& start,
                      int move_budget) {
    if (!check_feasibility(instance, start).feasible)
        throw std::invalid_argument("local_search: infeasible starting solution");

    Solution sol = start;
    std::vector<double> route_cost(sol.routes.size());
    for (std::size_t r = 0; r < sol.routes.size(); ++r) {
        route_cost[r] = *route_cost_if_feasible(instance, sol.routes[r]);
    }

    int evals = 0;
    bool improved = true;
    while (improved && evals < move_budget) {
        improved = false;

        // Intra-route 2-opt: reverse [i, j]. Schedules are re-simulated in
        // full; reversal changes arrival times under time windows.
        for (std::size_t r = 0; r < sol.routes.size() && !improved; ++r) {
            auto& route = sol.routes[r];
            const auto len = route.size();
            for (std::size_t i = 0; i + 1 < len && !improved; ++i) {
                for (std::size_t j = i + 1; j < len && !improved; ++j) {
                    if (evals >= move_budget) break;
                    ++evals;
                    std::vector<int> cand = route;
                    std::reverse(cand.begin() + static_cast<std::ptrdiff_t>(i),
                                 cand.begin() + static_cast<std::ptrdiff_t>(j) + 1);
                    const auto cost = route_cost_if_feasible(instance, cand);
                    if (cost && *cost < route_cost[r] - kImprovementEps) {
                        route = std::move(cand);
                        route_cost[r] = *cost;
                        improved = true;
                    }
                }
            }
        }
        if (improved) continue;

        // Segment relocate (lengths 1 and 2): re-insert a run of customers
        // elsewhere in its own route, into another route, or as a fresh
        // route. Length 2 lets two-customer routes merge away in one move.
        for (std::size_t seg_len = 1; seg_len <= 2 && !improved; ++seg_len) {
            for (std::size_t a = 0; a < sol.routes.size() && !improved; ++a) {
                if (sol.routes[a].size() < seg_len) continue;
                for (std::size_t i = 0;
                     i + seg_len <= sol.routes[a].size() && !improved; ++i) {
                    const std::vector<int> seg(
                        sol.routes[a].begin() + static_cast<std::ptrdiff_t>(i),
                        sol.routes[a].begin() + static_cast<std::ptrdiff_t>(i + seg_len));
                    std::vector<int> src = sol.routes[a];
                    src.erase(src.begin() + static_cast<std::ptrdiff_t>(i),
                              src.begin() + static_cast<std::ptrdiff_t>(i + seg_len));
                    const auto src_cost =
                        src.empty() ? std::optional<double>(0.0)
                                    : route_cost_if_feasible(instance, src);
                    if (!src_cost) continue;

                    // b == routes.size() stands for a new empty route
                    for (std::size_t b = 0; b <= sol.routes.size() && !improved; ++b) {
                        const bool same = b == a;
                        const bool fresh = b == sol.routes.size();
                        if (fresh && src.empty()) continue;
                        if (same && src.empty()) continue;
                        const std::vector<int>& base =
                            same ? src : (fresh ? seg /*unused*/ : sol.routes[b]);
                        const std::size_t positions =
                            fresh ? 1 : base.size() + 1;
                        for (std::size_t pos = 0; pos < positions; ++pos) {
                            if (same && pos == i) continue;  // identity move
                            if (evals >= move_budget) break;
                            ++evals;
                            std::vector<int> dst =
                                fresh ? std::vector<int>{} : base;
                            dst.insert(dst.begin() + static_cast<std::ptrdiff_t>(pos),
                                       seg.begin(), seg.end());
                            const auto dst_cost = route_cost_if_feasible(instance, dst);
                            if (!dst_cost) continue;
                            double before = route_cost[a];
                            if (!same && !fresh) before += route_cost[b];
                            const double after =
                                same ? *dst_cost : (*src_cost + *dst_cost);
                            if (after - before >= -kImprovementEps) continue;

                            if (same) {
                                sol.routes[a] = std::move(dst);
                                route_cost[a] = *dst_cost;
                            } else {
                                if (fresh) {
                                    sol.routes.push_back(std::move(dst));
                                    route_cost.push_back(*dst_cost);
                                } else {
                                    sol.routes[b] = std::move(dst);
                                    route_cost[b] = *dst_cost;
                                }
                                sol.routes[a] = src;
                                route_cost[a] = *src_cost;
                                if (sol.routes[a].empty()) {
                                    sol.routes.erase(sol.routes.begin() +
                                                     static_cast<std::ptrdiff_t>(a));
                                    route_cost.erase(route_cost.begin() +
                                                     static_cast<std::ptrdiff_t>(a));
                                }
                            }
                            improved = true;
                            break;
                        }
                    }
                }
            }
        }
        if (improved) continue;

        // Inter-route swap: exchange two customers across routes; catches
        // pair moves where each single relocate worsens on its own.
        for (std::size_t a = 0; a < sol.routes.size() && !improved; ++a) {
            for (std::size_t b = a + 1; b < sol.routes.size() && !improved; ++b) {
                for (std::size_t i = 0; i < sol.routes[a].size() && !improved; ++i) {
                    for (std::size_t j = 0; j < sol.routes[b].size(); ++j) {
                        if (evals >= move_budget) break;
                        ++evals;
                        std::vector<int> ra = sol.routes[a];
                        std::vector<int> rb = sol.routes[b];
                        std::swap(ra[i], rb[j]);
                        const auto ca = route_cost_if_feasible(instance, ra);
                        if (!ca) continue;
                        const auto cb = route_cost_if_feasible(instance, rb);
                        if (!cb) continue;
                        const double delta =
                            (*ca + *cb) - (route_cost[a] + route_cost[b]);
                        if (delta < -kImprovementEps) {
                            sol.routes[a] = std::move(ra);
                            sol.routes[b] = std::move(rb);
                            route_cost[a] = *ca;
                            route_cost[b] = *cb;
                            improved = true;
                            break;
                        }
                    }
                }
            }
        }
    }
    return sol;
}

Solution solve(const Instance& instance, int move_budget) {
    return local_search(instance, greedy_construct(instance), move_budget);
}

double gap(double model_cost, double ref_cost) {
    if (ref_cost <= 0.0)
        throw std::invalid_argument("gap: reference cost must be positive");
    return 100.0 * (model_cost - ref_cost) / ref_cost;
}

}  // namespace fedroute
