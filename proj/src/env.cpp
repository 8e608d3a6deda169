#include "fedroute/env.hpp"

#include <stdexcept>

namespace fedroute {

DecodeState reset(const Instance& instance) {
    DecodeState s;
    s.visited.assign(static_cast<std::size_t>(instance.n()), 0);
    return s;
}

namespace {

bool customer_feasible(const Instance& inst, const DecodeState& s, int i) {
    if (s.visited[static_cast<std::size_t>(i - 1)]) return false;

    const double demand = inst.demands[static_cast<std::size_t>(i - 1)];
    if (demand > 0.0) {
        if (s.load_out + demand > inst.capacity) return false;
        // optional rule: no deliveries once pickups started on this route
        if (inst.backhaul_precedence && s.load_in > 0.0) return false;
    } else {
        if (s.load_in - demand > inst.capacity) return false;
    }

    const double leg = inst.dist(s.current_node, i);
    if (inst.duration_limit) {
        const double closure = inst.spec.open ? 0.0 : inst.dist(i, 0);
        if (s.route_len + leg + closure > *inst.duration_limit) return false;
    }

    if (inst.spec.time_windows) {
        const auto idx = static_cast<std::size_t>(i);
        const double arrival = s.clock + leg;
        if (arrival > inst.tw_end[idx]) return false;
        if (!inst.spec.open) {
            const double start = std::max(arrival, inst.tw_start[idx]);
            const double finish = start + inst.service[idx - 1];
            if (finish + inst.dist(i, 0) > inst.tw_end[0]) return false;
        }
    }
    return true;
}

}  // namespace

std::vector<char> feasible_mask(const Instance& instance,
                                const DecodeState& state) {
    if (state.done)
        throw std::logic_error("feasible_mask: rollout already finished");

    const int n = instance.n();
    std::vector<char> mask(static_cast<std::size_t>(n) + 1, 0);
    bool any_customer = false;
    for (int i = 1; i <= n; ++i) {
        if (customer_feasible(instance, state, i)) {
            mask[static_cast<std::size_t>(i)] = 1;
            any_customer = true;
        }
    }
    // Depot: no self-loop while customers remain; always reachable mid-route.
    mask[0] = (state.current_node != 0 || state.all_visited(n)) ? 1 : 0;

    if (!any_customer && !mask[0]) {
        throw std::runtime_error(
            "feasible_mask: no feasible action but customers remain "
            "(instance violates the single-customer feasibility guarantee)");
    }
    return mask;
}

void step_inplace(const Instance& instance, DecodeState& state, int node) {
    if (state.done) throw std::logic_error("step: rollout already finished");
    const int n = instance.n();

    if (node == 0) {
        if (state.current_node == 0 && !state.all_visited(n))
            throw std::logic_error("step: depot self-loop before completion");
        state.current_node = 0;
        state.load_out = 0.0;
        state.load_in = 0.0;
        state.route_len = 0.0;
        state.clock = 0.0;
        ++state.step_count;
        if (state.all_visited(n)) state.done = true;
        return;
    }

    if (node < 1 || node > n) throw std::invalid_argument("step: bad node index");
    if (!customer_feasible(instance, state, node))
        throw std::logic_error("step: node is masked infeasible");

    const double leg = instance.dist(state.current_node, node);
    state.route_len += leg;
    if (instance.spec.time_windows) {
        const auto idx = static_cast<std::size_t>(node);
        const double arrival = state.clock + leg;
        state.clock = std::max(arrival, instance.tw_start[idx]) +
                      instance.service[idx - 1];
    }
    const double demand = instance.demands[static_cast<std::size_t>(node - 1)];
    if (demand > 0.0) state.load_out += demand;
    else state.load_in += -demand;

    state.visited[static_cast<std::size_t>(node - 1)] = 1;
    ++state.num_visited;
    state.current_node = node;
    ++state.step_count;
    if (instance.spec.open && state.all_visited(n)) state.done = true;
}

DecodeState step(const Instance& instance, const DecodeState& state, int node) {
    DecodeState next = state;
    step_inplace(instance, next, node);
    return next;
}

RowMat static_features(const Instance& instance) {
    const int n = instance.n();
    RowMat feats = RowMat::Zero(n + 1, kStaticFeatureDim);
    const double open_flag = instance.spec.open ? 1.0 : 0.0;
    const double limit = instance.duration_limit ? *instance.duration_limit : 0.0;
    for (int node = 0; node <= n; ++node) {
        const auto& p = instance.point(node);
        feats(node, 0) = p[0];
        feats(node, 1) = p[1];
        feats(node, 2) =
            node == 0 ? 0.0 : instance.demands[static_cast<std::size_t>(node - 1)];
        if (instance.spec.time_windows) {
            feats(node, 3) = instance.tw_start[static_cast<std::size_t>(node)];
            feats(node, 4) = instance.tw_end[static_cast<std::size_t>(node)];
            feats(node, 5) =
                node == 0 ? 0.0 : instance.service[static_cast<std::size_t>(node - 1)];
        }
        feats(node, 6) = open_flag;
        feats(node, 7) = limit;
    }
    return feats;
}

std::array<double, kDynFeatureDim> dynamic_features(const Instance& instance,
                                                    const DecodeState& state) {
    std::array<double, kDynFeatureDim> f{};
    f[0] = instance.capacity - state.load_out;
    f[1] = instance.capacity - state.load_in;
    f[2] = instance.duration_limit
               ? (*instance.duration_limit - state.route_len) / *instance.duration_limit
               : 1.0;
    f[3] = instance.spec.time_windows ? state.clock / instance.tw_end[0] : 0.0;
    return f;
}

Solution actions_to_solution(const std::vector<int>& actions) {
    Solution sol;
    std::vector<int> route;
    for (int a : actions) {
        if (a == 0) {
            if (!route.empty()) sol.routes.push_back(std::move(route));
            route.clear();
        } else {
            route.push_back(a);
        }
    }
    if (!route.empty()) sol.routes.push_back(std::move(route));
    return sol;
}

}  // namespace fedroute
