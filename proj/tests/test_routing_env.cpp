#include <doctest.h>

#include <cmath>

#include "fedroute/baseline.hpp"
#include "fedroute/env.hpp"
#include "oracles.hpp"

using namespace fedroute;

namespace {

// Uniform choice among unmasked entries.
int random_feasible_action(const std::vector<char>& mask, Rng& rng) {
    int count = 0;
    for (char m : mask) count += m != 0;
    auto pick = static_cast<int>(rng.bounded(static_cast<std::uint64_t>(count)));
    for (int i = 0; i < static_cast<int>(mask.size()); ++i) {
        if (mask[static_cast<std::size_t>(i)] && pick-- == 0) return i;
    }
    return 0;
}

Solution random_rollout(const Instance& inst, Rng& rng, int* steps = nullptr) {
    DecodeState state = reset(inst);
    std::vector<int> actions;
    while (!state.done) {
        const auto mask = feasible_mask(inst, state);
        const int a = random_feasible_action(mask, rng);
        step_inplace(inst, state, a);
        actions.push_back(a);
    }
    if (steps) *steps = state.step_count;
    return actions_to_solution(actions);
}

}  // namespace

TEST_CASE("reset state") {
    Rng rng(5);
    const Instance inst = generate_instance(make_variant(false, false, false, true),
                                            4, rng);
    const DecodeState s = reset(inst);
    CHECK(s.current_node == 0);
    CHECK(s.done == false);
    CHECK(s.load_out == 0.0);
    CHECK(s.clock == 0.0);
    for (char v : s.visited) CHECK(v == 0);

    const DecodeState again = reset(inst);
    CHECK(again.visited == s.visited);
    CHECK(again.current_node == s.current_node);

    // the generation guarantee makes every customer feasible initially
    Rng rng1(6);
    const Instance one = generate_instance(make_variant(false, false, true, true),
                                           1, rng1);
    const auto mask = feasible_mask(one, reset(one));
    CHECK(mask[1] == 1);
}

TEST_CASE("mask semantics") {
    Instance inst;
    inst.spec = make_variant(false, false, false, false);
    inst.depot = {0.0, 0.0};
    inst.coords = {{0.1, 0.0}, {0.2, 0.0}};
    inst.demands = {0.5, 0.2};

    SUBCASE("capacity exclusion") {
        DecodeState s = reset(inst);
        s.load_out = 0.7;
        s.current_node = 1;  // pretend mid-route
        const auto mask = feasible_mask(inst, s);
        CHECK(mask[0] == 1);
        CHECK(mask[1] == 0);  // visited? no: 0.7 + 0.5 > 1
        CHECK(mask[2] == 1);  // 0.7 + 0.2 <= 1
    }

    SUBCASE("terminal funnel: all visited -> only depot") {
        DecodeState s = reset(inst);
        step_inplace(inst, s, 1);
        step_inplace(inst, s, 2);
        const auto mask = feasible_mask(inst, s);
        CHECK(mask[0] == 1);
        CHECK(mask[1] == 0);
        CHECK(mask[2] == 0);
        step_inplace(inst, s, 0);
        CHECK(s.done);
    }

    SUBCASE("no depot self-loop while customers remain") {
        const auto mask = feasible_mask(inst, reset(inst));
        CHECK(mask[0] == 0);
    }

    SUBCASE("open vs closed length budget") {
        // customer 2 reachable within L only if the return leg is free
        Instance li = inst;
        li.spec = make_variant(false, false, true, false);
        li.duration_limit = 0.7;
        li.coords = {{0.3, 0.0}, {0.45, 0.0}};
        DecodeState s = reset(li);
        step_inplace(li, s, 1);  // route_len 0.3, at node 1
        const auto closed_mask = feasible_mask(li, s);
        CHECK(closed_mask[2] == 0);  // 0.3 + 0.15 + 0.45 > 0.7

        Instance oi = li;
        oi.spec = make_variant(true, false, true, false);
        DecodeState so = reset(oi);
        step_inplace(oi, so, 1);
        const auto open_mask = feasible_mask(oi, so);
        CHECK(open_mask[2] == 1);  // 0.3 + 0.15 <= 0.7
    }
}

TEST_CASE("step updates") {
    SUBCASE("time-window clock with waiting") {
        Instance inst;
        inst.spec = make_variant(false, false, false, true);
        inst.depot = {0.0, 0.0};
        inst.coords = {{0.2, 0.0}};
        inst.demands = {0.1};
        inst.tw_start = {0.0, 0.5};
        inst.tw_end = {3.0, 1.0};
        inst.service = {0.2};
        DecodeState s = reset(inst);
        s.clock = 0.1;
        step_inplace(inst, s, 1);
        CHECK(s.clock == doctest::Approx(0.7).epsilon(1e-12));  // max(0.3,0.5)+0.2
    }

    SUBCASE("depot step resets accumulators and is rejected from the depot") {
        Rng rng(9);
        const Instance inst =
            generate_instance(make_variant(false, true, false, false), 5, rng);
        DecodeState s = reset(inst);
        CHECK_THROWS_AS(step_inplace(inst, s, 0), std::logic_error);
        step_inplace(inst, s, 2);
        CHECK(s.route_len > 0.0);
        step_inplace(inst, s, 0);
        CHECK(s.route_len == 0.0);
        CHECK(s.load_out == 0.0);
        CHECK(s.load_in == 0.0);
        CHECK(s.clock == 0.0);
        CHECK(!s.done);
    }

    SUBCASE("masked node is a contract violation") {
        Instance inst;
        inst.spec = make_variant(false, false, false, false);
        inst.depot = {0.0, 0.0};
        inst.coords = {{0.1, 0.0}};
        inst.demands = {0.9};
        DecodeState s = reset(inst);
        s.load_out = 0.5;
        CHECK_THROWS_AS(step_inplace(inst, s, 1), std::logic_error);
    }
}

TEST_CASE("features") {
    SUBCASE("static zero padding per variant") {
        Rng rng(2);
        const Instance cv = generate_instance(make_variant(false, false, false, false),
                                              3, rng);
        const RowMat f = static_features(cv);
        CHECK(f.rows() == 4);
        CHECK(f.cols() == 8);
        CHECK(f(0, 2) == 0.0);  // depot demand
        for (int i = 0; i <= 3; ++i) {
            CHECK(f(i, 3) == 0.0);
            CHECK(f(i, 4) == 0.0);
            CHECK(f(i, 5) == 0.0);
            CHECK(f(i, 6) == 0.0);
            CHECK(f(i, 7) == 0.0);
        }

        Rng rng2(2);
        const Instance full = generate_instance(make_variant(true, true, true, true),
                                                3, rng2);
        const RowMat g = static_features(full);
        for (int i = 1; i <= 3; ++i) {
            CHECK(g(i, 4) > 0.0);   // window end
            CHECK(g(i, 5) == 0.2);  // service
            CHECK(g(i, 6) == 1.0);  // open flag
            CHECK(g(i, 7) == 3.0);  // duration limit
        }
    }

    SUBCASE("dynamic features track the rollout") {
        Rng rng(3);
        const Instance inst =
            generate_instance(make_variant(false, false, false, false), 4, rng);
        DecodeState s = reset(inst);
        auto f = dynamic_features(inst, s);
        CHECK(f[0] == 1.0);
        CHECK(f[1] == 1.0);
        CHECK(f[2] == 1.0);  // no duration limit -> constant budget
        CHECK(f[3] == 0.0);  // no time windows -> zero clock feature

        step_inplace(inst, s, 1);
        f = dynamic_features(inst, s);
        CHECK(f[0] == doctest::Approx(1.0 - inst.demands[0]).epsilon(1e-12));
        CHECK(f[2] == 1.0);
    }
}

TEST_CASE("optional backhaul precedence masks deliveries after pickups") {
    Rng rng(99);
    Instance inst = generate_instance(make_variant(false, true, false, false), 6, rng);
    inst.demands = {0.2, -0.1, 0.2, -0.1, 0.2, 0.1};
    inst.backhaul_precedence = true;

    DecodeState s = reset(inst);
    step_inplace(inst, s, 1);  // linehaul ok
    step_inplace(inst, s, 2);  // pickup starts
    auto mask = feasible_mask(inst, s);
    CHECK(mask[3] == 0);  // linehaul now barred on this route
    CHECK(mask[4] == 1);  // further pickups fine
    step_inplace(inst, s, 0);
    mask = feasible_mask(inst, s);
    CHECK(mask[3] == 1);  // fresh route allows linehauls again

    inst.backhaul_precedence = false;
    DecodeState t = reset(inst);
    step_inplace(inst, t, 1);
    step_inplace(inst, t, 2);
    CHECK(feasible_mask(inst, t)[3] == 1);

    // the heuristic respects the rule end to end
    inst.backhaul_precedence = true;
    const Solution sol = solve(inst, 500);
    for (const auto& route : sol.routes) {
        bool picked_up = false;
        for (int node : route) {
            const double d = inst.demands[static_cast<std::size_t>(node - 1)];
            if (d < 0.0) picked_up = true;
            else CHECK(!picked_up);
        }
    }
}

TEST_CASE("mask soundness on random rollouts") {
    Rng rng(1234);
    for (const auto& spec : all_variants()) {
        for (int rep = 0; rep < 40; ++rep) {
            const Instance inst = generate_instance(spec, 12, rng);
            int steps = 0;
            const Solution sol = random_rollout(inst, rng, &steps);
            CHECK(steps <= 2 * 12 + 2);  // progress bound
            const FeasibilityReport rep_ = check_feasibility(inst, sol);
            if (!rep_.feasible) {
                CAPTURE(spec.name());
                CHECK(rep_.feasible);
            }
        }
    }
}

TEST_CASE("mask completeness by exhaustive tree walk (non-TW, small n)") {
    Rng rng(77);
    for (const auto& spec : all_variants()) {
        if (spec.time_windows) continue;
        const Instance inst = generate_instance(spec, 5, rng);
        // enumerate_mask_tree throws if any branch dead-ends
        CHECK(oracles::enumerate_mask_tree(inst) > 0);
    }
}

TEST_CASE("variant monotonicity: relaxing a constraint never shrinks the mask") {
    Rng rng(4242);
    const VariantSpec strict_spec = make_variant(false, true, true, true);
    for (int rep = 0; rep < 25; ++rep) {
        const Instance strict = generate_instance(strict_spec, 8, rng);

        Instance no_tw = strict;
        no_tw.spec.time_windows = false;
        no_tw.tw_start.clear();
        no_tw.tw_end.clear();
        no_tw.service.clear();

        Instance no_limit = strict;
        no_limit.spec.duration_limit = false;
        no_limit.duration_limit.reset();

        Instance opened = strict;
        opened.spec.open = true;

        DecodeState s = reset(strict);
        DecodeState s_tw = reset(no_tw);
        DecodeState s_l = reset(no_limit);
        DecodeState s_o = reset(opened);
        while (!s.done) {
            const auto mask = feasible_mask(strict, s);
            for (std::size_t i = 0; i < mask.size(); ++i) {
                if (!mask[i]) continue;
                if (!s_tw.done) CHECK(feasible_mask(no_tw, s_tw)[i] == 1);
                if (!s_l.done) CHECK(feasible_mask(no_limit, s_l)[i] == 1);
                if (!s_o.done) CHECK(feasible_mask(opened, s_o)[i] == 1);
            }
            const int a = random_feasible_action(mask, rng);
            step_inplace(strict, s, a);
            if (!s_tw.done) step_inplace(no_tw, s_tw, a);
            if (!s_l.done) step_inplace(no_limit, s_l, a);
            if (!s_o.done) step_inplace(opened, s_o, a);
        }
    }
}
