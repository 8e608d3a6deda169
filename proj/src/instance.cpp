#include "fedroute/instance.hpp"

#include <stdexcept>

namespace fedroute {

namespace {

// Demand scale: MVMoE-style capacity denominators, scaled for desk sizes.
int demand_scale(int n) {
    if (n <= 20) return 30;
    if (n <= 50) return 40;
    return 50;
}

// With time windows the single-customer round trip must fit into the depot
// window: 2*d + service <= 3 and the earliest-start interval below must be
// non-empty, which needs d <= 1.4. Resample the rare corner-to-corner draw.
constexpr double kMaxDepotDist = 1.39;

}  // namespace

Instance generate_instance(const VariantSpec& spec, int n, Rng& rng) {
    if (n < 1) throw std::invalid_argument("generate_instance: n must be >= 1");

    Instance inst;
    inst.spec = spec;
    inst.capacity = 1.0;
    inst.depot = {rng.uniform01(), rng.uniform01()};

    inst.coords.resize(static_cast<std::size_t>(n));
    for (auto& c : inst.coords) {
        c = {rng.uniform01(), rng.uniform01()};
        if (spec.time_windows) {
            while (std::hypot(c[0] - inst.depot[0], c[1] - inst.depot[1]) >
                   kMaxDepotDist) {
                c = {rng.uniform01(), rng.uniform01()};
            }
        }
    }

    const double scale = demand_scale(n);
    inst.demands.resize(static_cast<std::size_t>(n));
    for (auto& d : inst.demands) {
        d = static_cast<double>(rng.uniform_int(1, 9)) / scale;
    }

    if (spec.backhaul) {
        std::vector<char> is_backhaul(static_cast<std::size_t>(n));
        int count = 0;
        for (auto& b : is_backhaul) {
            b = rng.bernoulli(kBackhaulProb) ? 1 : 0;
            count += b;
        }
        if (count == 0) {
            is_backhaul[static_cast<std::size_t>(rng.bounded(
                static_cast<std::uint64_t>(n)))] = 1;
            count = 1;
        }
        if (count == n && n >= 2) {
            is_backhaul[static_cast<std::size_t>(rng.bounded(
                static_cast<std::uint64_t>(n)))] = 0;
        }
        for (int i = 0; i < n; ++i) {
            if (is_backhaul[static_cast<std::size_t>(i)]) {
                inst.demands[static_cast<std::size_t>(i)] =
                    -inst.demands[static_cast<std::size_t>(i)];
            }
        }
    }

    if (spec.duration_limit) inst.duration_limit = kDurationLimit;

    if (spec.time_windows) {
        inst.tw_start.assign(static_cast<std::size_t>(n + 1), 0.0);
        inst.tw_end.assign(static_cast<std::size_t>(n + 1), 0.0);
        inst.service.assign(static_cast<std::size_t>(n), kServiceTime);
        inst.tw_start[0] = 0.0;
        inst.tw_end[0] = kDepotDueTime;
        for (int i = 1; i <= n; ++i) {
            const double d0 = inst.dist(0, i);
            // Earliest start no sooner than arrival from the depot, late
            // enough that service plus the return leg fits the depot window.
            const double lo = d0;
            const double hi = kDepotDueTime - kServiceTime - d0;
            const double e = rng.uniform(lo, hi);
            const double width = rng.uniform(kTwWidthMin, kTwWidthMax);
            inst.tw_start[static_cast<std::size_t>(i)] = e;
            inst.tw_end[static_cast<std::size_t>(i)] = e + width;
        }
    }

    return inst;
}

Instance augment8(const Instance& instance, int k) {
    if (k < 0 || k > 7) throw std::invalid_argument("augment8: k must be in 0..7");
    auto xf = [k](std::array<double, 2> p) -> std::array<double, 2> {
        const double x = p[0];
        const double y = p[1];
        switch (k) {
            case 0: return {x, y};
            case 1: return {1.0 - x, y};
            case 2: return {x, 1.0 - y};
            case 3: return {1.0 - x, 1.0 - y};
            case 4: return {y, x};
            case 5: return {1.0 - y, x};
            case 6: return {y, 1.0 - x};
            default: return {1.0 - y, 1.0 - x};
        }
    };
    Instance out = instance;
    out.depot = xf(out.depot);
    for (auto& c : out.coords) c = xf(c);
    return out;
}

}  // namespace fedroute
