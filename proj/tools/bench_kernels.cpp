// Times the OpenMP batch kernels against their serial reference twins.
// Usage: bench_kernels [batch_size] [n] [repeats]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>

#include "fedroute/metrics.hpp"
#include "fedroute/parallel.hpp"
#include "fedroute/train.hpp"

namespace {

double time_best_of(int repeats, const std::function<void()>& fn) {
    double best = 1e300;
    for (int r = 0; r < repeats; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        const double s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                .count();
        if (s < best) best = s;
    }
    return best;
}

}  // namespace

int main(int argc, char** argv) {
    using namespace fedroute;
    const int batch = argc > 1 ? std::atoi(argv[1]) : 64;
    const int n = argc > 2 ? std::atoi(argv[2]) : 10;
    const int repeats = argc > 3 ? std::atoi(argv[3]) : 3;

    ArchConfig arch;
    const ParamVector params = init_params(arch, 7);
    TrainConfig cfg;
    cfg.batch_size = batch;
    cfg.num_starts = 8;
    GeneratorSampler sampler(make_variant(false, false, false, true), n, 99);

    std::printf("threads available: %d\n", max_threads());
    std::printf("%-28s %12s %12s %8s\n", "kernel", "serial[s]", "parallel[s]",
                "speedup");

    const double t_batch_ser = time_best_of(repeats, [&] {
        compute_batch_reference(params, sampler, cfg, 0, 0, 42);
    });
    const double t_batch_par = time_best_of(repeats, [&] {
        compute_batch(params, sampler, cfg, 0, 0, 42);
    });
    std::printf("%-28s %12.4f %12.4f %7.2fx\n",
                ("batch grad (B=" + std::to_string(batch) + ")").c_str(),
                t_batch_ser, t_batch_par, t_batch_ser / t_batch_par);

    EvalSet set;
    set.variant = make_variant(false, false, false, true);
    set.n = n;
    for (int k = 0; k < batch; ++k) {
        Rng rng(mix_seed(5, static_cast<std::uint64_t>(k)));
        set.instances.push_back(generate_instance(set.variant, n, rng));
        set.ref_costs.push_back(1.0);
    }
    const double t_eval_ser = time_best_of(repeats, [&] {
        evaluate_model_reference(params, set, 8);
    });
    const double t_eval_par = time_best_of(repeats, [&] {
        evaluate_model(params, set, 8);
    });
    std::printf("%-28s %12.4f %12.4f %7.2fx\n",
                ("eval x8 aug (" + std::to_string(batch) + " inst)").c_str(),
                t_eval_ser, t_eval_par, t_eval_ser / t_eval_par);
    return 0;
}
