#include "fedroute/train.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "fedroute/parallel.hpp"

namespace fedroute {

GeneratorSampler::GeneratorSampler(VariantSpec variant, int n, std::uint64_t seed,
                                   std::size_t cap, bool backhaul_precedence)
    : variant_(variant), n_(n), seed_(seed),
      backhaul_precedence_(backhaul_precedence) {
    if (n < 1) throw std::invalid_argument("GeneratorSampler: n must be >= 1");
    pool_.reserve(cap);
    for (std::size_t k = 0; k < cap; ++k) {
        Rng rng(mix_seed(seed_, kPoolStream, k));
        pool_.push_back(generate_instance(variant_, n_, rng));
        pool_.back().backhaul_precedence = backhaul_precedence_;
    }
}

std::pair<VariantSpec, Instance> GeneratorSampler::sample(long epoch, int step,
                                                          int slot) const {
    count_access();
    const std::uint64_t draw =
        mix_seed(seed_, kInstanceStream, static_cast<std::uint64_t>(epoch),
                 static_cast<std::uint64_t>(step), static_cast<std::uint64_t>(slot));
    if (!pool_.empty()) {
        return {variant_, pool_[draw % pool_.size()]};
    }
    Rng rng(draw);
    Instance inst = generate_instance(variant_, n_, rng);
    inst.backhaul_precedence = backhaul_precedence_;
    return {variant_, std::move(inst)};
}

MixedSampler::MixedSampler(std::vector<VariantSpec> variants, int n,
                           std::uint64_t seed, bool backhaul_precedence)
    : variants_(std::move(variants)), n_(n), seed_(seed),
      backhaul_precedence_(backhaul_precedence) {
    if (variants_.empty())
        throw std::invalid_argument("MixedSampler: empty variant set");
    if (n < 1) throw std::invalid_argument("MixedSampler: n must be >= 1");
}

std::pair<VariantSpec, Instance> MixedSampler::sample(long epoch, int step,
                                                      int slot) const {
    count_access();
    const std::uint64_t pick =
        mix_seed(seed_, kVariantStream, static_cast<std::uint64_t>(epoch),
                 static_cast<std::uint64_t>(step));
    const VariantSpec variant = variants_[pick % variants_.size()];
    Rng rng(mix_seed(seed_, kInstanceStream, static_cast<std::uint64_t>(epoch),
                     static_cast<std::uint64_t>(step),
                     static_cast<std::uint64_t>(slot)));
    Instance inst = generate_instance(variant, n_, rng);
    inst.backhaul_precedence = backhaul_precedence_;
    return {variant, std::move(inst)};
}

OptState make_opt_state(std::size_t len, double lr, double weight_decay) {
    OptState s;
    s.m.assign(len, 0.0);
    s.v.assign(len, 0.0);
    s.lr = lr;
    s.weight_decay = weight_decay;
    return s;
}

void opt_step(OptState& opt, ParamVector& params, const GradVector& grad) {
    if (opt.m.size() != params.data.size() || grad.data.size() != params.data.size())
        throw std::invalid_argument("opt_step: layout mismatch");
    for (double g : grad.data) {
        if (!std::isfinite(g))
            throw std::invalid_argument("opt_step: non-finite gradient");
    }
    opt.t += 1;
    const double bc1 = 1.0 - std::pow(opt.beta1, static_cast<double>(opt.t));
    const double bc2 = 1.0 - std::pow(opt.beta2, static_cast<double>(opt.t));
    for (std::size_t i = 0; i < params.data.size(); ++i) {
        const double g = grad.data[i];
        opt.m[i] = opt.beta1 * opt.m[i] + (1.0 - opt.beta1) * g;
        opt.v[i] = opt.beta2 * opt.v[i] + (1.0 - opt.beta2) * g * g;
        const double mhat = opt.m[i] / bc1;
        const double vhat = opt.v[i] / bc2;
        params.data[i] -= opt.lr * (mhat / (std::sqrt(vhat) + opt.eps) +
                                    opt.weight_decay * params.data[i]);
    }
}

std::vector<double> pomo_weights(std::span<const double> costs) {
    if (costs.size() < 2)
        throw std::invalid_argument("pomo_weights: shared baseline needs >= 2 starts");
    double mean = 0.0;
    for (double c : costs) mean += c;
    mean /= static_cast<double>(costs.size());
    std::vector<double> w(costs.size());
    for (std::size_t j = 0; j < costs.size(); ++j) {
        w[j] = (costs[j] - mean) / static_cast<double>(costs.size());
    }
    return w;
}

namespace {

struct SlotResult {
    GradVector grad;
    double sample_cost_sum = 0.0;
    int sample_count = 0;
    double greedy_cost = 0.0;
    std::string variant;
};

SlotResult run_slot(const ParamVector& params, const InstanceSampler& sampler,
                    const TrainConfig& cfg, long epoch, int step, int slot,
                    std::uint64_t epoch_seed) {
    SlotResult r;
    auto [variant, instance] = sampler.sample(epoch, step, slot);
    r.variant = variant.name();

    const int starts = std::min(cfg.num_starts, instance.n());
    Rng rng(mix_seed(epoch_seed, kRolloutStream, static_cast<std::uint64_t>(step),
                     static_cast<std::uint64_t>(slot)));
    const std::vector<Trajectory> trajs =
        rollout(params, instance, starts, DecodeMode::sample, &rng);

    std::vector<double> costs(trajs.size());
    for (std::size_t j = 0; j < trajs.size(); ++j) {
        costs[j] = trajs[j].cost;
        r.sample_cost_sum += trajs[j].cost;
    }
    r.sample_count = static_cast<int>(trajs.size());

    const std::vector<double> weights = pomo_weights(costs);
    r.grad = grad_weighted_logprob(params, trajs, weights);

    if (cfg.greedy_stats) {
        const std::vector<Trajectory> greedy =
            rollout(params, instance, starts, DecodeMode::greedy);
        double best = std::numeric_limits<double>::infinity();
        for (const auto& t : greedy) best = std::min(best, t.cost);
        r.greedy_cost = best;
    }
    return r;
}

BatchResult reduce_slots(const ParamVector& params, std::vector<SlotResult>& slots) {
    BatchResult out{zeros_like(params), 0.0, 0, 0.0, {}};
    for (auto& s : slots) {
        for (std::size_t i = 0; i < out.grad.data.size(); ++i)
            out.grad.data[i] += s.grad.data[i];
        out.sample_cost_sum += s.sample_cost_sum;
        out.sample_count += s.sample_count;
        out.greedy_cost_sum += s.greedy_cost;
        out.variants.push_back(std::move(s.variant));
    }
    const double inv = 1.0 / static_cast<double>(slots.size());
    for (double& g : out.grad.data) g *= inv;
    return out;
}

}  // namespace

BatchResult compute_batch(const ParamVector& params, const InstanceSampler& sampler,
                          const TrainConfig& cfg, long epoch, int step,
                          std::uint64_t epoch_seed) {
    std::vector<SlotResult> slots(static_cast<std::size_t>(cfg.batch_size));
    parallel_for(slots.size(), [&](std::size_t i) {
        slots[i] = run_slot(params, sampler, cfg, epoch, step,
                            static_cast<int>(i), epoch_seed);
    });
    return reduce_slots(params, slots);
}

BatchResult compute_batch_reference(const ParamVector& params,
                                    const InstanceSampler& sampler,
                                    const TrainConfig& cfg, long epoch, int step,
                                    std::uint64_t epoch_seed) {
    std::vector<SlotResult> slots(static_cast<std::size_t>(cfg.batch_size));
    for (std::size_t i = 0; i < slots.size(); ++i) {
        slots[i] = run_slot(params, sampler, cfg, epoch, step,
                            static_cast<int>(i), epoch_seed);
    }
    return reduce_slots(params, slots);
}

EpochStats train_epoch(ParamVector& params, OptState& opt,
                       const InstanceSampler& sampler, const TrainConfig& cfg,
                       long epoch, std::uint64_t epoch_seed) {
    if (cfg.batch_size < 1 || cfg.instances_per_epoch < 1 || cfg.num_starts < 1)
        throw std::invalid_argument("train_epoch: counts must be positive");
    const int steps = cfg.instances_per_epoch / cfg.batch_size;
    if (steps < 1)
        throw std::invalid_argument(
            "train_epoch: instances_per_epoch smaller than batch_size");

    const auto t0 = std::chrono::steady_clock::now();
    double sample_sum = 0.0;
    long long sample_count = 0;
    double greedy_sum = 0.0;
    long long greedy_count = 0;
    std::map<std::string, int> mix;

    for (int step = 0; step < steps; ++step) {
        BatchResult batch = compute_batch(params, sampler, cfg, epoch, step, epoch_seed);
        opt_step(opt, params, batch.grad);
        sample_sum += batch.sample_cost_sum;
        sample_count += batch.sample_count;
        greedy_sum += batch.greedy_cost_sum;
        greedy_count += cfg.batch_size;
        for (const auto& v : batch.variants) ++mix[v];
    }

    EpochStats stats;
    stats.mean_sample_cost = sample_sum / static_cast<double>(sample_count);
    stats.mean_greedy_cost = cfg.greedy_stats
                                 ? greedy_sum / static_cast<double>(greedy_count)
                                 : std::numeric_limits<double>::quiet_NaN();
    std::string mix_str;
    for (const auto& [name, count] : mix) {
        if (!mix_str.empty()) mix_str += ';';
        mix_str += name + ":" + std::to_string(count);
    }
    stats.variant_mix = std::move(mix_str);
    stats.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return stats;
}

ParamVector pretrain(const ArchConfig& arch, const std::vector<VariantSpec>& variants,
                     int n, int epochs, const TrainConfig& cfg, std::uint64_t seed,
                     std::vector<EpochLogRow>* log) {
    if (variants.empty()) throw std::invalid_argument("pretrain: empty variant set");
    ParamVector params = init_params(arch, mix_seed(seed, kInitStream));
    OptState opt = make_opt_state(params.size(), cfg.lr, cfg.weight_decay);
    MixedSampler sampler(variants, n, mix_seed(seed, kInstanceStream));
    for (int e = 0; e < epochs; ++e) {
        EpochStats s =
            train_epoch(params, opt, sampler, cfg, e, mix_seed(seed, kEpochStream,
                                                               static_cast<std::uint64_t>(e)));
        if (log) {
            log->push_back({e, s.variant_mix, s.mean_sample_cost, s.mean_greedy_cost,
                            s.wall_time_s});
        }
    }
    return params;
}

}  // namespace fedroute
