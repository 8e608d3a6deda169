#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fedroute/policy.hpp"

namespace fedroute {

// Named sub-streams carved out of one experiment seed.
enum SeedStream : std::uint64_t {
    kInitStream = 1,
    kVariantStream = 2,
    kInstanceStream = 3,
    kRolloutStream = 4,
    kEpochStream = 5,
    kSelectStream = 6,
    kClientStream = 7,
    kEvalStream = 8,
    kPoolStream = 9,
};

// Deterministic instance source: the (epoch, step, slot) triple fully
// determines a draw, independent of thread scheduling and of the variant
// selection stream. Implementations count accesses so tests can assert the
// client/server privacy boundary.
class InstanceSampler {
  public:
    virtual ~InstanceSampler() = default;
    virtual std::pair<VariantSpec, Instance> sample(long epoch, int step,
                                                    int slot) const = 0;
    virtual int problem_size() const = 0;
    long long accesses() const { return accesses_.load(); }

  protected:
    void count_access() const { accesses_.fetch_add(1, std::memory_order_relaxed); }

  private:
    mutable std::atomic<long long> accesses_{0};
};

// Single-variant source. With cap == 0 instances are generated fresh from
// the per-draw seed; with cap > 0 draws come from a fixed pool of `cap`
// instances (the data-scarcity regime).
class GeneratorSampler final : public InstanceSampler {
  public:
    GeneratorSampler(VariantSpec variant, int n, std::uint64_t seed,
                     std::size_t cap = 0, bool backhaul_precedence = false);
    std::pair<VariantSpec, Instance> sample(long epoch, int step,
                                            int slot) const override;
    int problem_size() const override { return n_; }
    VariantSpec variant() const { return variant_; }

  private:
    VariantSpec variant_;
    int n_;
    std::uint64_t seed_;
    bool backhaul_precedence_;
    std::vector<Instance> pool_;
};

// Uniform per-batch variant mixture; every slot of one (epoch, step) batch
// shares the variant. A singleton mixture reproduces GeneratorSampler's
// stream exactly.
class MixedSampler final : public InstanceSampler {
  public:
    MixedSampler(std::vector<VariantSpec> variants, int n, std::uint64_t seed,
                 bool backhaul_precedence = false);
    std::pair<VariantSpec, Instance> sample(long epoch, int step,
                                            int slot) const override;
    int problem_size() const override { return n_; }

  private:
    std::vector<VariantSpec> variants_;
    int n_;
    std::uint64_t seed_;
    bool backhaul_precedence_;
};

// Adaptive moment estimation with decoupled weight decay and bias correction.
struct OptState {
    std::vector<double> m, v;
    long t = 0;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    double lr = 1e-4;
    double weight_decay = 1e-6;
};

OptState make_opt_state(std::size_t len, double lr, double weight_decay);

// One optimizer step in place; rejects non-finite gradients.
void opt_step(OptState& opt, ParamVector& params, const GradVector& grad);

// Per-trajectory REINFORCE coefficients w_j = (L_j - mean(L)) / num_starts,
// so grad_weighted_logprob yields the shared-baseline estimator for
// minimization. Requires at least two starts.
std::vector<double> pomo_weights(std::span<const double> costs);

struct TrainConfig {
    int batch_size = 64;
    int instances_per_epoch = 1024;
    int num_starts = 8;  // capped at n per instance
    double lr = 1e-4;
    double weight_decay = 1e-6;
    bool greedy_stats = true;
};

struct EpochStats {
    double mean_sample_cost = 0.0;
    double mean_greedy_cost = 0.0;  // NaN when greedy_stats is off
    std::string variant_mix;        // "NAME:count" pairs, sorted
    double wall_time_s = 0.0;
};

struct BatchResult {
    GradVector grad;  // mean over the batch
    double sample_cost_sum = 0.0;
    long long sample_count = 0;
    double greedy_cost_sum = 0.0;
    std::vector<std::string> variants;  // one per slot
};

// Per-batch rollout + gradient kernel, parallel over instances with a
// fixed-order reduction. `compute_batch_reference` is the serial twin kept
// for the equivalence tests and the benchmark.
BatchResult compute_batch(const ParamVector& params, const InstanceSampler& sampler,
                          const TrainConfig& cfg, long epoch, int step,
                          std::uint64_t epoch_seed);
BatchResult compute_batch_reference(const ParamVector& params,
                                    const InstanceSampler& sampler,
                                    const TrainConfig& cfg, long epoch, int step,
                                    std::uint64_t epoch_seed);

// instances_per_epoch / batch_size optimizer steps over the sampler.
EpochStats train_epoch(ParamVector& params, OptState& opt,
                       const InstanceSampler& sampler, const TrainConfig& cfg,
                       long epoch, std::uint64_t epoch_seed);

struct EpochLogRow {
    int epoch = 0;
    std::string variant_mix;
    double mean_sample_cost = 0.0;
    double mean_greedy_cost = 0.0;
    double wall_time_s = 0.0;
};

// Multi-problem pre-training: one parameter vector trained with the
// per-batch variant drawn uniformly from `variants`.
ParamVector pretrain(const ArchConfig& arch, const std::vector<VariantSpec>& variants,
                     int n, int epochs, const TrainConfig& cfg, std::uint64_t seed,
                     std::vector<EpochLogRow>* log = nullptr);

}  // namespace fedroute
