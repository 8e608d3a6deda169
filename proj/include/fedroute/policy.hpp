#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>
#include <Eigen/StdVector>

#include "fedroute/env.hpp"
#include "fedroute/instance.hpp"
#include "fedroute/rng.hpp"

namespace fedroute {

// Logit value standing in for -inf on masked entries; large enough to
// underflow in softmax, finite so gradients stay defined.
inline constexpr double kMaskedLogit = -1e30;

struct ArchConfig {
    int embed_dim = 32;
    int heads = 4;
    int layers = 2;
    double clip = 10.0;

    bool operator==(const ArchConfig&) const = default;
    void validate() const;  // throws on inconsistent shape arithmetic
};

// Parameter storage is SIMD-aligned so Eigen maps over it use identical
// kernel peeling in every run; bit-reproducibility depends on it.
using AlignedVec = std::vector<double, Eigen::aligned_allocator<double>>;

struct LayoutEntry {
    std::string name;
    std::vector<std::size_t> shape;
    std::size_t offset = 0;
    std::size_t size = 0;
};

// Named flat-vector layout over all policy tensors; the unit of federation
// and merging. Identical across clients and server within one experiment.
struct Layout {
    std::vector<LayoutEntry> entries;
    std::size_t total_len = 0;

    const LayoutEntry& at(std::string_view name) const;
    bool same_as(const Layout& other) const;
};

std::shared_ptr<const Layout> make_layout(const ArchConfig& arch);

struct ParamVector {
    ArchConfig arch;
    std::shared_ptr<const Layout> layout;
    AlignedVec data;

    std::size_t size() const { return data.size(); }
};

// Gradients share the layout of the parameters they differentiate.
using GradVector = ParamVector;

ParamVector zeros_like(const ParamVector& params);

// Uniform init in [-1/sqrt(d), 1/sqrt(d)], deterministic given the seed.
ParamVector init_params(const ArchConfig& arch, std::uint64_t seed);

struct Trajectory {
    const Instance* instance = nullptr;
    int start = 0;             // forced first customer (POMO multi-start)
    std::vector<int> actions;  // full action sequence including the start
    double sum_log_prob = 0.0; // log-probability given the forced start
    double cost = 0.0;
};

enum class DecodeMode { sample, greedy };

// Input projection followed by `layers` blocks of multi-head self-attention
// and a 2-layer ReLU feed-forward, each sub-block with residual connection
// and per-node normalization. Returns (n+1) x d embeddings.
RowMat encode(const ParamVector& params, const RowMat& static_feats);

// Pointer-style single-head attention over node embeddings from a projected
// [graph mean | current node | dynamic features] context; scores are
// clip*tanh(q.k/sqrt(d)) with masked entries forced to kMaskedLogit.
Eigen::VectorXd decode_logits(const ParamVector& params, const RowMat& embeddings,
                              const std::array<double, kDynFeatureDim>& dyn,
                              int current_node, const std::vector<char>& mask);

// num_starts trajectories, each forced to a distinct first customer
// (1..num_starts); requires num_starts <= n. Greedy mode breaks ties toward
// the lowest node index; sample mode consumes from rng.
std::vector<Trajectory> rollout(const ParamVector& params, const Instance& instance,
                                int num_starts, DecodeMode mode, Rng* rng = nullptr);

// Exact reverse-mode gradient of sum_j weights[j] * sum_log_prob_j with
// respect to params, recomputed by replaying each trajectory's decoding.
GradVector grad_weighted_logprob(const ParamVector& params,
                                 std::span<const Trajectory> trajectories,
                                 std::span<const double> weights);

// Forward-only replay of sum_j weights[j] * sum_log_prob_j under (possibly
// different) parameters; the scalar that grad_weighted_logprob
// differentiates.
double weighted_logprob(const ParamVector& params,
                        std::span<const Trajectory> trajectories,
                        std::span<const double> weights);

}  // namespace fedroute
