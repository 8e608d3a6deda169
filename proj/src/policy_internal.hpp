#pragma once

// Shared internals between the policy forward pass and its reverse-mode
// twin. Not installed; include only from src/.

#include <array>
#include <vector>

#include <Eigen/Core>

#include "fedroute/policy.hpp"

namespace fedroute::detail {

using MatView = Eigen::Map<const RowMat>;
using VecView = Eigen::Map<const Eigen::VectorXd>;
using MatMut = Eigen::Map<RowMat>;
using VecMut = Eigen::Map<Eigen::VectorXd>;

struct LayerWeights {
    MatView Wq, Wk, Wv, Wo, W1, W2;
    VecView n1_scale, n1_shift, b1, b2, n2_scale, n2_shift;
};

struct Weights {
    MatView We;
    VecView be;
    std::vector<LayerWeights> layers;
    MatView Wctx;
    VecView bctx;
};

struct LayerGrads {
    MatMut Wq, Wk, Wv, Wo, W1, W2;
    VecMut n1_scale, n1_shift, b1, b2, n2_scale, n2_shift;
};

struct Grads {
    MatMut We;
    VecMut be;
    std::vector<LayerGrads> layers;
    MatMut Wctx;
    VecMut bctx;
};

Weights bind_weights(const ParamVector& params);
Grads bind_grads(GradVector& grad);

inline constexpr double kNormEps = 1e-6;

struct NormCache {
    RowMat xhat;
    Eigen::VectorXd inv_sigma;
};

struct LayerCache {
    RowMat Hin;
    RowMat Q, K, V;
    std::vector<RowMat> P;  // per-head attention probabilities
    RowMat Ocat;
    NormCache norm1;
    RowMat H1;
    RowMat Zpre, Z;
    NormCache norm2;
};

struct EncodeCache {
    RowMat X;
    std::vector<LayerCache> layers;
};

// Forward encoder; fills `cache` (for the backward pass) when non-null.
RowMat encode_forward(const ArchConfig& arch, const Weights& w, const RowMat& X,
                      EncodeCache* cache);

// Backward through the encoder given d(loss)/d(embeddings).
void encode_backward(const ArchConfig& arch, const Weights& w,
                     const EncodeCache& cache, const RowMat& gE, Grads& g);

// One decoding step: context projection and clipped pointer scores.
// `graph_mean` is the column mean of `E`. Outputs z (pre-tanh scores, only
// meaningful on unmasked entries) and the logits vector.
void decode_scores(const ArchConfig& arch, const Weights& w, const RowMat& E,
                   const Eigen::VectorXd& graph_mean,
                   const std::array<double, kDynFeatureDim>& dyn, int current,
                   const std::vector<char>& mask, Eigen::VectorXd& context,
                   Eigen::VectorXd& q, Eigen::VectorXd& z,
                   Eigen::VectorXd& logits);

// log softmax over unmasked entries; returns log-prob of `action` and fills
// probs (zero on masked entries).
double masked_log_softmax(const Eigen::VectorXd& logits,
                          const std::vector<char>& mask, int action,
                          Eigen::VectorXd& probs);

}  // namespace fedroute::detail
