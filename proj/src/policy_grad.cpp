#include <cmath>
#include <stdexcept>

#include "fedroute/policy.hpp"
#include "policy_internal.hpp"

namespace fedroute {

namespace detail {
namespace {

void norm_backward(const RowMat& gy, const NormCache& cache, VecView scale,
                   VecMut gscale, VecMut gshift, RowMat& gx) {
    const Eigen::Index rows = gy.rows();
    const Eigen::Index cols = gy.cols();
    gx.resize(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const Eigen::ArrayXd gyr = gy.row(r).transpose().array();
        const Eigen::ArrayXd xhat = cache.xhat.row(r).transpose().array();
        const Eigen::ArrayXd g = gyr * scale.array();
        const double m1 = g.mean();
        const double m2 = (g * xhat).mean();
        gx.row(r) = ((g - m1 - xhat * m2) * cache.inv_sigma(r)).matrix().transpose();
        gscale += (gyr * xhat).matrix();
        gshift += gyr.matrix();
    }
}

}  // namespace

void encode_backward(const ArchConfig& arch, const Weights& w,
                     const EncodeCache& cache, const RowMat& gE, Grads& g) {
    const int h = arch.heads;
    const Eigen::Index dk = arch.embed_dim / h;
    const double inv_sqrt_dk = 1.0 / std::sqrt(static_cast<double>(dk));

    RowMat gH = gE;
    for (int l = arch.layers - 1; l >= 0; --l) {
        const LayerCache& lc = cache.layers[static_cast<std::size_t>(l)];
        const LayerWeights& lw = w.layers[static_cast<std::size_t>(l)];
        LayerGrads& lg = g.layers[static_cast<std::size_t>(l)];

        RowMat gres2;
        norm_backward(gH, lc.norm2, lw.n2_scale, lg.n2_scale, lg.n2_shift, gres2);

        // res2 = H1 + (Z * W2 + b2)
        RowMat gH1 = gres2;
        lg.W2.noalias() += lc.Z.transpose() * gres2;
        lg.b2 += gres2.colwise().sum().transpose();
        RowMat gZ = gres2 * lw.W2.transpose();
        RowMat gZpre =
            (lc.Zpre.array() > 0.0).select(gZ, RowMat::Zero(gZ.rows(), gZ.cols()));
        lg.W1.noalias() += lc.H1.transpose() * gZpre;
        lg.b1 += gZpre.colwise().sum().transpose();
        gH1.noalias() += gZpre * lw.W1.transpose();

        RowMat gres1;
        norm_backward(gH1, lc.norm1, lw.n1_scale, lg.n1_scale, lg.n1_shift, gres1);

        // res1 = Hin + Ocat * Wo
        RowMat gHin = gres1;
        lg.Wo.noalias() += lc.Ocat.transpose() * gres1;
        RowMat gOcat = gres1 * lw.Wo.transpose();

        RowMat gQ = RowMat::Zero(gH.rows(), arch.embed_dim);
        RowMat gK = RowMat::Zero(gH.rows(), arch.embed_dim);
        RowMat gV = RowMat::Zero(gH.rows(), arch.embed_dim);
        for (int a = 0; a < h; ++a) {
            const RowMat& P = lc.P[static_cast<std::size_t>(a)];
            auto Qa = lc.Q.middleCols(a * dk, dk);
            auto Ka = lc.K.middleCols(a * dk, dk);
            auto Va = lc.V.middleCols(a * dk, dk);
            auto gOa = gOcat.middleCols(a * dk, dk);

            RowMat gP = gOa * Va.transpose();
            gV.middleCols(a * dk, dk).noalias() = P.transpose() * gOa;

            RowMat gS(P.rows(), P.cols());
            for (Eigen::Index r = 0; r < P.rows(); ++r) {
                const double dot = gP.row(r).dot(P.row(r));
                gS.row(r) = (P.row(r).array() * (gP.row(r).array() - dot)).matrix();
            }
            gQ.middleCols(a * dk, dk).noalias() = gS * Ka * inv_sqrt_dk;
            gK.middleCols(a * dk, dk).noalias() = gS.transpose() * Qa * inv_sqrt_dk;
        }

        gHin.noalias() += gQ * lw.Wq.transpose();
        gHin.noalias() += gK * lw.Wk.transpose();
        gHin.noalias() += gV * lw.Wv.transpose();
        lg.Wq.noalias() += lc.Hin.transpose() * gQ;
        lg.Wk.noalias() += lc.Hin.transpose() * gK;
        lg.Wv.noalias() += lc.Hin.transpose() * gV;

        gH = std::move(gHin);
    }

    g.We.noalias() += cache.X.transpose() * gH;
    g.be += gH.colwise().sum().transpose();
}

}  // namespace detail

double weighted_logprob(const ParamVector& params,
                        std::span<const Trajectory> trajectories,
                        std::span<const double> weights) {
    if (trajectories.size() != weights.size())
        throw std::invalid_argument(
            "weighted_logprob: one weight per trajectory required");
    const detail::Weights w = detail::bind_weights(params);
    const ArchConfig& arch = params.arch;

    double total = 0.0;
    Eigen::VectorXd context, q, z, logits, probs;
    for (std::size_t j = 0; j < trajectories.size(); ++j) {
        const Trajectory& traj = trajectories[j];
        const Instance& inst = *traj.instance;
        const RowMat E =
            detail::encode_forward(arch, w, static_features(inst), nullptr);
        const Eigen::VectorXd mean = E.colwise().mean().transpose();

        DecodeState state = reset(inst);
        step_inplace(inst, state, traj.actions.front());
        double logp = 0.0;
        for (std::size_t t = 1; t < traj.actions.size(); ++t) {
            const int action = traj.actions[t];
            const std::vector<char> mask = feasible_mask(inst, state);
            const auto dyn = dynamic_features(inst, state);
            detail::decode_scores(arch, w, E, mean, dyn, state.current_node, mask,
                                  context, q, z, logits);
            logp += detail::masked_log_softmax(logits, mask, action, probs);
            step_inplace(inst, state, action);
        }
        total += weights[j] * logp;
    }
    return total;
}

GradVector grad_weighted_logprob(const ParamVector& params,
                                 std::span<const Trajectory> trajectories,
                                 std::span<const double> weights) {
    if (trajectories.size() != weights.size())
        throw std::invalid_argument(
            "grad_weighted_logprob: one weight per trajectory required");

    GradVector grad = zeros_like(params);
    if (trajectories.empty()) return grad;

    const detail::Weights w = detail::bind_weights(params);
    detail::Grads g = detail::bind_grads(grad);
    const ArchConfig& arch = params.arch;
    const Eigen::Index d = arch.embed_dim;
    const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(d));

    // Trajectories over the same instance share one encoder pass; groups are
    // formed in first-appearance order so results do not depend on addresses.
    std::vector<const Instance*> group_keys;
    std::vector<std::vector<std::size_t>> groups;
    for (std::size_t j = 0; j < trajectories.size(); ++j) {
        const Instance* key = trajectories[j].instance;
        if (key == nullptr)
            throw std::invalid_argument("grad_weighted_logprob: null instance ref");
        std::size_t gi = group_keys.size();
        for (std::size_t k = 0; k < group_keys.size(); ++k) {
            if (group_keys[k] == key) {
                gi = k;
                break;
            }
        }
        if (gi == group_keys.size()) {
            group_keys.push_back(key);
            groups.emplace_back();
        }
        groups[gi].push_back(j);
    }

    Eigen::VectorXd context, q, z, logits, probs;
    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
        const Instance& inst = *group_keys[gi];
        detail::EncodeCache cache;
        const RowMat E =
            detail::encode_forward(arch, w, static_features(inst), &cache);
        const Eigen::VectorXd mean = E.colwise().mean().transpose();
        const Eigen::Index n1 = E.rows();

        RowMat gE = RowMat::Zero(n1, d);
        Eigen::VectorXd gmean = Eigen::VectorXd::Zero(d);

        for (std::size_t j : groups[gi]) {
            const Trajectory& traj = trajectories[j];
            const double weight = weights[j];
            if (traj.actions.empty() || traj.actions.front() != traj.start)
                throw std::invalid_argument(
                    "grad_weighted_logprob: trajectory does not begin at its start");

            DecodeState state = reset(inst);
            step_inplace(inst, state, traj.actions.front());
            for (std::size_t t = 1; t < traj.actions.size(); ++t) {
                const int action = traj.actions[t];
                const std::vector<char> mask = feasible_mask(inst, state);
                if (!mask[static_cast<std::size_t>(action)])
                    throw std::logic_error(
                        "grad_weighted_logprob: recorded action is masked");
                const auto dyn = dynamic_features(inst, state);
                detail::decode_scores(arch, w, E, mean, dyn, state.current_node,
                                      mask, context, q, z, logits);
                detail::masked_log_softmax(logits, mask, action, probs);

                if (weight != 0.0) {
                    Eigen::VectorXd dz = Eigen::VectorXd::Zero(n1);
                    for (Eigen::Index i = 0; i < n1; ++i) {
                        if (!mask[static_cast<std::size_t>(i)]) continue;
                        const double du =
                            weight * ((static_cast<Eigen::Index>(action) == i ? 1.0 : 0.0) -
                                      probs(i));
                        const double th = std::tanh(z(i));
                        dz(i) = du * arch.clip * (1.0 - th * th);
                    }
                    Eigen::VectorXd gq = (E.transpose() * dz) * inv_sqrt_d;
                    gE.noalias() += (dz * inv_sqrt_d) * q.transpose();
                    g.Wctx.noalias() += context * gq.transpose();
                    g.bctx += gq;
                    Eigen::VectorXd gcontext = w.Wctx * gq;
                    gmean += gcontext.head(d);
                    gE.row(state.current_node) += gcontext.segment(d, d).transpose();
                }
                step_inplace(inst, state, action);
            }
            if (!state.done)
                throw std::invalid_argument(
                    "grad_weighted_logprob: trajectory ends before completion");
        }

        gE.rowwise() += (gmean / static_cast<double>(n1)).transpose();
        detail::encode_backward(arch, w, cache, gE, g);
    }

    for (double v : grad.data) {
        if (!std::isfinite(v))
            throw std::runtime_error("grad_weighted_logprob: non-finite gradient");
    }
    return grad;
}

}  // namespace fedroute
