#include "fedroute/policy.hpp"

#include <cmath>
#include <stdexcept>

#include "policy_internal.hpp"

namespace fedroute {

void ArchConfig::validate() const {
    if (embed_dim < 1 || heads < 1 || layers < 1 || clip <= 0.0)
        throw std::invalid_argument("ArchConfig: dimensions must be positive");
    if (embed_dim % heads != 0)
        throw std::invalid_argument("ArchConfig: heads must divide embed_dim");
}

const LayoutEntry& Layout::at(std::string_view name) const {
    for (const auto& e : entries) {
        if (e.name == name) return e;
    }
    throw std::out_of_range("Layout: no tensor named " + std::string(name));
}

bool Layout::same_as(const Layout& other) const {
    if (total_len != other.total_len || entries.size() != other.entries.size())
        return false;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (entries[i].name != other.entries[i].name ||
            entries[i].shape != other.entries[i].shape)
            return false;
    }
    return true;
}

std::shared_ptr<const Layout> make_layout(const ArchConfig& arch) {
    arch.validate();
    const auto d = static_cast<std::size_t>(arch.embed_dim);
    const std::size_t f = kStaticFeatureDim;
    const std::size_t ctx = 2 * d + kDynFeatureDim;

    auto layout = std::make_shared<Layout>();
    auto add = [&layout](std::string name, std::vector<std::size_t> shape) {
        LayoutEntry e;
        e.name = std::move(name);
        e.shape = std::move(shape);
        e.size = 1;
        for (std::size_t s : e.shape) e.size *= s;
        e.offset = layout->total_len;
        layout->total_len += e.size;
        layout->entries.push_back(std::move(e));
    };

    add("embed.W", {f, d});
    add("embed.b", {d});
    for (int l = 0; l < arch.layers; ++l) {
        const std::string p = "enc" + std::to_string(l) + ".";
        add(p + "attn.Wq", {d, d});
        add(p + "attn.Wk", {d, d});
        add(p + "attn.Wv", {d, d});
        add(p + "attn.Wo", {d, d});
        add(p + "norm1.scale", {d});
        add(p + "norm1.shift", {d});
        add(p + "ff.W1", {d, 2 * d});
        add(p + "ff.b1", {2 * d});
        add(p + "ff.W2", {2 * d, d});
        add(p + "ff.b2", {d});
        add(p + "norm2.scale", {d});
        add(p + "norm2.shift", {d});
    }
    add("dec.Wctx", {ctx, d});
    add("dec.bctx", {d});
    return layout;
}

ParamVector zeros_like(const ParamVector& params) {
    ParamVector z;
    z.arch = params.arch;
    z.layout = params.layout;
    z.data.assign(params.data.size(), 0.0);
    return z;
}

ParamVector init_params(const ArchConfig& arch, std::uint64_t seed) {
    ParamVector p;
    p.arch = arch;
    p.layout = make_layout(arch);
    p.data.resize(p.layout->total_len);
    const double bound = 1.0 / std::sqrt(static_cast<double>(arch.embed_dim));
    Rng rng(seed);
    for (double& v : p.data) v = rng.uniform(-bound, bound);
    return p;
}

namespace detail {

namespace {

MatView mat_view(const ParamVector& p, const LayoutEntry& e) {
    return {p.data.data() + e.offset, static_cast<Eigen::Index>(e.shape[0]),
            static_cast<Eigen::Index>(e.shape[1])};
}

VecView vec_view(const ParamVector& p, const LayoutEntry& e) {
    return {p.data.data() + e.offset, static_cast<Eigen::Index>(e.shape[0])};
}

MatMut mat_mut(GradVector& p, const LayoutEntry& e) {
    return {p.data.data() + e.offset, static_cast<Eigen::Index>(e.shape[0]),
            static_cast<Eigen::Index>(e.shape[1])};
}

VecMut vec_mut(GradVector& p, const LayoutEntry& e) {
    return {p.data.data() + e.offset, static_cast<Eigen::Index>(e.shape[0])};
}

}  // namespace

Weights bind_weights(const ParamVector& params) {
    if (!params.layout || params.data.size() != params.layout->total_len)
        throw std::invalid_argument("ParamVector: data does not match layout");
    const Layout& lo = *params.layout;
    Weights w{mat_view(params, lo.at("embed.W")),
              vec_view(params, lo.at("embed.b")),
              {},
              mat_view(params, lo.at("dec.Wctx")),
              vec_view(params, lo.at("dec.bctx"))};
    w.layers.reserve(static_cast<std::size_t>(params.arch.layers));
    for (int l = 0; l < params.arch.layers; ++l) {
        const std::string p = "enc" + std::to_string(l) + ".";
        w.layers.push_back(LayerWeights{
            mat_view(params, lo.at(p + "attn.Wq")),
            mat_view(params, lo.at(p + "attn.Wk")),
            mat_view(params, lo.at(p + "attn.Wv")),
            mat_view(params, lo.at(p + "attn.Wo")),
            mat_view(params, lo.at(p + "ff.W1")),
            mat_view(params, lo.at(p + "ff.W2")),
            vec_view(params, lo.at(p + "norm1.scale")),
            vec_view(params, lo.at(p + "norm1.shift")),
            vec_view(params, lo.at(p + "ff.b1")),
            vec_view(params, lo.at(p + "ff.b2")),
            vec_view(params, lo.at(p + "norm2.scale")),
            vec_view(params, lo.at(p + "norm2.shift"))});
    }
    return w;
}

Grads bind_grads(GradVector& grad) {
    if (!grad.layout || grad.data.size() != grad.layout->total_len)
        throw std::invalid_argument("GradVector: data does not match layout");
    const Layout& lo = *grad.layout;
    Grads g{mat_mut(grad, lo.at("embed.W")),
            vec_mut(grad, lo.at("embed.b")),
            {},
            mat_mut(grad, lo.at("dec.Wctx")),
            vec_mut(grad, lo.at("dec.bctx"))};
    g.layers.reserve(static_cast<std::size_t>(grad.arch.layers));
    for (int l = 0; l < grad.arch.layers; ++l) {
        const std::string p = "enc" + std::to_string(l) + ".";
        g.layers.push_back(LayerGrads{
            mat_mut(grad, lo.at(p + "attn.Wq")),
            mat_mut(grad, lo.at(p + "attn.Wk")),
            mat_mut(grad, lo.at(p + "attn.Wv")),
            mat_mut(grad, lo.at(p + "attn.Wo")),
            mat_mut(grad, lo.at(p + "ff.W1")),
            mat_mut(grad, lo.at(p + "ff.W2")),
            vec_mut(grad, lo.at(p + "norm1.scale")),
            vec_mut(grad, lo.at(p + "norm1.shift")),
            vec_mut(grad, lo.at(p + "ff.b1")),
            vec_mut(grad, lo.at(p + "ff.b2")),
            vec_mut(grad, lo.at(p + "norm2.scale")),
            vec_mut(grad, lo.at(p + "norm2.shift"))});
    }
    return g;
}

namespace {

// Per-node normalization to zero mean / unit variance over channels with
// learned scale and shift; kNormEps keeps degenerate rows finite.
RowMat norm_forward(const RowMat& x, VecView scale, VecView shift,
                    NormCache* cache) {
    const Eigen::Index rows = x.rows();
    const Eigen::Index cols = x.cols();
    RowMat y(rows, cols);
    RowMat xhat(rows, cols);
    Eigen::VectorXd inv_sigma(rows);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const double mu = x.row(r).mean();
        const double var = (x.row(r).array() - mu).square().mean();
        const double inv = 1.0 / std::sqrt(var + kNormEps);
        inv_sigma(r) = inv;
        xhat.row(r) = (x.row(r).array() - mu) * inv;
        y.row(r) = xhat.row(r).array() * scale.transpose().array() +
                   shift.transpose().array();
    }
    if (cache) {
        cache->xhat = std::move(xhat);
        cache->inv_sigma = std::move(inv_sigma);
    }
    return y;
}

RowMat softmax_rows(const RowMat& s) {
    RowMat p(s.rows(), s.cols());
    for (Eigen::Index r = 0; r < s.rows(); ++r) {
        const double m = s.row(r).maxCoeff();
        p.row(r) = (s.row(r).array() - m).exp();
        p.row(r) /= p.row(r).sum();
    }
    return p;
}

}  // namespace

RowMat encode_forward(const ArchConfig& arch, const Weights& w, const RowMat& X,
                      EncodeCache* cache) {
    const int h = arch.heads;
    const Eigen::Index dk = arch.embed_dim / h;
    const double inv_sqrt_dk = 1.0 / std::sqrt(static_cast<double>(dk));

    if (cache) {
        cache->X = X;
        cache->layers.assign(static_cast<std::size_t>(arch.layers), {});
    }

    RowMat H = X * w.We;
    H.rowwise() += w.be.transpose();

    for (int l = 0; l < arch.layers; ++l) {
        const LayerWeights& lw = w.layers[static_cast<std::size_t>(l)];
        LayerCache* lc = cache ? &cache->layers[static_cast<std::size_t>(l)] : nullptr;

        RowMat Q = H * lw.Wq;
        RowMat K = H * lw.Wk;
        RowMat V = H * lw.Wv;
        RowMat Ocat(H.rows(), H.cols());
        std::vector<RowMat> probs;
        if (lc) probs.reserve(static_cast<std::size_t>(h));
        for (int a = 0; a < h; ++a) {
            auto Qa = Q.middleCols(a * dk, dk);
            auto Ka = K.middleCols(a * dk, dk);
            auto Va = V.middleCols(a * dk, dk);
            RowMat S = (Qa * Ka.transpose()) * inv_sqrt_dk;
            RowMat P = softmax_rows(S);
            Ocat.middleCols(a * dk, dk) = P * Va;
            if (lc) probs.push_back(std::move(P));
        }
        RowMat attn = Ocat * lw.Wo;
        RowMat res1 = H + attn;
        RowMat H1 = norm_forward(res1, lw.n1_scale, lw.n1_shift,
                                 lc ? &lc->norm1 : nullptr);

        RowMat Zpre = H1 * lw.W1;
        Zpre.rowwise() += lw.b1.transpose();
        RowMat Z = Zpre.cwiseMax(0.0);
        RowMat ff = Z * lw.W2;
        ff.rowwise() += lw.b2.transpose();
        RowMat res2 = H1 + ff;
        RowMat Hout = norm_forward(res2, lw.n2_scale, lw.n2_shift,
                                   lc ? &lc->norm2 : nullptr);

        if (lc) {
            lc->Hin = std::move(H);
            lc->Q = std::move(Q);
            lc->K = std::move(K);
            lc->V = std::move(V);
            lc->P = std::move(probs);
            lc->Ocat = std::move(Ocat);
            lc->H1 = std::move(H1);
            lc->Zpre = std::move(Zpre);
            lc->Z = std::move(Z);
        }
        H = std::move(Hout);
    }

    if (!H.allFinite())
        throw std::runtime_error("encode: non-finite output (numeric fault)");
    return H;
}

void decode_scores(const ArchConfig& arch, const Weights& w, const RowMat& E,
                   const Eigen::VectorXd& graph_mean,
                   const std::array<double, kDynFeatureDim>& dyn, int current,
                   const std::vector<char>& mask, Eigen::VectorXd& context,
                   Eigen::VectorXd& q, Eigen::VectorXd& z,
                   Eigen::VectorXd& logits) {
    const Eigen::Index d = arch.embed_dim;
    const Eigen::Index n1 = E.rows();
    const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(d));

    context.resize(2 * d + kDynFeatureDim);
    context.head(d) = graph_mean;
    context.segment(d, d) = E.row(current).transpose();
    for (int i = 0; i < kDynFeatureDim; ++i) context(2 * d + i) = dyn[static_cast<std::size_t>(i)];

    q.noalias() = w.Wctx.transpose() * context;
    q += w.bctx;

    z.resize(n1);
    logits.resize(n1);
    for (Eigen::Index i = 0; i < n1; ++i) {
        if (mask[static_cast<std::size_t>(i)]) {
            z(i) = E.row(i).dot(q) * inv_sqrt_d;
            logits(i) = arch.clip * std::tanh(z(i));
        } else {
            z(i) = 0.0;
            logits(i) = kMaskedLogit;
        }
    }
}

double masked_log_softmax(const Eigen::VectorXd& logits,
                          const std::vector<char>& mask, int action,
                          Eigen::VectorXd& probs) {
    const Eigen::Index n1 = logits.size();
    double max_u = -std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n1; ++i) {
        if (mask[static_cast<std::size_t>(i)] && logits(i) > max_u) max_u = logits(i);
    }
    double denom = 0.0;
    probs.setZero(n1);
    for (Eigen::Index i = 0; i < n1; ++i) {
        if (mask[static_cast<std::size_t>(i)]) {
            probs(i) = std::exp(logits(i) - max_u);
            denom += probs(i);
        }
    }
    probs /= denom;
    return logits(action) - max_u - std::log(denom);
}

}  // namespace detail

RowMat encode(const ParamVector& params, const RowMat& static_feats) {
    if (static_feats.cols() != kStaticFeatureDim)
        throw std::invalid_argument("encode: feature matrix must have 8 columns");
    const detail::Weights w = detail::bind_weights(params);
    return detail::encode_forward(params.arch, w, static_feats, nullptr);
}

Eigen::VectorXd decode_logits(const ParamVector& params, const RowMat& embeddings,
                              const std::array<double, kDynFeatureDim>& dyn,
                              int current_node, const std::vector<char>& mask) {
    if (static_cast<std::size_t>(embeddings.rows()) != mask.size())
        throw std::invalid_argument("decode_logits: mask/embedding size mismatch");
    bool any = false;
    for (char m : mask) any = any || (m != 0);
    if (!any) throw std::invalid_argument("decode_logits: all-masked input");

    const detail::Weights w = detail::bind_weights(params);
    const Eigen::VectorXd mean = embeddings.colwise().mean().transpose();
    Eigen::VectorXd context, q, z, logits;
    detail::decode_scores(params.arch, w, embeddings, mean, dyn, current_node,
                          mask, context, q, z, logits);
    return logits;
}

namespace {

int pick_action(const Eigen::VectorXd& probs, const std::vector<char>& mask,
                DecodeMode mode, Rng* rng) {
    const auto n1 = static_cast<int>(probs.size());
    if (mode == DecodeMode::greedy) {
        int best = -1;
        double best_p = -1.0;
        for (int i = 0; i < n1; ++i) {
            if (mask[static_cast<std::size_t>(i)] && probs(i) > best_p) {
                best_p = probs(i);
                best = i;
            }
        }
        return best;
    }
    const double r = rng->uniform01();
    double cum = 0.0;
    int last = -1;
    for (int i = 0; i < n1; ++i) {
        if (!mask[static_cast<std::size_t>(i)]) continue;
        last = i;
        cum += probs(i);
        if (r < cum) return i;
    }
    return last;  // numerical remainder falls to the last feasible entry
}

}  // namespace

std::vector<Trajectory> rollout(const ParamVector& params, const Instance& instance,
                                int num_starts, DecodeMode mode, Rng* rng) {
    const int n = instance.n();
    if (num_starts < 1 || num_starts > n)
        throw std::invalid_argument("rollout: need 1 <= num_starts <= n");
    if (mode == DecodeMode::sample && rng == nullptr)
        throw std::invalid_argument("rollout: sample mode needs an rng");

    const detail::Weights w = detail::bind_weights(params);
    const RowMat E =
        detail::encode_forward(params.arch, w, static_features(instance), nullptr);
    const Eigen::VectorXd mean = E.colwise().mean().transpose();

    std::vector<Trajectory> out;
    out.reserve(static_cast<std::size_t>(num_starts));
    Eigen::VectorXd context, q, z, logits, probs;

    for (int s = 1; s <= num_starts; ++s) {
        Trajectory traj;
        traj.instance = &instance;
        traj.start = s;

        DecodeState state = reset(instance);
        {
            const std::vector<char> mask0 = feasible_mask(instance, state);
            if (!mask0[static_cast<std::size_t>(s)])
                throw std::runtime_error(
                    "rollout: forced start customer is infeasible");
        }
        step_inplace(instance, state, s);
        traj.actions.push_back(s);

        while (!state.done) {
            const std::vector<char> mask = feasible_mask(instance, state);
            const auto dyn = dynamic_features(instance, state);
            detail::decode_scores(params.arch, w, E, mean, dyn,
                                  state.current_node, mask, context, q, z, logits);
            // action picked from probabilities; log-prob recorded afterwards
            double max_u = -std::numeric_limits<double>::infinity();
            for (Eigen::Index i = 0; i < logits.size(); ++i) {
                if (mask[static_cast<std::size_t>(i)] && logits(i) > max_u)
                    max_u = logits(i);
            }
            probs.setZero(logits.size());
            double denom = 0.0;
            for (Eigen::Index i = 0; i < logits.size(); ++i) {
                if (mask[static_cast<std::size_t>(i)]) {
                    probs(i) = std::exp(logits(i) - max_u);
                    denom += probs(i);
                }
            }
            probs /= denom;
            const int action = pick_action(probs, mask, mode, rng);
            traj.sum_log_prob += logits(action) - max_u - std::log(denom);
            step_inplace(instance, state, action);
            traj.actions.push_back(action);
        }

        traj.cost = evaluate(instance, actions_to_solution(traj.actions));
        out.push_back(std::move(traj));
    }
    return out;
}

}  // namespace fedroute
