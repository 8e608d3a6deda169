#include "fedroute/merge.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace fedroute {

TaskVector task_vector(const ParamVector& client, const ParamVector& reference) {
    if (!client.layout || !reference.layout ||
        !client.layout->same_as(*reference.layout))
        throw std::invalid_argument("task_vector: layout mismatch");
    TaskVector tau;
    tau.data.resize(client.data.size());
    for (std::size_t i = 0; i < tau.data.size(); ++i)
        tau.data[i] = client.data[i] - reference.data[i];
    return tau;
}

namespace {

// Zeroes everything outside the keep_count largest magnitudes within
// [begin, end); threshold ties keep the lower index.
void trim_range(std::vector<double>& data, std::size_t begin, std::size_t end,
                double keep_percent) {
    const std::size_t len = end - begin;
    if (len == 0) return;
    const auto keep = static_cast<std::size_t>(
        std::ceil(keep_percent / 100.0 * static_cast<double>(len)));
    if (keep >= len) return;

    std::vector<std::size_t> order(len);
    std::iota(order.begin(), order.end(), begin);
    std::stable_sort(order.begin(), order.end(),
                     [&data](std::size_t a, std::size_t b) {
                         const double ma = std::abs(data[a]);
                         const double mb = std::abs(data[b]);
                         if (ma != mb) return ma > mb;
                         return a < b;
                     });
    for (std::size_t r = keep; r < len; ++r) data[order[r]] = 0.0;
}

}  // namespace

TaskVector trim(const TaskVector& tau, double keep_percent) {
    if (keep_percent <= 0.0 || keep_percent > 100.0)
        throw std::invalid_argument("trim: keep_percent must be in (0, 100]");
    TaskVector out = tau;
    trim_range(out.data, 0, out.data.size(), keep_percent);
    return out;
}

TaskVector trim_per_tensor(const TaskVector& tau, double keep_percent,
                           const Layout& layout) {
    if (keep_percent <= 0.0 || keep_percent > 100.0)
        throw std::invalid_argument("trim: keep_percent must be in (0, 100]");
    if (tau.data.size() != layout.total_len)
        throw std::invalid_argument("trim_per_tensor: layout mismatch");
    TaskVector out = tau;
    for (const auto& e : layout.entries)
        trim_range(out.data, e.offset, e.offset + e.size, keep_percent);
    return out;
}

std::vector<int> sign_vote(std::span<const TaskVector> taus) {
    if (taus.empty()) throw std::invalid_argument("sign_vote: empty client set");
    const std::size_t len = taus.front().data.size();
    for (const auto& t : taus) {
        if (t.data.size() != len)
            throw std::invalid_argument("sign_vote: length mismatch");
    }
    std::vector<int> gamma(len, 0);
    for (std::size_t j = 0; j < len; ++j) {
        double sum = 0.0;
        for (const auto& t : taus) sum += t.data[j];
        gamma[j] = sum > 0.0 ? 1 : (sum < 0.0 ? -1 : 0);
    }
    return gamma;
}

TaskVector disjoint_merge(std::span<const TaskVector> taus,
                          std::span<const int> gamma) {
    if (taus.empty())
        throw std::invalid_argument("disjoint_merge: empty client set");
    const std::size_t len = taus.front().data.size();
    if (gamma.size() != len)
        throw std::invalid_argument("disjoint_merge: gamma length mismatch");
    TaskVector out;
    out.data.assign(len, 0.0);
    for (std::size_t j = 0; j < len; ++j) {
        if (gamma[j] == 0) continue;
        double sum = 0.0;
        int count = 0;
        for (const auto& t : taus) {
            const double v = t.data[j];
            const int sgn = v > 0.0 ? 1 : (v < 0.0 ? -1 : 0);
            if (sgn == gamma[j]) {
                sum += v;
                ++count;
            }
        }
        if (count > 0) out.data[j] = sum / static_cast<double>(count);
    }
    return out;
}

ParamVector ties_merge(const ParamVector& global, std::span<const ParamVector> clients,
                       double keep_percent, double lambda, TrimScope scope) {
    if (clients.empty()) throw std::invalid_argument("ties_merge: no clients");
    std::vector<TaskVector> trimmed;
    trimmed.reserve(clients.size());
    for (const auto& c : clients) {
        TaskVector tau = task_vector(c, global);
        trimmed.push_back(scope == TrimScope::global
                              ? trim(tau, keep_percent)
                              : trim_per_tensor(tau, keep_percent, *global.layout));
    }
    const std::vector<int> gamma = sign_vote(trimmed);
    const TaskVector merged = disjoint_merge(trimmed, gamma);

    ParamVector out = global;
    for (std::size_t i = 0; i < out.data.size(); ++i)
        out.data[i] += lambda * merged.data[i];
    return out;
}

ParamVector fed_avg(std::span<const ParamVector> clients,
                    std::span<const double> weights) {
    if (clients.empty()) throw std::invalid_argument("fed_avg: no clients");
    if (clients.size() != weights.size())
        throw std::invalid_argument("fed_avg: one weight per client required");
    double total = 0.0;
    for (double w : weights) {
        if (w < 0.0) throw std::invalid_argument("fed_avg: negative weight");
        total += w;
    }
    if (total <= 0.0) throw std::invalid_argument("fed_avg: weights sum to zero");
    for (const auto& c : clients) {
        if (!c.layout->same_as(*clients.front().layout))
            throw std::invalid_argument("fed_avg: layout mismatch");
    }

    // Affine form around the first client: identical inputs average to
    // themselves exactly, so eta=0 federation rounds are strict fixed points.
    ParamVector out = clients.front();
    for (std::size_t k = 1; k < clients.size(); ++k) {
        const double w = weights[k] / total;
        for (std::size_t i = 0; i < out.data.size(); ++i)
            out.data[i] += w * (clients[k].data[i] - clients.front().data[i]);
    }
    return out;
}

}  // namespace fedroute
