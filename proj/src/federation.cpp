#include "fedroute/federation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "fedroute/parallel.hpp"

namespace fedroute {

int FederationConfig::selected_count(int num_clients) const {
    const int k = static_cast<int>(
        std::ceil(selection_ratio * static_cast<double>(num_clients)));
    return std::max(k, 1);
}

std::vector<int> select_clients(int num_clients, double selection_ratio, Rng& rng) {
    if (num_clients < 1)
        throw std::invalid_argument("select_clients: need at least one client");
    if (selection_ratio <= 0.0 || selection_ratio > 1.0)
        throw std::invalid_argument("select_clients: ratio must be in (0, 1]");
    const int k = std::max(
        static_cast<int>(std::ceil(selection_ratio * static_cast<double>(num_clients))),
        1);

    std::vector<int> ids(static_cast<std::size_t>(num_clients));
    std::iota(ids.begin(), ids.end(), 0);
    for (int i = 0; i < k; ++i) {
        const auto j = i + static_cast<int>(rng.bounded(
                               static_cast<std::uint64_t>(num_clients - i)));
        std::swap(ids[static_cast<std::size_t>(i)], ids[static_cast<std::size_t>(j)]);
    }
    ids.resize(static_cast<std::size_t>(k));
    std::sort(ids.begin(), ids.end());
    return ids;
}

std::uint64_t local_epoch_seed(std::uint64_t federation_seed, int round,
                               int client_id, int epoch_in_round) {
    return mix_seed(federation_seed, kClientStream, static_cast<std::uint64_t>(round),
                    static_cast<std::uint64_t>(client_id),
                    static_cast<std::uint64_t>(epoch_in_round));
}

LocalUpdateResult local_update(const ParamVector& broadcast, const Client& client,
                               int local_epochs, double eta, int round,
                               std::uint64_t federation_seed,
                               const TrainConfig& train) {
    if (local_epochs < 1)
        throw std::invalid_argument("local_update: need at least one epoch");
    const auto t0 = std::chrono::steady_clock::now();

    LocalUpdateResult result;
    result.params = broadcast;
    OptState opt = make_opt_state(result.params.size(), eta, train.weight_decay);
    for (int e = 0; e < local_epochs; ++e) {
        const long lifetime_epoch = static_cast<long>(round) * local_epochs + e;
        const EpochStats stats =
            train_epoch(result.params, opt, *client.data, train, lifetime_epoch,
                        local_epoch_seed(federation_seed, round, client.id, e));
        result.last_sample_cost = stats.mean_sample_cost;
        result.last_greedy_cost = stats.mean_greedy_cost;
    }
    result.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

ParamVector run_round(const ParamVector& global, std::vector<Client>& clients,
                      const FederationConfig& cfg, int round,
                      std::uint64_t federation_seed,
                      std::vector<RoundLogRow>* log) {
    if (clients.empty()) throw std::invalid_argument("run_round: no clients");

    Rng select_rng(mix_seed(federation_seed, kSelectStream,
                            static_cast<std::uint64_t>(round)));
    const std::vector<int> selected =
        select_clients(static_cast<int>(clients.size()), cfg.selection_ratio,
                       select_rng);

    std::vector<LocalUpdateResult> results(selected.size());
    parallel_for(selected.size(), [&](std::size_t i) {
        const Client& client = clients[static_cast<std::size_t>(selected[i])];
        results[i] = local_update(global, client, cfg.local_epochs, cfg.local_lr,
                                  round, federation_seed, cfg.train);
    });

    std::vector<ParamVector> thetas;
    std::vector<double> weights;
    thetas.reserve(selected.size());
    weights.reserve(selected.size());
    for (std::size_t i = 0; i < selected.size(); ++i) {
        thetas.push_back(results[i].params);
        weights.push_back(clients[static_cast<std::size_t>(selected[i])].weight);
    }

    ParamVector next =
        cfg.aggregation == Aggregation::fedavg
            ? fed_avg(thetas, weights)
            : ties_merge(global, thetas, cfg.keep_percent, cfg.lambda, cfg.trim_scope);

    for (std::size_t i = 0; i < selected.size(); ++i) {
        Client& client = clients[static_cast<std::size_t>(selected[i])];
        if (log) {
            const TaskVector tau = task_vector(results[i].params, global);
            double sq = 0.0;
            for (double v : tau.data) sq += v * v;
            log->push_back({round, client.id, client.variant.name(),
                            results[i].last_greedy_cost, std::sqrt(sq),
                            results[i].wall_time_s});
        }
        client.params = std::move(results[i].params);
    }
    return next;
}

FederateResult federate(const ParamVector& theta0, std::vector<Client>& clients,
                        const FederationConfig& cfg, std::uint64_t federation_seed) {
    if (cfg.rounds < 0) throw std::invalid_argument("federate: negative rounds");
    for (auto& client : clients) client.params = theta0;

    FederateResult result;
    result.global = theta0;
    for (int t = 0; t < cfg.rounds; ++t) {
        result.global =
            run_round(result.global, clients, cfg, t, federation_seed, &result.log);
    }
    return result;
}

ParamVector centralized_finetune(const ParamVector& theta0,
                                 const InstanceSampler& data, int client_id,
                                 int total_epochs, int block_epochs, double eta,
                                 const TrainConfig& train,
                                 std::uint64_t federation_seed,
                                 std::vector<EpochLogRow>* log) {
    if (block_epochs < 1)
        throw std::invalid_argument("centralized_finetune: block_epochs must be >= 1");
    ParamVector params = theta0;
    OptState opt = make_opt_state(params.size(), eta, train.weight_decay);
    for (int j = 0; j < total_epochs; ++j) {
        const int round = j / block_epochs;
        const int e = j % block_epochs;
        if (e == 0) opt = make_opt_state(params.size(), eta, train.weight_decay);
        const EpochStats stats =
            train_epoch(params, opt, data, train, j,
                        local_epoch_seed(federation_seed, round, client_id, e));
        if (log) {
            log->push_back({j, stats.variant_mix, stats.mean_sample_cost,
                            stats.mean_greedy_cost, stats.wall_time_s});
        }
    }
    return params;
}

}  // namespace fedroute
