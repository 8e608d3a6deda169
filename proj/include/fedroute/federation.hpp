#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "fedroute/merge.hpp"
#include "fedroute/policy.hpp"
#include "fedroute/train.hpp"

namespace fedroute {

enum class Aggregation { fedavg, ties };

struct Client {
    int id = 0;  // 1..N
    VariantSpec variant;
    std::shared_ptr<GeneratorSampler> data;
    double weight = 1.0;  // importance p_i; |D_i|-proportional for fixed pools
    ParamVector params;
};

struct FederationConfig {
    double selection_ratio = 1.0;  // C
    int local_epochs = 5;          // E
    double local_lr = 1e-4;        // eta
    int rounds = 20;               // T
    Aggregation aggregation = Aggregation::ties;
    double keep_percent = 20.0;  // kappa; mask rate is (100 - kappa)%
    double lambda = 1.0;
    TrimScope trim_scope = TrimScope::global;
    std::size_t data_cap = 0;  // per-client instance cap; 0 = unlimited
    TrainConfig train;         // batch geometry; lr comes from local_lr

    int selected_count(int num_clients) const;
};

// K = max(ceil(C*N), 1) distinct indices in [0, N), uniform without
// replacement, returned sorted ascending.
std::vector<int> select_clients(int num_clients, double selection_ratio, Rng& rng);

// RNG stream for epoch `e` of client `client_id` in round `round`; shared
// by the federated and centralized paths so the two are comparable.
std::uint64_t local_epoch_seed(std::uint64_t federation_seed, int round,
                               int client_id, int epoch_in_round);

struct LocalUpdateResult {
    ParamVector params;
    double last_sample_cost = 0.0;
    double last_greedy_cost = 0.0;
    double wall_time_s = 0.0;
};

// Copies the broadcast parameters, runs E epochs on the client's data with
// a fresh optimizer, and returns the result; the broadcast copy and the
// client are not modified.
LocalUpdateResult local_update(const ParamVector& broadcast, const Client& client,
                               int local_epochs, double eta, int round,
                               std::uint64_t federation_seed,
                               const TrainConfig& train);

struct RoundLogRow {
    int round = 0;
    int client_id = 0;
    std::string variant;
    double trained_greedy_cost = 0.0;
    double tau_norm = 0.0;
    double wall_time_s = 0.0;
};

// One communication round: selection, broadcast, parallel local updates,
// aggregation. Selected clients keep their fine-tuned parameters;
// unselected clients are untouched.
ParamVector run_round(const ParamVector& global, std::vector<Client>& clients,
                      const FederationConfig& cfg, int round,
                      std::uint64_t federation_seed,
                      std::vector<RoundLogRow>* log = nullptr);

struct FederateResult {
    ParamVector global;
    std::vector<RoundLogRow> log;
};

// T rounds starting from theta0 (all clients initialized to it). Final
// per-client models remain in `clients`; the returned global is theta^T.
FederateResult federate(const ParamVector& theta0, std::vector<Client>& clients,
                        const FederationConfig& cfg, std::uint64_t federation_seed);

// Plain fine-tuning loop with the same per-(round, epoch) seed structure and
// per-block optimizer resets as the federated path, so a single-client
// fedavg federation and this loop are numerically identical.
ParamVector centralized_finetune(const ParamVector& theta0,
                                 const InstanceSampler& data, int client_id,
                                 int total_epochs, int block_epochs, double eta,
                                 const TrainConfig& train,
                                 std::uint64_t federation_seed,
                                 std::vector<EpochLogRow>* log = nullptr);

}  // namespace fedroute
