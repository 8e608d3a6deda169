#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fedroute/config.hpp"
#include "fedroute/federation.hpp"
#include "fedroute/metrics.hpp"
#include "fedroute/train.hpp"

namespace fedroute {

// Budget-aligned building blocks shared by the CLI and the acceptance
// suite. CPL and FL share client ids, data streams and per-epoch seeds, so
// the regimes differ only in broadcast/aggregation; MTF runs one mixed
// client with the summed budget.

ParamVector run_pretrain_phase(const ExperimentConfig& cfg, std::uint64_t seed,
                               std::vector<EpochLogRow>* log = nullptr);

std::vector<Client> make_clients(const ExperimentConfig& cfg, std::uint64_t seed,
                                 const ParamVector& theta0);

struct CplResult {
    std::vector<VariantSpec> variants;
    std::vector<ParamVector> models;  // one per complex variant, same order
};
CplResult run_cpl_phase(const ExperimentConfig& cfg, const ParamVector& theta0,
                        std::uint64_t seed);

ParamVector run_mtf_phase(const ExperimentConfig& cfg, const ParamVector& theta0,
                          std::uint64_t seed, std::vector<EpochLogRow>* log = nullptr);

struct FlResult {
    std::vector<Client> clients;  // final per-client models inside
    ParamVector global;
    std::vector<RoundLogRow> log;
};
FlResult run_fl_phase(const ExperimentConfig& cfg, const ParamVector& theta0,
                      std::uint64_t seed);

std::vector<EvalSet> build_eval_sets(const ExperimentConfig& cfg,
                                     const std::vector<VariantSpec>& variants);

void write_epoch_log(const std::string& path, const std::vector<EpochLogRow>& rows);
void write_round_log(const std::string& path, const std::vector<RoundLogRow>& rows);

// Dispatches one mode for one seed; returns the artifact paths written.
std::vector<std::string> run_experiment(const ExperimentConfig& cfg,
                                        std::uint64_t seed);

}  // namespace fedroute
