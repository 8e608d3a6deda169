#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fedroute/baseline.hpp"
#include "fedroute/policy.hpp"

namespace fedroute {

// Frozen evaluation dataset for one (variant, n): instances plus reference
// costs from the classical heuristic. Generated once per eval seed and
// shared across every regime.
struct EvalSet {
    VariantSpec variant;
    int n = 0;
    std::vector<Instance> instances;
    std::vector<double> ref_costs;
};

EvalSet build_eval_set(VariantSpec variant, int n, int size, std::uint64_t eval_seed,
                       int baseline_budget = kDefaultSearchBudget,
                       bool backhaul_precedence = false);

// Greedy multi-start rollout under all 8 unit-square symmetries; best cost.
double augmented_greedy_cost(const ParamVector& params, const Instance& instance,
                             int num_starts);

// Per-instance best costs over the eval set; parallel kernel plus the serial
// reference twin used by the determinism tests and the benchmark.
std::vector<double> evaluate_model(const ParamVector& params, const EvalSet& set,
                                   int num_starts);
std::vector<double> evaluate_model_reference(const ParamVector& params,
                                             const EvalSet& set, int num_starts);

struct EvalModel {
    std::string name;
    std::optional<VariantSpec> finetune_variant;  // nullopt: e.g. pretrain model
    const ParamVector* params = nullptr;
};

struct DetailRow {
    std::string model;
    std::string finetune_variant;  // "-" when not applicable
    std::string eval_variant;
    int n = 0;
    double obj = 0.0;
    double gap_pct = 0.0;
    bool is_trained = false;
};

struct RollupRow {
    std::string model;
    double trained_obj = 0.0;
    double trained_gap = 0.0;
    double unseen_obj = 0.0;
    double unseen_gap = 0.0;
};

struct MetricsTable {
    std::vector<DetailRow> detail;
    std::vector<RollupRow> rollup;
};

// Full model x variant evaluation. Per-variant means land in the detail
// rows; rollups: trained = the model's own fine-tuning variant, unseen =
// unweighted mean of the other per-variant means.
MetricsTable evaluate_matrix(std::span<const EvalModel> models,
                             std::span<const EvalSet> sets, int num_starts);

void export_metrics(const MetricsTable& table, const std::string& detail_path,
                    const std::string& rollup_path);

}  // namespace fedroute
