#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "fedroute/baseline.hpp"
#include "fedroute/federation.hpp"
#include "fedroute/policy.hpp"
#include "fedroute/train.hpp"

namespace fedroute {

// Flat "key = value" text with dotted key sections; '#' starts a comment.
class ConfigMap {
  public:
    static ConfigMap parse_file(const std::string& path);
    static ConfigMap parse_string(const std::string& text, const std::string& origin);

    bool has(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    long long get_int(const std::string& key, long long fallback) const;
    double get_double(const std::string& key, double fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::vector<std::string> get_list(const std::string& key) const;  // comma-split

    // Keys present in the file but never read; used to reject typos.
    std::vector<std::string> unread_keys() const;

  private:
    std::string origin_;
    std::map<std::string, std::string> values_;
    mutable std::set<std::string> read_;

    const std::string* find(const std::string& key) const;
    [[noreturn]] void fail(const std::string& key, const std::string& why) const;
};

enum class Mode { pretrain, cpl, mtf, fl, evaluate, baseline, gendata, gradcheck };

const char* to_string(Mode mode);

struct ExperimentConfig {
    Mode mode = Mode::pretrain;
    int n = 10;
    bool backhaul_precedence = false;  // optional linehaul-first rule
    ArchConfig arch;
    TrainConfig train;

    int pretrain_epochs = 50;
    double pretrain_lr = 1e-3;
    int pretrain_instances_per_epoch = 2048;
    std::string pretrain_checkpoint;  // input for cpl / mtf / fl

    FederationConfig fed;
    bool save_round_checkpoints = false;

    int eval_set_size = 256;
    std::uint64_t eval_seed = 2024;
    int eval_num_starts = 8;
    std::vector<std::string> eval_models;  // checkpoint paths for evaluate mode

    int baseline_budget = kDefaultSearchBudget;
    std::string baseline_input;  // dataset path for baseline mode

    int gendata_count = 128;
    std::vector<VariantSpec> gendata_variants;
    bool gendata_text = false;

    std::vector<std::uint64_t> seeds = {1, 2, 3};
    std::string output_dir = "out";
    int threads = 0;  // 0 = env / hardware default
};

// Reads and validates a config for the given mode. Collects every problem
// and throws one error naming the offending fields.
ExperimentConfig load_experiment_config(const std::string& path, Mode mode);
ExperimentConfig parse_experiment_config(const ConfigMap& map, Mode mode);

}  // namespace fedroute
