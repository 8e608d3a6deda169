#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fedroute/config.hpp"
#include "fedroute/experiment.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_dir;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool config_required) {
    auto* c = cmd->add_option("--config", opts.config_path, "config file path");
    if (config_required) c->required();
    cmd->add_option("--seed", opts.seed, "override the config's seed list");
    cmd->add_option("--out", opts.out_dir, "override the output directory");
}

int run_mode(fedroute::Mode mode, const CommonOpts& opts) {
    using namespace fedroute;
    ExperimentConfig cfg;
    if (!opts.config_path.empty()) {
        cfg = load_experiment_config(opts.config_path, mode);
    } else {
        cfg = parse_experiment_config(ConfigMap::parse_string("", "<defaults>"), mode);
    }
    if (!opts.out_dir.empty()) cfg.output_dir = opts.out_dir;
    std::vector<std::uint64_t> seeds =
        opts.seed ? std::vector<std::uint64_t>{*opts.seed} : cfg.seeds;

    for (std::uint64_t seed : seeds) {
        std::cout << "[" << to_string(mode) << "] seed " << seed << "...\n";
        const std::vector<std::string> artifacts = run_experiment(cfg, seed);
        for (const std::string& a : artifacts) std::cout << "  wrote " << a << "\n";
        if (mode == Mode::evaluate || mode == Mode::baseline) break;  // seed-free
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fedroute: federated fine-tuning of attention policies for "
                 "vehicle-routing variants"};
    app.require_subcommand(1);

    CommonOpts pretrain_opts, finetune_opts, evaluate_opts, baseline_opts,
        gendata_opts, gradcheck_opts;
    std::string finetune_mode = "fl";
    std::string baseline_input;

    auto* cmd_pretrain =
        app.add_subcommand("pretrain", "multi-problem pre-training on the 6 simple "
                                       "variants");
    add_common(cmd_pretrain, pretrain_opts, false);

    auto* cmd_finetune = app.add_subcommand(
        "finetune", "fine-tune a pre-trained policy on the 10 complex variants");
    add_common(cmd_finetune, finetune_opts, true);
    cmd_finetune
        ->add_option("--mode", finetune_mode, "cpl | mtf | fl")
        ->check(CLI::IsMember({"cpl", "mtf", "fl"}));

    auto* cmd_evaluate =
        app.add_subcommand("evaluate", "evaluate checkpoints over the complex "
                                       "variants and export metrics CSVs");
    add_common(cmd_evaluate, evaluate_opts, true);

    auto* cmd_baseline = app.add_subcommand(
        "baseline", "run the classical heuristic over a dataset file");
    add_common(cmd_baseline, baseline_opts, false);
    cmd_baseline->add_option("--input", baseline_input, "instance dataset file");

    auto* cmd_gendata =
        app.add_subcommand("gen-data", "generate instance dataset files");
    add_common(cmd_gendata, gendata_opts, true);

    auto* cmd_gradcheck = app.add_subcommand(
        "gradcheck", "finite-difference check of the policy gradients");
    add_common(cmd_gradcheck, gradcheck_opts, false);

    CLI11_PARSE(app, argc, argv);

    try {
        using fedroute::Mode;
        if (cmd_pretrain->parsed()) return run_mode(Mode::pretrain, pretrain_opts);
        if (cmd_finetune->parsed()) {
            const Mode m = finetune_mode == "cpl"
                               ? Mode::cpl
                               : (finetune_mode == "mtf" ? Mode::mtf : Mode::fl);
            return run_mode(m, finetune_opts);
        }
        if (cmd_evaluate->parsed()) return run_mode(Mode::evaluate, evaluate_opts);
        if (cmd_baseline->parsed()) {
            // --input overrides the config's baseline.input; validation is
            // relaxed to pretrain-mode rules when the override is given.
            fedroute::ExperimentConfig cfg;
            const Mode parse_mode =
                baseline_input.empty() ? Mode::baseline : Mode::pretrain;
            if (!baseline_opts.config_path.empty()) {
                cfg = fedroute::load_experiment_config(baseline_opts.config_path,
                                                       parse_mode);
            } else if (!baseline_input.empty()) {
                cfg = fedroute::parse_experiment_config(
                    fedroute::ConfigMap::parse_string("", "<defaults>"),
                    Mode::pretrain);
            } else {
                std::cerr << "baseline: provide --input or a config with "
                             "baseline.input\n";
                return 2;
            }
            cfg.mode = Mode::baseline;
            if (!baseline_input.empty()) cfg.baseline_input = baseline_input;
            if (!baseline_opts.out_dir.empty()) cfg.output_dir = baseline_opts.out_dir;
            for (const std::string& a : fedroute::run_experiment(cfg, 0))
                std::cout << "  wrote " << a << "\n";
            return 0;
        }
        if (cmd_gendata->parsed()) return run_mode(Mode::gendata, gendata_opts);
        if (cmd_gradcheck->parsed()) return run_mode(Mode::gradcheck, gradcheck_opts);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
