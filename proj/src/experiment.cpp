#include "fedroute/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <stdexcept>

#include "fedroute/checkpoint.hpp"
#include "fedroute/dataset_io.hpp"
#include "fedroute/gradcheck.hpp"
#include "fedroute/parallel.hpp"

namespace fedroute {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string join_path(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

std::uint64_t client_data_seed(std::uint64_t seed, int client_id) {
    return mix_seed(seed, kInstanceStream, static_cast<std::uint64_t>(client_id));
}

std::map<std::string, std::string> base_meta(const ExperimentConfig& cfg,
                                             std::uint64_t seed,
                                             const std::string& tag) {
    return {{"tag", tag},
            {"mode", to_string(cfg.mode)},
            {"n", std::to_string(cfg.n)},
            {"seed", std::to_string(seed)}};
}

}  // namespace

ParamVector run_pretrain_phase(const ExperimentConfig& cfg, std::uint64_t seed,
                               std::vector<EpochLogRow>* log) {
    TrainConfig train = cfg.train;
    train.lr = cfg.pretrain_lr;
    train.instances_per_epoch = cfg.pretrain_instances_per_epoch;
    return pretrain(cfg.arch, pretrain_variants(), cfg.n, cfg.pretrain_epochs, train,
                    seed, log);
}

std::vector<Client> make_clients(const ExperimentConfig& cfg, std::uint64_t seed,
                                 const ParamVector& theta0) {
    const auto& variants = finetune_variants();
    std::vector<Client> clients;
    clients.reserve(variants.size());
    for (std::size_t i = 0; i < variants.size(); ++i) {
        Client c;
        c.id = static_cast<int>(i) + 1;
        c.variant = variants[i];
        c.data = std::make_shared<GeneratorSampler>(
            c.variant, cfg.n, client_data_seed(seed, c.id), cfg.fed.data_cap,
            cfg.backhaul_precedence);
        c.weight = 1.0;  // equal |D_i| across clients
        c.params = theta0;
        clients.push_back(std::move(c));
    }
    return clients;
}

CplResult run_cpl_phase(const ExperimentConfig& cfg, const ParamVector& theta0,
                        std::uint64_t seed) {
    CplResult result;
    result.variants = finetune_variants();
    const int total = cfg.fed.rounds * cfg.fed.local_epochs;
    result.models.reserve(result.variants.size());
    for (std::size_t i = 0; i < result.variants.size(); ++i) {
        const int client_id = static_cast<int>(i) + 1;
        GeneratorSampler data(result.variants[i], cfg.n,
                              client_data_seed(seed, client_id), cfg.fed.data_cap,
                              cfg.backhaul_precedence);
        result.models.push_back(centralized_finetune(theta0, data, client_id, total,
                                                     cfg.fed.local_epochs,
                                                     cfg.fed.local_lr, cfg.fed.train,
                                                     seed));
    }
    return result;
}

ParamVector run_mtf_phase(const ExperimentConfig& cfg, const ParamVector& theta0,
                          std::uint64_t seed, std::vector<EpochLogRow>* log) {
    const auto& variants = finetune_variants();
    const int total = cfg.fed.rounds * cfg.fed.local_epochs *
                      static_cast<int>(variants.size());
    MixedSampler data(variants, cfg.n, client_data_seed(seed, 0),
                      cfg.backhaul_precedence);
    return centralized_finetune(theta0, data, 0, total, cfg.fed.local_epochs,
                                cfg.fed.local_lr, cfg.fed.train, seed, log);
}

FlResult run_fl_phase(const ExperimentConfig& cfg, const ParamVector& theta0,
                      std::uint64_t seed) {
    FlResult result;
    result.clients = make_clients(cfg, seed, theta0);
    FederateResult fed = federate(theta0, result.clients, cfg.fed, seed);
    result.global = std::move(fed.global);
    result.log = std::move(fed.log);
    return result;
}

std::vector<EvalSet> build_eval_sets(const ExperimentConfig& cfg,
                                     const std::vector<VariantSpec>& variants) {
    std::vector<EvalSet> sets;
    sets.reserve(variants.size());
    for (const VariantSpec& v : variants) {
        sets.push_back(build_eval_set(v, cfg.n, cfg.eval_set_size, cfg.eval_seed,
                                      cfg.baseline_budget, cfg.backhaul_precedence));
    }
    return sets;
}

void write_epoch_log(const std::string& path, const std::vector<EpochLogRow>& rows) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("write_epoch_log: cannot open " + path);
    os << "epoch,variant_mix,mean_sample_cost,mean_greedy_cost,wall_time_s\n";
    for (const auto& r : rows) {
        os << r.epoch << ',' << r.variant_mix << ',' << fmt17(r.mean_sample_cost)
           << ',' << fmt17(r.mean_greedy_cost) << ',' << fmt17(r.wall_time_s) << '\n';
    }
}

void write_round_log(const std::string& path, const std::vector<RoundLogRow>& rows) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("write_round_log: cannot open " + path);
    os << "round,client_id,variant,trained_greedy_cost,tau_norm,wall_time_s\n";
    for (const auto& r : rows) {
        os << r.round << ',' << r.client_id << ',' << r.variant << ','
           << fmt17(r.trained_greedy_cost) << ',' << fmt17(r.tau_norm) << ','
           << fmt17(r.wall_time_s) << '\n';
    }
}

namespace {

ParamVector load_pretrain_for(const ExperimentConfig& cfg) {
    LoadedCheckpoint ck = load_checkpoint(cfg.pretrain_checkpoint);
    if (!(ck.params.arch == cfg.arch)) {
        throw std::runtime_error(
            "pretrain.checkpoint: stored architecture does not match 'arch.*'");
    }
    return std::move(ck.params);
}

std::string seed_tag(std::uint64_t seed) { return "seed" + std::to_string(seed); }

std::vector<std::string> run_pretrain_mode(const ExperimentConfig& cfg,
                                           std::uint64_t seed) {
    std::vector<EpochLogRow> log;
    const ParamVector theta0 = run_pretrain_phase(cfg, seed, &log);
    const std::string ckpt =
        join_path(cfg.output_dir, "pretrain_" + seed_tag(seed) + ".ckpt");
    const std::string logp =
        join_path(cfg.output_dir, "pretrain_log_" + seed_tag(seed) + ".csv");
    auto meta = base_meta(cfg, seed, "pretrain");
    save_checkpoint(theta0, meta, ckpt);
    write_epoch_log(logp, log);
    return {ckpt, logp};
}

std::vector<std::string> run_cpl_mode(const ExperimentConfig& cfg,
                                      std::uint64_t seed) {
    const ParamVector theta0 = load_pretrain_for(cfg);
    std::vector<std::string> artifacts;
    const int total = cfg.fed.rounds * cfg.fed.local_epochs;
    const auto& variants = finetune_variants();
    for (std::size_t i = 0; i < variants.size(); ++i) {
        const int client_id = static_cast<int>(i) + 1;
        GeneratorSampler data(variants[i], cfg.n, client_data_seed(seed, client_id),
                              cfg.fed.data_cap, cfg.backhaul_precedence);
        std::vector<EpochLogRow> log;
        const ParamVector model =
            centralized_finetune(theta0, data, client_id, total,
                                 cfg.fed.local_epochs, cfg.fed.local_lr,
                                 cfg.fed.train, seed, &log);
        const std::string name = variants[i].name();
        const std::string ckpt = join_path(
            cfg.output_dir, "cpl_" + name + "_" + seed_tag(seed) + ".ckpt");
        auto meta = base_meta(cfg, seed, "cpl_" + name);
        meta["variant"] = name;
        save_checkpoint(model, meta, ckpt);
        const std::string logp = join_path(
            cfg.output_dir, "cpl_" + name + "_log_" + seed_tag(seed) + ".csv");
        write_epoch_log(logp, log);
        artifacts.push_back(ckpt);
        artifacts.push_back(logp);
    }
    return artifacts;
}

std::vector<std::string> run_mtf_mode(const ExperimentConfig& cfg,
                                      std::uint64_t seed) {
    const ParamVector theta0 = load_pretrain_for(cfg);
    std::vector<EpochLogRow> log;
    const ParamVector model = run_mtf_phase(cfg, theta0, seed, &log);
    const std::string ckpt =
        join_path(cfg.output_dir, "mtf_" + seed_tag(seed) + ".ckpt");
    auto meta = base_meta(cfg, seed, "mtf");
    save_checkpoint(model, meta, ckpt);
    const std::string logp =
        join_path(cfg.output_dir, "mtf_log_" + seed_tag(seed) + ".csv");
    write_epoch_log(logp, log);
    return {ckpt, logp};
}

std::vector<std::string> run_fl_mode(const ExperimentConfig& cfg,
                                     std::uint64_t seed) {
    const ParamVector theta0 = load_pretrain_for(cfg);
    std::vector<Client> clients = make_clients(cfg, seed, theta0);

    std::vector<std::string> artifacts;
    FederateResult fed;
    fed.global = theta0;
    for (int t = 0; t < cfg.fed.rounds; ++t) {
        fed.global = run_round(fed.global, clients, cfg.fed, t, seed, &fed.log);
        if (cfg.save_round_checkpoints) {
            for (const Client& c : clients) {
                const std::string name = "fl_round" + std::to_string(t) + "_client" +
                                         std::to_string(c.id) + "_" + seed_tag(seed) +
                                         ".ckpt";
                auto meta = base_meta(cfg, seed, "fl_round");
                meta["variant"] = c.variant.name();
                meta["round"] = std::to_string(t);
                save_checkpoint(c.params, meta, join_path(cfg.output_dir, name));
                artifacts.push_back(join_path(cfg.output_dir, name));
            }
        }
    }

    for (const Client& c : clients) {
        const std::string name = c.variant.name();
        const std::string ckpt = join_path(
            cfg.output_dir, "fl_client_" + name + "_" + seed_tag(seed) + ".ckpt");
        auto meta = base_meta(cfg, seed, "fl_client_" + name);
        meta["variant"] = name;
        save_checkpoint(c.params, meta, ckpt);
        artifacts.push_back(ckpt);
    }
    const std::string global_ckpt =
        join_path(cfg.output_dir, "fl_global_" + seed_tag(seed) + ".ckpt");
    save_checkpoint(fed.global, base_meta(cfg, seed, "fl_global"), global_ckpt);
    artifacts.push_back(global_ckpt);
    const std::string logp =
        join_path(cfg.output_dir, "fl_rounds_" + seed_tag(seed) + ".csv");
    write_round_log(logp, fed.log);
    artifacts.push_back(logp);
    return artifacts;
}

std::vector<std::string> run_evaluate_mode(const ExperimentConfig& cfg) {
    std::vector<LoadedCheckpoint> loaded;
    loaded.reserve(cfg.eval_models.size());
    std::vector<EvalModel> models;
    for (const std::string& path : cfg.eval_models) {
        loaded.push_back(load_checkpoint(path));
        LoadedCheckpoint& ck = loaded.back();
        EvalModel m;
        m.name = std::filesystem::path(path).stem().string();
        const auto it = ck.meta.find("variant");
        if (it != ck.meta.end()) m.finetune_variant = VariantSpec::parse(it->second);
        m.params = &ck.params;
        models.push_back(std::move(m));
    }
    const std::vector<EvalSet> sets = build_eval_sets(cfg, finetune_variants());
    const MetricsTable table = evaluate_matrix(models, sets, cfg.eval_num_starts);
    const std::string detail = join_path(cfg.output_dir, "metrics_detail.csv");
    const std::string rollup = join_path(cfg.output_dir, "metrics_rollup.csv");
    export_metrics(table, detail, rollup);
    return {detail, rollup};
}

std::vector<std::string> run_baseline_mode(const ExperimentConfig& cfg) {
    const std::vector<Instance> instances = read_dataset(cfg.baseline_input);
    std::vector<double> costs(instances.size(), 0.0);
    parallel_for(instances.size(), [&](std::size_t k) {
        costs[k] = evaluate(instances[k], solve(instances[k], cfg.baseline_budget));
    });
    const std::string out = join_path(cfg.output_dir, "baseline_costs.csv");
    std::ofstream os(out);
    if (!os) throw std::runtime_error("baseline: cannot open " + out);
    os << "instance,cost\n";
    for (std::size_t k = 0; k < costs.size(); ++k)
        os << k << ',' << fmt17(costs[k]) << '\n';
    return {out};
}

std::vector<std::string> run_gendata_mode(const ExperimentConfig& cfg,
                                          std::uint64_t seed) {
    std::vector<std::string> artifacts;
    for (const VariantSpec& v : cfg.gendata_variants) {
        std::vector<Instance> instances;
        instances.reserve(static_cast<std::size_t>(cfg.gendata_count));
        for (int k = 0; k < cfg.gendata_count; ++k) {
            Rng rng(mix_seed(seed, kPoolStream, v.flags(),
                             static_cast<std::uint64_t>(k)));
            instances.push_back(generate_instance(v, cfg.n, rng));
        }
        const std::string stem = v.name() + "_n" + std::to_string(cfg.n) + "_" +
                                 seed_tag(seed);
        const std::string bin = join_path(cfg.output_dir, stem + ".ds");
        write_dataset(bin, instances);
        artifacts.push_back(bin);
        if (cfg.gendata_text) {
            const std::string txt = join_path(cfg.output_dir, stem + ".txt");
            export_dataset_text(txt, instances);
            artifacts.push_back(txt);
        }
    }
    return artifacts;
}

std::vector<std::string> run_gradcheck_mode(const ExperimentConfig& cfg,
                                            std::uint64_t seed) {
    const std::string out = join_path(cfg.output_dir, "gradcheck.csv");
    std::ofstream os(out);
    if (!os) throw std::runtime_error("gradcheck: cannot open " + out);
    os << "variant,max_rel_err,worst_tensor,params\n";
    for (const VariantSpec& v : all_variants()) {
        const GradCheckReport r = run_gradcheck(cfg.arch, v, cfg.n, 2, seed);
        os << r.variant << ',' << fmt17(r.max_rel_err) << ',' << r.worst_tensor << ','
           << r.params_checked << '\n';
        std::cout << "gradcheck " << r.variant << ": max_rel_err=" << r.max_rel_err
                  << " (" << r.worst_tensor << ")\n";
    }
    return {out};
}

}  // namespace

std::vector<std::string> run_experiment(const ExperimentConfig& cfg,
                                        std::uint64_t seed) {
    if (cfg.threads > 0) set_max_threads(cfg.threads);
    std::filesystem::create_directories(cfg.output_dir);
    switch (cfg.mode) {
        case Mode::pretrain: return run_pretrain_mode(cfg, seed);
        case Mode::cpl: return run_cpl_mode(cfg, seed);
        case Mode::mtf: return run_mtf_mode(cfg, seed);
        case Mode::fl: return run_fl_mode(cfg, seed);
        case Mode::evaluate: return run_evaluate_mode(cfg);
        case Mode::baseline: return run_baseline_mode(cfg);
        case Mode::gendata: return run_gendata_mode(cfg, seed);
        case Mode::gradcheck: return run_gradcheck_mode(cfg, seed);
    }
    throw std::logic_error("run_experiment: unhandled mode");
}

}  // namespace fedroute
