// Acceptance suite: one pass/fail line per criterion. Criteria can be
// selected by name substring: `acceptance unseen-gap` runs only matching
// ones; `acceptance --list` prints the names.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fedroute/experiment.hpp"
#include "fedroute/gradcheck.hpp"
#include "fedroute/parallel.hpp"
#include "oracles.hpp"

using namespace fedroute;

namespace {

struct Check {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& what) {
        if (!cond && ok) {
            ok = false;
            detail = what;
        }
    }
    void note(const std::string& what) {
        if (detail.empty()) detail = what;
    }
};

// ---------------------------------------------------------------------------
// Shared training study used by the training-sanity and the two directional
// criteria; computed lazily, once per process.

const std::vector<std::uint64_t> kSeeds{1, 2, 3};

ArchConfig desk_arch() { return ArchConfig{32, 4, 2, 10.0}; }

TrainConfig desk_train(double lr) {
    TrainConfig t;
    t.batch_size = 64;
    t.instances_per_epoch = 1024;
    t.num_starts = 8;
    t.lr = lr;
    t.weight_decay = 1e-6;
    t.greedy_stats = false;  // greedy metrics come from the evaluation sets
    return t;
}

constexpr int kDeskN = 10;
constexpr double kPretrainLr = 1e-3;
constexpr double kFinetuneLr = 1e-3;
constexpr int kEvalSetSize = 256;
constexpr std::uint64_t kEvalSeed = 2024;
constexpr int kEvalStarts = 8;

struct TrainingStudy {
    // per seed
    std::vector<ParamVector> theta_init;
    std::vector<ParamVector> theta0;
    std::vector<CplResult> cpl;
    std::vector<FlResult> fl;
    bool finetuned = false;
};

TrainingStudy& study() {
    static TrainingStudy s;
    return s;
}

ExperimentConfig acceptance_config() {
    ExperimentConfig cfg;
    cfg.mode = Mode::fl;
    cfg.n = kDeskN;
    cfg.arch = desk_arch();
    cfg.train = desk_train(kFinetuneLr);
    cfg.fed.rounds = 20;
    cfg.fed.local_epochs = 5;
    cfg.fed.local_lr = kFinetuneLr;
    cfg.fed.selection_ratio = 1.0;
    cfg.fed.aggregation = Aggregation::ties;
    cfg.fed.keep_percent = 20.0;
    cfg.fed.lambda = 1.0;
    cfg.fed.train = cfg.train;
    cfg.eval_set_size = kEvalSetSize;
    cfg.eval_seed = kEvalSeed;
    cfg.eval_num_starts = kEvalStarts;
    return cfg;
}

void ensure_pretrained() {
    TrainingStudy& s = study();
    if (!s.theta0.empty()) return;
    const ExperimentConfig cfg = acceptance_config();
    TrainConfig pre = desk_train(kPretrainLr);
    pre.instances_per_epoch = 2048;
    for (std::uint64_t seed : kSeeds) {
        s.theta_init.push_back(init_params(cfg.arch, mix_seed(seed, kInitStream)));
        s.theta0.push_back(
            pretrain(cfg.arch, pretrain_variants(), cfg.n, 50, pre, seed));
        std::printf("  (pretrained seed %llu)\n",
                    static_cast<unsigned long long>(seed));
        std::fflush(stdout);
    }
}

void ensure_finetuned() {
    TrainingStudy& s = study();
    if (s.finetuned) return;
    ensure_pretrained();
    const ExperimentConfig cfg = acceptance_config();
    for (std::size_t i = 0; i < kSeeds.size(); ++i) {
        s.cpl.push_back(run_cpl_phase(cfg, s.theta0[i], kSeeds[i]));
        std::printf("  (cpl seed %llu done)\n",
                    static_cast<unsigned long long>(kSeeds[i]));
        std::fflush(stdout);
        s.fl.push_back(run_fl_phase(cfg, s.theta0[i], kSeeds[i]));
        std::printf("  (fl seed %llu done)\n",
                    static_cast<unsigned long long>(kSeeds[i]));
        std::fflush(stdout);
    }
    s.finetuned = true;
}

const std::vector<EvalSet>& complex_eval_sets() {
    static const std::vector<EvalSet> sets = [] {
        const ExperimentConfig cfg = acceptance_config();
        return build_eval_sets(cfg, finetune_variants());
    }();
    return sets;
}

const std::vector<EvalSet>& simple_eval_sets() {
    static const std::vector<EvalSet> sets = [] {
        const ExperimentConfig cfg = acceptance_config();
        return build_eval_sets(cfg, pretrain_variants());
    }();
    return sets;
}

double mean_cost(const ParamVector& params, const EvalSet& set) {
    const std::vector<double> costs = evaluate_model(params, set, kEvalStarts);
    double sum = 0.0;
    for (double c : costs) sum += c;
    return sum / static_cast<double>(costs.size());
}

// ---------------------------------------------------------------------------

Check gradient_exactness() {
    Check c;
    const ArchConfig arch{16, 4, 2, 10.0};
    double worst = 0.0;
    std::string worst_variant;
    std::size_t retries = 0;
    for (const VariantSpec& v : all_variants()) {
        const GradCheckReport r = run_gradcheck(arch, v, 6, 2, 90210);
        retries += r.kink_retries;
        if (r.max_rel_err > worst) {
            worst = r.max_rel_err;
            worst_variant = r.variant + "/" + r.worst_tensor;
        }
        c.require(r.max_rel_err <= 1e-4,
                  r.variant + " max_rel_err " + std::to_string(r.max_rel_err));
    }
    std::ostringstream os;
    os << "16 variants, worst rel err " << worst << " (" << worst_variant << ", "
       << retries << " kink retries)";
    c.note(os.str());
    return c;
}

Check mask_soundness() {
    Check c;
    Rng rng(777);
    long long rollouts = 0;
    for (const VariantSpec& spec : all_variants()) {
        for (int rep = 0; rep < 1000; ++rep) {
            const int n = 6 + static_cast<int>(rng.bounded(10));
            const Instance inst = generate_instance(spec, n, rng);
            DecodeState state = reset(inst);
            std::vector<int> actions;
            while (!state.done) {
                const auto mask = feasible_mask(inst, state);
                int count = 0;
                for (char m : mask) count += m != 0;
                auto pick =
                    static_cast<int>(rng.bounded(static_cast<std::uint64_t>(count)));
                int action = 0;
                for (int i = 0; i < static_cast<int>(mask.size()); ++i) {
                    if (mask[static_cast<std::size_t>(i)] && pick-- == 0) {
                        action = i;
                        break;
                    }
                }
                step_inplace(inst, state, action);
                actions.push_back(action);
            }
            ++rollouts;
            c.require(state.step_count <= 2 * n + 2,
                      spec.name() + ": rollout exceeded the progress bound");
            const auto report = check_feasibility(inst, actions_to_solution(actions));
            c.require(report.feasible,
                      spec.name() + ": mask-respecting rollout is infeasible");
            if (!c.ok) return c;
        }
    }

    long long leaves = 0;
    int trees = 0;
    Rng tree_rng(778);
    for (const VariantSpec& spec : all_variants()) {
        if (spec.time_windows) continue;  // completeness is approximate with TW
        for (int n = 4; n <= 6; ++n) {
            const Instance inst = generate_instance(spec, n, tree_rng);
            try {
                leaves += oracles::enumerate_mask_tree(inst);
            } catch (const std::exception& e) {
                c.require(false,
                          spec.name() + " n=" + std::to_string(n) + ": " + e.what());
                return c;
            }
            ++trees;
        }
    }
    std::ostringstream os;
    os << rollouts << " rollouts feasible; " << trees
       << " exhaustive trees complete (" << leaves << " leaves)";
    c.note(os.str());
    return c;
}

Check probability_normalization() {
    Check c;
    const ArchConfig arch{16, 4, 2, 10.0};
    double worst = 0.0;
    for (const VariantSpec& spec : all_variants()) {
        Rng rng(mix_seed(4040, spec.flags()));
        const Instance inst = generate_instance(spec, 3, rng);
        const ParamVector params = init_params(arch, mix_seed(4141, spec.flags()));
        double total = 0.0;
        oracles::enumerate_rollouts(params, inst, 1,
                                    [&](const std::vector<int>&, double p) {
                                        total += p;
                                    });
        worst = std::max(worst, std::abs(total - 1.0));
        c.require(std::abs(total - 1.0) <= 1e-9,
                  spec.name() + ": enumerated probability mass " +
                      std::to_string(total));
    }
    std::ostringstream os;
    os << "16 variants, worst |mass - 1| = " << worst;
    c.note(os.str());
    return c;
}

Check ties_merging_oracle() {
    Check c;
    Rng rng(31337);
    const ArchConfig tiny{2, 1, 1, 10.0};
    for (int rep = 0; rep < 1000 && c.ok; ++rep) {
        const int clients = 1 + static_cast<int>(rng.bounded(6));
        ParamVector global = init_params(tiny, rng.bits());
        for (double& v : global.data) v = rng.uniform(-1.0, 1.0);
        std::vector<ParamVector> thetas;
        std::vector<std::vector<double>> raw;
        for (int k = 0; k < clients; ++k) {
            ParamVector t = global;
            for (double& v : t.data) v += rng.uniform(-0.5, 0.5);
            if (rng.bernoulli(0.2)) t.data[rng.bounded(t.data.size())] = global.data[0];
            raw.emplace_back(t.data.begin(), t.data.end());
            thetas.push_back(std::move(t));
        }
        const double keep = rng.uniform(0.5, 100.0);
        const double lambda = rng.uniform(0.0, 2.0);
        const ParamVector merged = ties_merge(global, thetas, keep, lambda);
        const std::vector<double> expect = oracles::naive_ties_merge(
            std::vector<double>(global.data.begin(), global.data.end()), raw, keep,
            lambda);
        for (std::size_t i = 0; i < expect.size(); ++i) {
            c.require(std::abs(merged.data[i] - expect[i]) <= 1e-12,
                      "tuple " + std::to_string(rep) + " coordinate " +
                          std::to_string(i) + " differs");
        }
    }

    // component invariants on short vectors
    Rng vrng(555);
    for (int len = 1; len <= 12 && c.ok; ++len) {
        for (int rep = 0; rep < 200; ++rep) {
            TaskVector t;
            for (int i = 0; i < len; ++i) t.data.push_back(vrng.uniform(-1.0, 1.0));
            const double keep = vrng.uniform(0.5, 100.0);
            const TaskVector once = trim(t, keep);
            c.require(trim(once, keep).data == once.data, "trim not idempotent");
        }
    }
    for (int k = 1; k <= 4 && c.ok; ++k) {
        const int combos = static_cast<int>(std::pow(3, k));
        for (int code = 0; code < combos; ++code) {
            std::vector<TaskVector> taus;
            int cc = code;
            for (int i = 0; i < k; ++i) {
                const int sgn = cc % 3 - 1;
                cc /= 3;
                TaskVector t;
                t.data.push_back(sgn * (0.5 + i));
                taus.push_back(std::move(t));
            }
            const auto gamma = sign_vote(taus);
            const TaskVector merged = disjoint_merge(taus, gamma);
            if (merged.data[0] != 0.0) {
                c.require(merged.data[0] * gamma[0] > 0.0,
                          "merged coordinate contradicts the vote");
            }
            std::vector<TaskVector> neg = taus;
            for (auto& t : neg) t.data[0] = -t.data[0];
            c.require(sign_vote(neg)[0] == -gamma[0], "sign vote not odd");
        }
    }
    c.note("1000 random tuples vs naive reference; exhaustive sign patterns");
    return c;
}

Check federation_degeneracy() {
    Check c;
    const ArchConfig arch{16, 4, 2, 10.0};
    const ParamVector theta0 = init_params(arch, 61);
    TrainConfig train;
    train.batch_size = 8;
    train.instances_per_epoch = 16;
    train.num_starts = 4;
    train.greedy_stats = false;

    auto make_one_client = [&](std::uint64_t seed) {
        std::vector<Client> clients(1);
        clients[0].id = 1;
        clients[0].variant = finetune_variants()[0];
        clients[0].data = std::make_shared<GeneratorSampler>(clients[0].variant, 6,
                                                             mix_seed(seed, 9));
        clients[0].params = theta0;
        return clients;
    };

    {
        std::vector<Client> clients = make_one_client(62);
        FederationConfig cfg;
        cfg.rounds = 3;
        cfg.local_epochs = 2;
        cfg.local_lr = 1e-3;
        cfg.aggregation = Aggregation::fedavg;
        cfg.train = train;
        const FederateResult fed = federate(theta0, clients, cfg, 63);
        const ParamVector central = centralized_finetune(
            theta0, *make_one_client(62)[0].data, 1, 6, 2, 1e-3, train, 63);
        double max_diff = 0.0;
        for (std::size_t i = 0; i < central.data.size(); ++i)
            max_diff =
                std::max(max_diff, std::abs(fed.global.data[i] - central.data[i]));
        c.require(max_diff <= 1e-12,
                  "single-client fedavg vs centralized differs by " +
                      std::to_string(max_diff));
        std::ostringstream os;
        os << "N=1 fedavg == centralized (max diff " << max_diff
           << "); eta=0 fixed points exact";
        c.note(os.str());
    }

    for (const Aggregation agg : {Aggregation::fedavg, Aggregation::ties}) {
        std::vector<Client> clients;
        for (int k = 0; k < 3; ++k) {
            Client cl;
            cl.id = k + 1;
            cl.variant = finetune_variants()[static_cast<std::size_t>(k)];
            cl.data =
                std::make_shared<GeneratorSampler>(cl.variant, 6, mix_seed(64, k));
            cl.params = theta0;
            clients.push_back(std::move(cl));
        }
        FederationConfig cfg;
        cfg.rounds = 2;
        cfg.local_epochs = 1;
        cfg.local_lr = 0.0;
        cfg.aggregation = agg;
        cfg.train = train;
        const FederateResult fed = federate(theta0, clients, cfg, 65);
        c.require(fed.global.data == theta0.data,
                  "eta=0 global drifted under an aggregator");
        for (const Client& cl : clients)
            c.require(cl.params.data == theta0.data, "eta=0 client drifted");
    }
    return c;
}

Check schedule_independence() {
    Check c;
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "fedroute_accept_sched";
    fs::remove_all(dir);

    auto run_with_threads = [&](const char* threads, const fs::path& out) {
        setenv("FEDROUTE_THREADS", threads, 1);
        set_max_threads(0);  // defer to the environment variable

        ExperimentConfig cfg = acceptance_config();
        cfg.n = 6;
        cfg.arch = ArchConfig{16, 4, 2, 10.0};
        cfg.train = desk_train(1e-3);
        cfg.train.batch_size = 16;
        cfg.train.instances_per_epoch = 32;
        cfg.train.num_starts = 4;
        cfg.fed.rounds = 2;
        cfg.fed.local_epochs = 1;
        cfg.fed.local_lr = 1e-3;
        cfg.fed.train = cfg.train;
        cfg.eval_set_size = 16;
        cfg.baseline_budget = 300;

        const ParamVector theta0 = init_params(cfg.arch, mix_seed(5, kInitStream));
        std::vector<Client> clients = make_clients(cfg, 5, theta0);
        clients.resize(3);
        federate(theta0, clients, cfg.fed, 5);

        std::vector<EvalModel> models;
        for (const Client& cl : clients)
            models.push_back({"fl_" + cl.variant.name(), cl.variant, &cl.params});
        std::vector<VariantSpec> variants;
        for (const Client& cl : clients) variants.push_back(cl.variant);
        const std::vector<EvalSet> sets = build_eval_sets(cfg, variants);
        const MetricsTable table = evaluate_matrix(models, sets, 4);
        fs::create_directories(out);
        export_metrics(table, (out / "detail.csv").string(),
                       (out / "rollup.csv").string());
    };

    run_with_threads("1", dir / "t1");
    run_with_threads("4", dir / "t4");
    unsetenv("FEDROUTE_THREADS");
    set_max_threads(0);

    auto slurp = [](const fs::path& p) {
        std::ifstream is(p, std::ios::binary);
        std::stringstream ss;
        ss << is.rdbuf();
        return ss.str();
    };
    const bool detail_equal =
        slurp(dir / "t1" / "detail.csv") == slurp(dir / "t4" / "detail.csv");
    const bool rollup_equal =
        slurp(dir / "t1" / "rollup.csv") == slurp(dir / "t4" / "rollup.csv");
    c.require(detail_equal && !slurp(dir / "t1" / "detail.csv").empty(),
              "detail CSVs differ between FEDROUTE_THREADS=1 and 4");
    c.require(rollup_equal, "rollup CSVs differ between FEDROUTE_THREADS=1 and 4");
    c.note("metrics CSVs byte-identical for FEDROUTE_THREADS in {1, 4}");
    return c;
}

Check training_sanity() {
    Check c;
    ensure_pretrained();
    const TrainingStudy& s = study();
    const auto& sets = simple_eval_sets();
    double worst_margin = 1e300;
    for (std::size_t i = 0; i < kSeeds.size(); ++i) {
        for (const EvalSet& set : sets) {
            const double before = mean_cost(s.theta_init[i], set);
            const double after = mean_cost(s.theta0[i], set);
            worst_margin = std::min(worst_margin, before - after);
            c.require(after < before,
                      "seed " + std::to_string(kSeeds[i]) + " " +
                          set.variant.name() + ": greedy cost " +
                          std::to_string(after) + " !< " + std::to_string(before));
        }
    }
    std::ostringstream os;
    os << "theta0 beats theta_init on 6 variants x 3 seeds (min improvement "
       << worst_margin << ")";
    c.note(os.str());
    return c;
}

struct SeedGaps {
    double cpl_unseen_gap_mean = 0.0;
    double fl_unseen_gap_mean = 0.0;
};

SeedGaps seed_gaps(std::size_t seed_idx) {
    const TrainingStudy& s = study();
    const auto& sets = complex_eval_sets();
    SeedGaps out;
    for (std::size_t m = 0; m < 10; ++m) {
        double cpl_gap_sum = 0.0;
        double fl_gap_sum = 0.0;
        for (std::size_t v = 0; v < sets.size(); ++v) {
            if (v == m) continue;  // unseen excludes the fine-tuning variant
            const std::vector<double> cpl_costs =
                evaluate_model(s.cpl[seed_idx].models[m], sets[v], kEvalStarts);
            const std::vector<double> fl_costs = evaluate_model(
                s.fl[seed_idx].clients[m].params, sets[v], kEvalStarts);
            double cg = 0.0;
            double fg = 0.0;
            for (std::size_t k = 0; k < cpl_costs.size(); ++k) {
                cg += gap(cpl_costs[k], sets[v].ref_costs[k]);
                fg += gap(fl_costs[k], sets[v].ref_costs[k]);
            }
            cpl_gap_sum += cg / static_cast<double>(cpl_costs.size());
            fl_gap_sum += fg / static_cast<double>(fl_costs.size());
        }
        out.cpl_unseen_gap_mean += cpl_gap_sum / 9.0;
        out.fl_unseen_gap_mean += fl_gap_sum / 9.0;
    }
    out.cpl_unseen_gap_mean /= 10.0;
    out.fl_unseen_gap_mean /= 10.0;
    return out;
}

Check unseen_gap_ordering() {
    Check c;
    ensure_finetuned();
    int fl_wins = 0;
    std::ostringstream os;
    os.precision(4);
    for (std::size_t i = 0; i < kSeeds.size(); ++i) {
        const SeedGaps g = seed_gaps(i);
        const bool win = g.fl_unseen_gap_mean <= g.cpl_unseen_gap_mean;
        fl_wins += win ? 1 : 0;
        os << "seed " << kSeeds[i] << ": FL " << g.fl_unseen_gap_mean << "% vs CPL "
           << g.cpl_unseen_gap_mean << "%; ";
    }
    c.require(fl_wins >= 2, "FL unseen gap beat CPL in only " +
                                std::to_string(fl_wins) + "/3 seeds -- " + os.str());
    c.note(os.str() + "FL wins " + std::to_string(fl_wins) + "/3");
    return c;
}

Check specialization_forgetting() {
    Check c;
    ensure_finetuned();
    const TrainingStudy& s = study();
    const auto& sets = complex_eval_sets();
    const std::size_t client = 0;  // the first fine-tuning client (OVRPB)

    auto other9_cost = [&](const ParamVector& params) {
        double sum = 0.0;
        for (std::size_t v = 0; v < sets.size(); ++v) {
            if (v == client) continue;
            sum += mean_cost(params, sets[v]);
        }
        return sum / 9.0;
    };

    int holds = 0;
    std::ostringstream os;
    os.precision(4);
    for (std::size_t i = 0; i < kSeeds.size(); ++i) {
        const double base = other9_cost(s.theta0[i]);
        const double d_cpl = other9_cost(s.cpl[i].models[client]) - base;
        const double d_fl = other9_cost(s.fl[i].clients[client].params) - base;
        const bool ok = d_cpl > 0.0 && d_fl < d_cpl;
        holds += ok ? 1 : 0;
        os << "seed " << kSeeds[i] << ": dCPL " << d_cpl << " dFL " << d_fl << "; ";
    }
    c.require(holds >= 2, "forgetting ordering held in only " +
                              std::to_string(holds) + "/3 seeds -- " + os.str());
    c.note(os.str() + "holds " + std::to_string(holds) + "/3");
    return c;
}

Check baseline_quality() {
    Check c;
    Rng rng(2025);
    int optimal = 0;
    const int total = 200;
    for (int rep = 0; rep < total; ++rep) {
        const int n = 3 + static_cast<int>(rng.bounded(3));
        const Instance inst =
            generate_instance(make_variant(false, false, false, false), n, rng);
        const double best = oracles::brute_force_optimum(inst);
        const double got = evaluate(inst, solve(inst));
        c.require(got >= best - 1e-9, "heuristic beat the exhaustive optimum");
        if (got <= best + 1e-9) ++optimal;
    }
    c.require(optimal >= 190, "only " + std::to_string(optimal) +
                                  "/200 tiny instances solved to optimality");

    int feasible = 0;
    Rng frng(2026);
    for (const VariantSpec& spec : all_variants()) {
        for (int rep = 0; rep < 100; ++rep) {
            const Instance inst = generate_instance(spec, kDeskN, frng);
            if (check_feasibility(inst, solve(inst)).feasible) ++feasible;
        }
    }
    c.require(feasible == 1600,
              std::to_string(1600 - feasible) + " of 1600 solutions infeasible");
    std::ostringstream os;
    os << optimal << "/200 optimal on n<=5; " << feasible << "/1600 feasible";
    c.note(os.str());
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<std::string, std::function<Check()>>> criteria{
        {"gradient-exactness", gradient_exactness},
        {"mask-soundness", mask_soundness},
        {"probability-normalization", probability_normalization},
        {"ties-merging-oracle", ties_merging_oracle},
        {"federation-degeneracy", federation_degeneracy},
        {"schedule-independence", schedule_independence},
        {"training-sanity", training_sanity},
        {"unseen-gap-ordering", unseen_gap_ordering},
        {"specialization-forgetting", specialization_forgetting},
        {"baseline-quality", baseline_quality},
    };

    std::vector<std::string> filters;
    for (int i = 1; i < argc; ++i) {
        if (std::string(argv[i]) == "--list") {
            for (const auto& [name, fn] : criteria) std::printf("%s\n", name.c_str());
            return 0;
        }
        filters.emplace_back(argv[i]);
    }

    int failures = 0;
    int ran = 0;
    for (const auto& [name, fn] : criteria) {
        if (!filters.empty()) {
            bool match = false;
            for (const auto& f : filters) match |= name.find(f) != std::string::npos;
            if (!match) continue;
        }
        ++ran;
        const auto t0 = std::chrono::steady_clock::now();
        Check result;
        try {
            result = fn();
        } catch (const std::exception& e) {
            result.ok = false;
            result.detail = std::string("exception: ") + e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                .count();
        std::printf("[%s] %-27s (%8.1fs)  %s\n", result.ok ? "PASS" : "FAIL",
                    name.c_str(), secs, result.detail.c_str());
        std::fflush(stdout);
        failures += result.ok ? 0 : 1;
    }
    if (ran == 0) {
        std::fprintf(stderr, "no criterion matches the given filter\n");
        return 2;
    }
    std::printf("%d/%d criteria passed\n", ran - failures, ran);
    return failures == 0 ? 0 : 1;
}
