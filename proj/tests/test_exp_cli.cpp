#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fedroute/checkpoint.hpp"
#include "fedroute/config.hpp"
#include "fedroute/experiment.hpp"

using namespace fedroute;

namespace {

std::filesystem::path test_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "fedroute_exp" / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

std::string slurp(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    REQUIRE(is);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("config parsing") {
    SUBCASE("defaults") {
        const auto cfg = parse_experiment_config(
            ConfigMap::parse_string("", "<mem>"), Mode::pretrain);
        CHECK(cfg.n == 10);
        CHECK(cfg.arch.embed_dim == 32);
        CHECK(cfg.train.batch_size == 64);
        CHECK(cfg.fed.rounds == 20);
        CHECK(cfg.fed.local_epochs == 5);
        CHECK(cfg.fed.keep_percent == 20.0);
        CHECK(cfg.fed.lambda == 1.0);
        CHECK(cfg.fed.aggregation == Aggregation::ties);
        CHECK(cfg.seeds == std::vector<std::uint64_t>{1, 2, 3});
    }

    SUBCASE("values, comments, dotted keys") {
        const std::string text =
            "n = 6            # problem size\n"
            "arch.embed_dim = 16\n"
            "fed.aggregation = fedavg\n"
            "seeds = 5, 6\n"
            "train.greedy_stats = false\n";
        const auto cfg = parse_experiment_config(
            ConfigMap::parse_string(text, "<mem>"), Mode::pretrain);
        CHECK(cfg.n == 6);
        CHECK(cfg.arch.embed_dim == 16);
        CHECK(cfg.fed.aggregation == Aggregation::fedavg);
        CHECK(cfg.seeds == std::vector<std::uint64_t>{5, 6});
        CHECK(cfg.train.greedy_stats == false);
    }

    SUBCASE("field-level diagnostics") {
        CHECK_THROWS_WITH_AS(
            parse_experiment_config(
                ConfigMap::parse_string("n = banana\n", "<mem>"), Mode::pretrain),
            doctest::Contains("'n'"), std::runtime_error);
        CHECK_THROWS_WITH_AS(
            parse_experiment_config(
                ConfigMap::parse_string("typo.key = 1\n", "<mem>"), Mode::pretrain),
            doctest::Contains("unknown field 'typo.key'"), std::runtime_error);
        CHECK_THROWS_WITH_AS(
            parse_experiment_config(ConfigMap::parse_string("", "<mem>"), Mode::fl),
            doctest::Contains("pretrain.checkpoint"), std::runtime_error);
        CHECK_THROWS_WITH_AS(
            parse_experiment_config(
                ConfigMap::parse_string("fed.keep_percent = 0\n", "<mem>"),
                Mode::pretrain),
            doctest::Contains("fed.keep_percent"), std::runtime_error);
        CHECK_THROWS_AS(ConfigMap::parse_string("n 6\n", "<mem>"),
                        std::runtime_error);
        CHECK_THROWS_AS(ConfigMap::parse_string("n = 1\nn = 2\n", "<mem>"),
                        std::runtime_error);
    }

    SUBCASE("paper-default federation settings are accepted") {
        const std::string text =
            "mode_unused = 0\n";
        // fl mode with the reference settings: T=20, E=5, N=10 clients,
        // full participation, ties with keep 20 and lambda 1
        const std::string fl_text =
            "pretrain.checkpoint = some.ckpt\n"
            "fed.rounds = 20\n"
            "fed.local_epochs = 5\n"
            "fed.selection_ratio = 1.0\n"
            "fed.aggregation = ties\n"
            "fed.keep_percent = 20\n"
            "fed.lambda = 1.0\n";
        const auto cfg = parse_experiment_config(
            ConfigMap::parse_string(fl_text, "<mem>"), Mode::fl);
        CHECK(cfg.fed.rounds * cfg.fed.local_epochs == 100);
        CHECK(cfg.fed.selected_count(10) == 10);
        (void)text;
    }
}

TEST_CASE("metrics table semantics on a tiny matrix") {
    ExperimentConfig cfg = parse_experiment_config(
        ConfigMap::parse_string("n = 4\n"
                                "arch.embed_dim = 8\n"
                                "arch.heads = 2\n"
                                "arch.layers = 1\n"
                                "eval.set_size = 3\n"
                                "baseline.budget = 200\n",
                                "<mem>"),
        Mode::pretrain);

    const ParamVector m1 = init_params(cfg.arch, 1);
    const ParamVector m2 = init_params(cfg.arch, 2);
    const auto& variants = finetune_variants();
    const std::vector<VariantSpec> two{variants[0], variants[1]};
    const std::vector<EvalSet> sets = build_eval_sets(cfg, two);

    std::vector<EvalModel> models;
    models.push_back({"alpha", variants[0], &m1});
    models.push_back({"beta", std::nullopt, &m2});
    const MetricsTable table = evaluate_matrix(models, sets, 4);

    REQUIRE(table.detail.size() == 4);  // 2 models x 2 variants
    REQUIRE(table.rollup.size() == 2);

    int trained_rows = 0;
    for (const auto& row : table.detail) {
        if (row.is_trained) {
            ++trained_rows;
            CHECK(row.model == "alpha");
            CHECK(row.eval_variant == variants[0].name());
        }
        CHECK(row.obj > 0.0);
    }
    CHECK(trained_rows == 1);

    // alpha: trained = variant[0], unseen = variant[1] alone
    const RollupRow& alpha = table.rollup[0];
    CHECK(alpha.trained_obj == table.detail[0].obj);
    CHECK(alpha.unseen_obj == table.detail[1].obj);
    // beta has no trained variant: all rows count as unseen
    const RollupRow& beta = table.rollup[1];
    CHECK(std::isnan(beta.trained_obj));
    CHECK(beta.unseen_gap ==
          doctest::Approx((table.detail[2].gap_pct + table.detail[3].gap_pct) / 2));

    SUBCASE("identical inputs give identical tables") {
        const MetricsTable again = evaluate_matrix(models, sets, 4);
        REQUIRE(again.detail.size() == table.detail.size());
        for (std::size_t i = 0; i < table.detail.size(); ++i) {
            CHECK(again.detail[i].obj == table.detail[i].obj);
            CHECK(again.detail[i].gap_pct == table.detail[i].gap_pct);
        }
    }

    SUBCASE("export and gap recomputation from the CSV") {
        const auto dir = test_dir("metrics");
        const std::string detail = (dir / "detail.csv").string();
        const std::string rollup = (dir / "rollup.csv").string();
        export_metrics(table, detail, rollup);

        std::ifstream is(detail);
        std::string header;
        std::getline(is, header);
        CHECK(header == "model,finetune_variant,eval_variant,n,obj,gap_pct,is_trained");
        std::string line;
        std::size_t row = 0;
        while (std::getline(is, line)) {
            REQUIRE(row < table.detail.size());
            // gap column equals the stored value bit-for-bit after round trip
            std::stringstream ss(line);
            std::string field;
            std::vector<std::string> fields;
            while (std::getline(ss, field, ',')) fields.push_back(field);
            REQUIRE(fields.size() == 7);
            CHECK(std::stod(fields[4]) == table.detail[row].obj);
            CHECK(std::abs(std::stod(fields[5]) - table.detail[row].gap_pct) <= 1e-9);
            ++row;
        }
        CHECK(row == table.detail.size());
    }
}

TEST_CASE("gendata and baseline modes round-trip through the filesystem") {
    const auto dir = test_dir("modes");
    ExperimentConfig cfg = parse_experiment_config(
        ConfigMap::parse_string("n = 5\n"
                                "gendata.count = 6\n"
                                "gendata.variants = CVRP, OVRPTW\n"
                                "gendata.text = true\n"
                                "baseline.budget = 300\n",
                                "<mem>"),
        Mode::gendata);
    cfg.output_dir = dir.string();

    const auto artifacts = run_experiment(cfg, 42);
    REQUIRE(artifacts.size() == 4);  // 2 datasets + 2 text exports
    CHECK(std::filesystem::exists(artifacts[0]));

    ExperimentConfig bcfg = cfg;
    bcfg.mode = Mode::baseline;
    bcfg.baseline_input = artifacts[0];
    const auto bart = run_experiment(bcfg, 0);
    REQUIRE(bart.size() == 1);
    const std::string csv = slurp(bart[0]);
    CHECK(csv.rfind("instance,cost", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);  // header + 6 rows
}

TEST_CASE("experiment checkpoints carry their variant metadata") {
    const auto dir = test_dir("fl_small");
    ExperimentConfig cfg = parse_experiment_config(
        ConfigMap::parse_string("n = 4\n"
                                "arch.embed_dim = 8\n"
                                "arch.heads = 2\n"
                                "arch.layers = 1\n"
                                "train.batch_size = 2\n"
                                "train.instances_per_epoch = 4\n"
                                "train.num_starts = 3\n"
                                "train.greedy_stats = false\n"
                                "pretrain.epochs = 1\n"
                                "pretrain.lr = 1e-3\n",
                                "<mem>"),
        Mode::pretrain);
    cfg.output_dir = dir.string();

    const auto pre = run_experiment(cfg, 7);
    REQUIRE(pre.size() == 2);

    ExperimentConfig fl = cfg;
    fl.mode = Mode::fl;
    fl.pretrain_checkpoint = pre[0];
    fl.fed.rounds = 1;
    fl.fed.local_epochs = 1;
    fl.fed.local_lr = 1e-3;
    fl.fed.train = fl.train;
    const auto artifacts = run_experiment(fl, 7);
    // 10 client checkpoints + global + round log
    CHECK(artifacts.size() == 12);

    const LoadedCheckpoint client0 = load_checkpoint(artifacts[0]);
    CHECK(client0.meta.at("variant") == finetune_variants()[0].name());
    CHECK(client0.meta.at("mode") == "fl");

    const std::string log = slurp(artifacts.back());
    CHECK(log.rfind("round,client_id,variant", 0) == 0);
    CHECK(std::count(log.begin(), log.end(), '\n') == 11);  // header + 10 clients
}
