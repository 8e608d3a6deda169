#include "fedroute/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "fedroute/parallel.hpp"
#include "fedroute/rng.hpp"
#include "fedroute/train.hpp"

namespace fedroute {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

EvalSet build_eval_set(VariantSpec variant, int n, int size, std::uint64_t eval_seed,
                       int baseline_budget, bool backhaul_precedence) {
    EvalSet set;
    set.variant = variant;
    set.n = n;
    set.instances.resize(static_cast<std::size_t>(size));
    set.ref_costs.assign(static_cast<std::size_t>(size), 0.0);
    parallel_for(set.instances.size(), [&](std::size_t k) {
        Rng rng(mix_seed(eval_seed, kEvalStream, variant.flags(), k));
        set.instances[k] = generate_instance(variant, n, rng);
        set.instances[k].backhaul_precedence = backhaul_precedence;
        set.ref_costs[k] = evaluate(set.instances[k], solve(set.instances[k],
                                                            baseline_budget));
    });
    return set;
}

double augmented_greedy_cost(const ParamVector& params, const Instance& instance,
                             int num_starts) {
    const int starts = std::min(num_starts, instance.n());
    double best = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 8; ++k) {
        const Instance aug = augment8(instance, k);
        for (const Trajectory& t : rollout(params, aug, starts, DecodeMode::greedy)) {
            best = std::min(best, t.cost);
        }
    }
    return best;
}

std::vector<double> evaluate_model(const ParamVector& params, const EvalSet& set,
                                   int num_starts) {
    std::vector<double> costs(set.instances.size(), 0.0);
    parallel_for(costs.size(), [&](std::size_t k) {
        costs[k] = augmented_greedy_cost(params, set.instances[k], num_starts);
    });
    return costs;
}

std::vector<double> evaluate_model_reference(const ParamVector& params,
                                             const EvalSet& set, int num_starts) {
    std::vector<double> costs(set.instances.size(), 0.0);
    for (std::size_t k = 0; k < costs.size(); ++k) {
        costs[k] = augmented_greedy_cost(params, set.instances[k], num_starts);
    }
    return costs;
}

MetricsTable evaluate_matrix(std::span<const EvalModel> models,
                             std::span<const EvalSet> sets, int num_starts) {
    MetricsTable table;
    for (const EvalModel& model : models) {
        if (model.params == nullptr)
            throw std::invalid_argument("evaluate_matrix: model without parameters");

        double trained_obj = std::numeric_limits<double>::quiet_NaN();
        double trained_gap = std::numeric_limits<double>::quiet_NaN();
        double unseen_obj_sum = 0.0;
        double unseen_gap_sum = 0.0;
        int unseen_count = 0;

        for (const EvalSet& set : sets) {
            if (set.ref_costs.size() != set.instances.size())
                throw std::invalid_argument("evaluate_matrix: missing reference costs");
            const std::vector<double> costs =
                evaluate_model(*model.params, set, num_starts);
            double obj = 0.0;
            double mean_gap = 0.0;
            for (std::size_t k = 0; k < costs.size(); ++k) {
                obj += costs[k];
                mean_gap += gap(costs[k], set.ref_costs[k]);
            }
            obj /= static_cast<double>(costs.size());
            mean_gap /= static_cast<double>(costs.size());

            const bool is_trained =
                model.finetune_variant && *model.finetune_variant == set.variant;
            table.detail.push_back({model.name,
                                    model.finetune_variant
                                        ? model.finetune_variant->name()
                                        : std::string("-"),
                                    set.variant.name(), set.n, obj, mean_gap,
                                    is_trained});
            if (is_trained) {
                trained_obj = obj;
                trained_gap = mean_gap;
            } else {
                unseen_obj_sum += obj;
                unseen_gap_sum += mean_gap;
                ++unseen_count;
            }
        }

        RollupRow rollup;
        rollup.model = model.name;
        rollup.trained_obj = trained_obj;
        rollup.trained_gap = trained_gap;
        rollup.unseen_obj =
            unseen_count > 0 ? unseen_obj_sum / unseen_count
                             : std::numeric_limits<double>::quiet_NaN();
        rollup.unseen_gap =
            unseen_count > 0 ? unseen_gap_sum / unseen_count
                             : std::numeric_limits<double>::quiet_NaN();
        table.rollup.push_back(std::move(rollup));
    }
    return table;
}

void export_metrics(const MetricsTable& table, const std::string& detail_path,
                    const std::string& rollup_path) {
    {
        std::ofstream os(detail_path);
        if (!os) throw std::runtime_error("export_metrics: cannot open " + detail_path);
        os << "model,finetune_variant,eval_variant,n,obj,gap_pct,is_trained\n";
        for (const DetailRow& r : table.detail) {
            os << r.model << ',' << r.finetune_variant << ',' << r.eval_variant << ','
               << r.n << ',' << fmt17(r.obj) << ',' << fmt17(r.gap_pct) << ','
               << (r.is_trained ? 1 : 0) << '\n';
        }
        if (!os) throw std::runtime_error("export_metrics: write failed");
    }
    {
        std::ofstream os(rollup_path);
        if (!os) throw std::runtime_error("export_metrics: cannot open " + rollup_path);
        os << "model,trained_obj,trained_gap,unseen_obj,unseen_gap\n";
        for (const RollupRow& r : table.rollup) {
            os << r.model << ',' << fmt17(r.trained_obj) << ',' << fmt17(r.trained_gap)
               << ',' << fmt17(r.unseen_obj) << ',' << fmt17(r.unseen_gap) << '\n';
        }
        if (!os) throw std::runtime_error("export_metrics: write failed");
    }
}

}  // namespace fedroute
