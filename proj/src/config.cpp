#include "fedroute/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fedroute {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

}  // namespace

ConfigMap ConfigMap::parse_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("config: cannot open " + path);
    std::stringstream buf;
    buf << is.rdbuf();
    return parse_string(buf.str(), path);
}

ConfigMap ConfigMap::parse_string(const std::string& text, const std::string& origin) {
    ConfigMap map;
    map.origin_ = origin;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        const std::size_t eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw std::runtime_error(origin + ":" + std::to_string(lineno) +
                                     ": expected 'key = value'");
        }
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty()) {
            throw std::runtime_error(origin + ":" + std::to_string(lineno) +
                                     ": empty key");
        }
        if (map.values_.count(key) != 0) {
            throw std::runtime_error(origin + ":" + std::to_string(lineno) +
                                     ": duplicate key '" + key + "'");
        }
        map.values_[key] = value;
    }
    return map;
}

const std::string* ConfigMap::find(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) return nullptr;
    read_.insert(key);
    return &it->second;
}

void ConfigMap::fail(const std::string& key, const std::string& why) const {
    throw std::runtime_error(origin_ + ": field '" + key + "': " + why);
}

bool ConfigMap::has(const std::string& key) const {
    return values_.count(key) != 0;
}

std::string ConfigMap::get_string(const std::string& key,
                                  const std::string& fallback) const {
    const std::string* v = find(key);
    return v ? *v : fallback;
}

long long ConfigMap::get_int(const std::string& key, long long fallback) const {
    const std::string* v = find(key);
    if (!v) return fallback;
    try {
        std::size_t pos = 0;
        const long long parsed = std::stoll(*v, &pos);
        if (pos != v->size()) fail(key, "not an integer: '" + *v + "'");
        return parsed;
    } catch (const std::logic_error&) {
        fail(key, "not an integer: '" + *v + "'");
    }
}

double ConfigMap::get_double(const std::string& key, double fallback) const {
    const std::string* v = find(key);
    if (!v) return fallback;
    try {
        std::size_t pos = 0;
        const double parsed = std::stod(*v, &pos);
        if (pos != v->size()) fail(key, "not a number: '" + *v + "'");
        return parsed;
    } catch (const std::logic_error&) {
        fail(key, "not a number: '" + *v + "'");
    }
}

bool ConfigMap::get_bool(const std::string& key, bool fallback) const {
    const std::string* v = find(key);
    if (!v) return fallback;
    if (*v == "true" || *v == "1" || *v == "on") return true;
    if (*v == "false" || *v == "0" || *v == "off") return false;
    fail(key, "not a boolean: '" + *v + "'");
}

std::vector<std::string> ConfigMap::get_list(const std::string& key) const {
    const std::string* v = find(key);
    std::vector<std::string> out;
    if (!v) return out;
    std::istringstream is(*v);
    std::string item;
    while (std::getline(is, item, ',')) {
        const std::string t = trim(item);
        if (!t.empty()) out.push_back(t);
    }
    return out;
}

std::vector<std::string> ConfigMap::unread_keys() const {
    std::vector<std::string> out;
    for (const auto& [k, v] : values_) {
        if (read_.count(k) == 0) out.push_back(k);
    }
    return out;
}

const char* to_string(Mode mode) {
    switch (mode) {
        case Mode::pretrain: return "pretrain";
        case Mode::cpl: return "cpl";
        case Mode::mtf: return "mtf";
        case Mode::fl: return "fl";
        case Mode::evaluate: return "evaluate";
        case Mode::baseline: return "baseline";
        case Mode::gendata: return "gendata";
        case Mode::gradcheck: return "gradcheck";
    }
    return "?";
}

ExperimentConfig load_experiment_config(const std::string& path, Mode mode) {
    return parse_experiment_config(ConfigMap::parse_file(path), mode);
}

ExperimentConfig parse_experiment_config(const ConfigMap& map, Mode mode) {
    ExperimentConfig cfg;
    cfg.mode = mode;
    std::vector<std::string> errors;

    cfg.n = static_cast<int>(map.get_int("n", cfg.n));
    if (cfg.n < 1) errors.push_back("'n' must be >= 1");
    cfg.backhaul_precedence = map.get_bool("vrp.backhaul_precedence", false);

    cfg.arch.embed_dim = static_cast<int>(map.get_int("arch.embed_dim", 32));
    cfg.arch.heads = static_cast<int>(map.get_int("arch.heads", 4));
    cfg.arch.layers = static_cast<int>(map.get_int("arch.layers", 2));
    cfg.arch.clip = map.get_double("arch.clip", 10.0);
    try {
        cfg.arch.validate();
    } catch (const std::exception& e) {
        errors.push_back(std::string("'arch.*': ") + e.what());
    }

    cfg.train.batch_size = static_cast<int>(map.get_int("train.batch_size", 64));
    cfg.train.instances_per_epoch =
        static_cast<int>(map.get_int("train.instances_per_epoch", 1024));
    cfg.train.num_starts = static_cast<int>(map.get_int("train.num_starts", 8));
    cfg.train.lr = map.get_double("train.lr", 1e-3);
    cfg.train.weight_decay = map.get_double("train.weight_decay", 1e-6);
    cfg.train.greedy_stats = map.get_bool("train.greedy_stats", true);
    if (cfg.train.batch_size < 1) errors.push_back("'train.batch_size' must be >= 1");
    if (cfg.train.instances_per_epoch < cfg.train.batch_size)
        errors.push_back("'train.instances_per_epoch' must be >= 'train.batch_size'");
    if (cfg.train.num_starts < 2)
        errors.push_back("'train.num_starts' must be >= 2 (shared baseline)");

    cfg.pretrain_epochs = static_cast<int>(map.get_int("pretrain.epochs", 50));
    cfg.pretrain_lr = map.get_double("pretrain.lr", 1e-3);
    cfg.pretrain_instances_per_epoch =
        static_cast<int>(map.get_int("pretrain.instances_per_epoch", 2048));
    if (cfg.pretrain_instances_per_epoch < cfg.train.batch_size)
        errors.push_back(
            "'pretrain.instances_per_epoch' must be >= 'train.batch_size'");
    cfg.pretrain_checkpoint = map.get_string("pretrain.checkpoint", "");
    if (cfg.pretrain_epochs < 1) errors.push_back("'pretrain.epochs' must be >= 1");

    cfg.fed.rounds = static_cast<int>(map.get_int("fed.rounds", 20));
    cfg.fed.local_epochs = static_cast<int>(map.get_int("fed.local_epochs", 5));
    cfg.fed.local_lr = map.get_double("fed.local_lr", cfg.train.lr);
    cfg.fed.selection_ratio = map.get_double("fed.selection_ratio", 1.0);
    cfg.fed.keep_percent = map.get_double("fed.keep_percent", 20.0);
    cfg.fed.lambda = map.get_double("fed.lambda", 1.0);
    cfg.fed.data_cap =
        static_cast<std::size_t>(map.get_int("fed.data_cap", 0));
    const std::string agg = map.get_string("fed.aggregation", "ties");
    if (agg == "ties") cfg.fed.aggregation = Aggregation::ties;
    else if (agg == "fedavg") cfg.fed.aggregation = Aggregation::fedavg;
    else errors.push_back("'fed.aggregation' must be 'ties' or 'fedavg'");
    const std::string scope = map.get_string("fed.trim_scope", "global");
    if (scope == "global") cfg.fed.trim_scope = TrimScope::global;
    else if (scope == "per_tensor") cfg.fed.trim_scope = TrimScope::per_tensor;
    else errors.push_back("'fed.trim_scope' must be 'global' or 'per_tensor'");
    cfg.save_round_checkpoints = map.get_bool("fed.save_round_checkpoints", false);
    if (cfg.fed.rounds < 1) errors.push_back("'fed.rounds' must be >= 1");
    if (cfg.fed.local_epochs < 1) errors.push_back("'fed.local_epochs' must be >= 1");
    if (cfg.fed.selection_ratio <= 0.0 || cfg.fed.selection_ratio > 1.0)
        errors.push_back("'fed.selection_ratio' must be in (0, 1]");
    if (cfg.fed.keep_percent <= 0.0 || cfg.fed.keep_percent > 100.0)
        errors.push_back("'fed.keep_percent' must be in (0, 100]");
    cfg.fed.train = cfg.train;

    cfg.eval_set_size = static_cast<int>(map.get_int("eval.set_size", 256));
    cfg.eval_seed = static_cast<std::uint64_t>(map.get_int("eval.seed", 2024));
    cfg.eval_num_starts = static_cast<int>(map.get_int("eval.num_starts", 8));
    cfg.eval_models = map.get_list("eval.models");
    if (cfg.eval_set_size < 1) errors.push_back("'eval.set_size' must be >= 1");

    cfg.baseline_budget =
        static_cast<int>(map.get_int("baseline.budget", kDefaultSearchBudget));
    cfg.baseline_input = map.get_string("baseline.input", "");

    cfg.gendata_count = static_cast<int>(map.get_int("gendata.count", 128));
    cfg.gendata_text = map.get_bool("gendata.text", false);
    for (const std::string& name : map.get_list("gendata.variants")) {
        if (auto v = VariantSpec::parse(name)) {
            cfg.gendata_variants.push_back(*v);
        } else {
            errors.push_back("'gendata.variants': unknown variant '" + name + "'");
        }
    }

    cfg.seeds.clear();
    for (const std::string& s : map.get_list("seeds")) {
        try {
            cfg.seeds.push_back(static_cast<std::uint64_t>(std::stoull(s)));
        } catch (const std::logic_error&) {
            errors.push_back("'seeds': not an integer: '" + s + "'");
        }
    }
    if (cfg.seeds.empty()) cfg.seeds = {1, 2, 3};
    cfg.output_dir = map.get_string("output_dir", "out");
    cfg.threads = static_cast<int>(map.get_int("threads", 0));

    // Mode-specific requirements.
    const bool needs_pretrain = mode == Mode::cpl || mode == Mode::mtf || mode == Mode::fl;
    if (needs_pretrain && cfg.pretrain_checkpoint.empty())
        errors.push_back("'pretrain.checkpoint' is required for mode " +
                         std::string(to_string(mode)));
    if (mode == Mode::evaluate && cfg.eval_models.empty())
        errors.push_back("'eval.models' is required for mode evaluate");
    if (mode == Mode::baseline && cfg.baseline_input.empty())
        errors.push_back("'baseline.input' is required for mode baseline");
    if (mode == Mode::gendata && cfg.gendata_variants.empty())
        errors.push_back("'gendata.variants' is required for mode gendata");

    for (const std::string& key : map.unread_keys())
        errors.push_back("unknown field '" + key + "'");

    if (!errors.empty()) {
        std::string msg = "invalid config:";
        for (const std::string& e : errors) msg += "\n  - " + e;
        throw std::runtime_error(msg);
    }
    return cfg;
}

}  // namespace fedroute
