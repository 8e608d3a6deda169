#include "fedroute/variant.hpp"

namespace fedroute {

std::string VariantSpec::name() const {
    if (!open && !backhaul && !duration_limit && !time_windows) return "CVRP";
    std::string s;
    if (open) s += 'O';
    s += "VRP";
    if (backhaul) s += 'B';
    if (duration_limit) s += 'L';
    if (time_windows) s += "TW";
    return s;
}

unsigned VariantSpec::flags() const {
    return (open ? 1u : 0u) | (backhaul ? 2u : 0u) | (duration_limit ? 4u : 0u) |
           (time_windows ? 8u : 0u);
}

VariantSpec VariantSpec::from_flags(unsigned flags) {
    return VariantSpec{(flags & 1u) != 0, (flags & 2u) != 0, (flags & 4u) != 0,
                       (flags & 8u) != 0};
}

std::optional<VariantSpec> VariantSpec::parse(std::string_view name) {
    for (const VariantSpec& v : all_variants()) {
        if (v.name() == name) return v;
    }
    return std::nullopt;
}

VariantSpec make_variant(bool open, bool backhaul, bool limit, bool tw) {
    return VariantSpec{open, backhaul, limit, tw};
}

const std::vector<VariantSpec>& all_variants() {
    static const std::vector<VariantSpec> all = [] {
        std::vector<VariantSpec> v;
        for (unsigned f = 0; f < 16; ++f) v.push_back(VariantSpec::from_flags(f));
        return v;
    }();
    return all;
}

const std::vector<VariantSpec>& pretrain_variants() {
    static const std::vector<VariantSpec> v = {
        make_variant(false, false, false, false),  // CVRP
        make_variant(true, false, false, false),   // OVRP
        make_variant(false, true, false, false),   // VRPB
        make_variant(false, false, true, false),   // VRPL
        make_variant(false, false, false, true),   // VRPTW
        make_variant(true, false, false, true),    // OVRPTW
    };
    return v;
}

const std::vector<VariantSpec>& finetune_variants() {
    static const std::vector<VariantSpec> v = {
        make_variant(true, true, false, false),   // OVRPB
        make_variant(true, false, true, false),   // OVRPL
        make_variant(false, true, true, false),   // VRPBL
        make_variant(false, true, false, true),   // VRPBTW
        make_variant(false, false, true, true),   // VRPLTW
        make_variant(true, true, true, false),    // OVRPBL
        make_variant(true, true, false, true),    // OVRPBTW
        make_variant(true, false, true, true),    // OVRPLTW
        make_variant(false, true, true, true),    // VRPBLTW
        make_variant(true, true, true, true),     // OVRPBLTW
    };
    return v;
}

}  // namespace fedroute
