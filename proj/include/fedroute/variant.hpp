#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fedroute {

// One of the 16 VRP variants: base capacitated problem plus any combination
// of open routes (O), backhauls (B), duration limit (L) and time windows (TW).
struct VariantSpec {
    bool open = false;
    bool backhaul = false;
    bool duration_limit = false;
    bool time_windows = false;

    auto operator<=>(const VariantSpec&) const = default;

    // Canonical short name: "CVRP" for all-flags-off, otherwise
    // [O]VRP[B][L][TW], e.g. "OVRPBLTW".
    std::string name() const;

    // Bitmask encoding: bit0=open, bit1=backhaul, bit2=limit, bit3=tw.
    unsigned flags() const;
    static VariantSpec from_flags(unsigned flags);
    static std::optional<VariantSpec> parse(std::string_view name);
};

VariantSpec make_variant(bool open, bool backhaul, bool limit, bool tw);

// All 16 combinations, ordered by flags() bitmask.
const std::vector<VariantSpec>& all_variants();

// The 6 simple variants used for pre-training:
// CVRP, OVRP, VRPB, VRPL, VRPTW, OVRPTW.
const std::vector<VariantSpec>& pretrain_variants();

// The 10 complex variants used for fine-tuning, in client-id order:
// OVRPB, OVRPL, VRPBL, VRPBTW, VRPLTW, OVRPBL, OVRPBTW, OVRPLTW,
// VRPBLTW, OVRPBLTW.
const std::vector<VariantSpec>& finetune_variants();

}  // namespace fedroute
