#pragma once

#include <string>
#include <vector>

#include "fedroute/instance.hpp"

namespace fedroute {

// Versioned binary container for a homogeneous batch of instances
// (one variant, one size per file): 8-byte magic "FRVRPDS1", u32 version,
// u32 variant flags, u32 n, u32 count, then per instance the IEEE-754
// little-endian f64 arrays in declared order: depot, coords, demands,
// [duration limit], [tw_start, tw_end, service].
void write_dataset(const std::string& path, const std::vector<Instance>& instances);

std::vector<Instance> read_dataset(const std::string& path);

// Plain-text export for human inspection: one instance per record,
// "key: value" lines, records separated by a blank line.
void export_dataset_text(const std::string& path,
                         const std::vector<Instance>& instances);

}  // namespace fedroute
