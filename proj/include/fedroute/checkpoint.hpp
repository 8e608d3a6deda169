#pragma once

#include <map>
#include <string>

#include "fedroute/policy.hpp"

namespace fedroute {

// Checkpoint container: 8-byte magic "FRCHKPT1", u32 version, arch config,
// string meta map, named layout (names + shapes), then the raw IEEE-754
// little-endian f64 parameter data. Round-trips bit-exactly.
void save_checkpoint(const ParamVector& params,
                     const std::map<std::string, std::string>& meta,
                     const std::string& path);

struct LoadedCheckpoint {
    ParamVector params;
    std::map<std::string, std::string> meta;
};

// Throws on bad magic/version, truncation, or a stored layout that does not
// match the one implied by the stored arch config.
LoadedCheckpoint load_checkpoint(const std::string& path);

}  // namespace fedroute
