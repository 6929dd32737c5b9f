#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace sdring {

inline constexpr const char* kToolVersion = "0.1.0";

// Sidecar describing one CLI run; every output CSV is referenced by exactly
// one manifest.
struct RunManifest {
    std::string command;
    std::string params_json;
    std::uint64_t master_seed = 0;
    std::string tool_version = kToolVersion;
    std::vector<std::string> outputs;
    double wall_time_s = 0.0;
};

void write_manifest(const std::string& path, const RunManifest& manifest);

}  // namespace sdring
