#include "sdring/manifest.hpp"

#include <json.hpp>

#include <fstream>

#include "sdring/errors.hpp"

namespace sdring {

void write_manifest(const std::string& path, const RunManifest& manifest) {
    nlohmann::json j;
    j["command"] = manifest.command;
    j["params"] = nlohmann::json::parse(manifest.params_json);
    j["master_seed"] = manifest.master_seed;
    j["tool_version"] = manifest.tool_version;
    j["outputs"] = manifest.outputs;
    j["wall_time_s"] = manifest.wall_time_s;
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open manifest file " + path);
    out << j.dump(2) << "\n";
}

}  // namespace sdring
