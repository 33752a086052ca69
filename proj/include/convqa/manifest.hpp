#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

namespace convqa {

// Provenance record emitted once per CLI run. Two runs with equal manifests
// (timestamps aside) and deterministic plug-ins produce byte-identical
// outputs.
struct RunManifest {
    std::string command;
    std::string config_json = "{}"; // serialized config snapshot
    std::uint64_t seed = 0;
    std::map<std::string, std::string> corpus_fingerprints; // name -> content hash
    std::string code_version;
    std::string started_at;
    std::string finished_at;
};

// Content hash (hex) of a file's bytes, for corpus fingerprinting.
std::string fingerprint_file(const std::filesystem::path& path);

void write_run_manifest(const RunManifest& m, const std::filesystem::path& path);
RunManifest read_run_manifest(const std::filesystem::path& path);

} // namespace convqa
