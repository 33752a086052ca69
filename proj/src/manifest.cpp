#include "convqa/manifest.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "convqa/text.hpp"

namespace convqa {

namespace {
using ordered_json = nlohmann::ordered_json;
}

std::string fingerprint_file(const std::filesystem::path& path) {
    return to_hex(fnv1a64(read_file(path.string())));
}

void write_run_manifest(const RunManifest& m, const std::filesystem::path& path) {
    ordered_json fingerprints = ordered_json::object();
    for (const auto& [name, hash] : m.corpus_fingerprints) fingerprints[name] = hash;
    ordered_json config;
    try {
        config = ordered_json::parse(m.config_json);
    } catch (const std::exception& e) {
        throw std::invalid_argument("write_run_manifest: config_json is not valid JSON: " +
                                    std::string(e.what()));
    }
    const ordered_json doc{
        {"format", "convqa.run"},
        {"version", 1},
        {"command", m.command},
        {"config", config},
        {"seed", m.seed},
        {"corpus_fingerprints", fingerprints},
        {"code_version", m.code_version},
        {"started_at", m.started_at},
        {"finished_at", m.finished_at},
    };
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("write_run_manifest: cannot open " + path.string());
    out << doc.dump(2) << '\n';
}

RunManifest read_run_manifest(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_run_manifest: cannot open " + path.string());
    ordered_json doc;
    try {
        in >> doc;
    } catch (const std::exception& e) {
        throw std::runtime_error("read_run_manifest: " + path.string() + ": " + e.what());
    }
    if (doc.value("format", std::string()) != "convqa.run") {
        throw std::runtime_error("read_run_manifest: " + path.string() +
                                 " is not a run manifest");
    }
    RunManifest m;
    m.command = doc.value("command", std::string());
    m.config_json = doc.contains("config") ? doc.at("config").dump() : "{}";
    m.seed = doc.value("seed", std::uint64_t{0});
    if (doc.contains("corpus_fingerprints")) {
        for (const auto& [name, hash] : doc.at("corpus_fingerprints").items()) {
            m.corpus_fingerprints[name] = hash.get<std::string>();
        }
    }
    m.code_version = doc.value("code_version", std::string());
    m.started_at = doc.value("started_at", std::string());
    m.finished_at = doc.value("finished_at", std::string());
    return m;
}

} // namespace convqa
