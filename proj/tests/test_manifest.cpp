#include <stdexcept>

#include "convqa/manifest.hpp"
#include "convqa/text.hpp"
#include "convqa/version.hpp"
#include "doctest.h"
#include "fixtures.hpp"

using namespace convqa;

TEST_SUITE("manifest") {

TEST_CASE("file fingerprints depend on content only") {
    fixtures::TempDir tmp("fp");
    fixtures::write_text(tmp.file("a.txt"), "corpus bytes");
    fixtures::write_text(tmp.file("b.txt"), "corpus bytes");
    fixtures::write_text(tmp.file("c.txt"), "different bytes");
    const std::string fa = fingerprint_file(tmp.file("a.txt"));
    CHECK(fa.size() == 16); // 64-bit hex
    CHECK(fa == fingerprint_file(tmp.file("b.txt")));
    CHECK(fa != fingerprint_file(tmp.file("c.txt")));
    CHECK(fa == to_hex(fnv1a64("corpus bytes")));
    CHECK_THROWS_AS(fingerprint_file(tmp.file("missing.txt")), std::runtime_error);
}

TEST_CASE("run manifest round-trip") {
    fixtures::TempDir tmp("manifest");
    RunManifest m;
    m.command = "generate";
    m.config_json = R"({"beam_size":5})";
    m.seed = 42;
    m.corpus_fingerprints = {{"passages", "abcd"}};
    m.code_version = kVersion;
    m.started_at = "2024-05-01T10:00:00Z";
    m.finished_at = "2024-05-01T10:00:05Z";
    write_run_manifest(m, tmp.file("run_manifest.json"));

    const RunManifest back = read_run_manifest(tmp.file("run_manifest.json"));
    CHECK(back.command == "generate");
    CHECK(back.seed == 42);
    CHECK(back.corpus_fingerprints == m.corpus_fingerprints);
    CHECK(back.code_version == kVersion);
    CHECK(back.started_at == m.started_at);
    CHECK(back.finished_at == m.finished_at);
    // config snapshot survives as JSON (formatting may differ)
    CHECK(back.config_json.find("beam_size") != std::string::npos);
}

TEST_CASE("manifest write rejects malformed config snapshots") {
    fixtures::TempDir tmp("badcfg");
    RunManifest m;
    m.command = "x";
    m.config_json = "not json";
    CHECK_THROWS(write_run_manifest(m, tmp.file("m.json")));
}

TEST_CASE("version string") {
    CHECK(std::string(kVersion) == "0.1.0");
    CHECK(utc_timestamp().size() == 20); // YYYY-MM-DDTHH:MM:SSZ
    CHECK(utc_timestamp().back() == 'Z');
}

} // TEST_SUITE
