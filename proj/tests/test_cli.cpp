// End-to-end tests for the convqa binary. The harness passes the binary path
// through CONVQA_CLI_BIN.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "convqa/text.hpp"
#include "fixtures.hpp"

namespace {

struct CliResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string cli_binary() {
    const char* bin = std::getenv("CONVQA_CLI_BIN");
    REQUIRE_MESSAGE(bin != nullptr, "CONVQA_CLI_BIN must point at the convqa binary");
    return bin;
}

std::string shell_quote(const std::string& s) {
    std::string q = "'";
    for (char c : s) {
        if (c == '\'') {
            q += "'\\''";
        } else {
            q += c;
        }
    }
    q += "'";
    return q;
}

CliResult run_cli(const std::vector<std::string>& args, const fixtures::TempDir& tmp,
                  const std::string& tag) {
    const std::filesystem::path out_file = tmp.file(tag + ".out");
    const std::filesystem::path err_file = tmp.file(tag + ".err");
    std::ostringstream cmd;
    cmd << shell_quote(cli_binary());
    for (const std::string& a : args) cmd << ' ' << shell_quote(a);
    cmd << " > " << shell_quote(out_file.string()) << " 2> " << shell_quote(err_file.string());
    const int status = std::system(cmd.str().c_str());
    CliResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = convqa::read_file(out_file.string());
    r.err = convqa::read_file(err_file.string());
    return r;
}

// a tiny QA corpus + registry + passages, written into tmp
struct Workspace {
    std::filesystem::path registry;
    std::filesystem::path passages;
    std::filesystem::path config;

    explicit Workspace(const fixtures::TempDir& tmp) {
        std::string dialogs;
        for (int i = 0; i < 6; ++i) {
            dialogs += R"({"id":"d)" + std::to_string(i) +
                       R"(","utterances":[{"role":"user","text":"What about topic )" +
                       std::to_string(i) +
                       R"(?"},{"role":"agent","text":"Topic )" + std::to_string(i) +
                       R"( concerns subject )" + std::to_string(i) +
                       R"(."},{"role":"user","text":"More on item )" + std::to_string(i) +
                       R"(?"},{"role":"agent","text":"Item )" + std::to_string(i) +
                       R"( has extra detail )" + std::to_string(i) + R"(."}]})" + "\n";
        }
        fixtures::write_text(tmp.file("qa.jsonl"), dialogs);
        fixtures::write_text(tmp.file("registry.json"),
                             R"([{"name":"qa","kind":"convqa_dialog","path":"qa.jsonl"}])");
        registry = tmp.file("registry.json");

        fixtures::write_text(
            tmp.file("passages.jsonl"),
            R"({"id":"p1","title":"Grevillea","text":"Grevillea is a genus of plants. It will regenerate from seed only."})"
            "\n"
            R"({"id":"p2","title":"Wheatbelt","text":"The Wheatbelt is a region. Wheat grows there in winter."})"
            "\n");
        passages = tmp.file("passages.jsonl");

        fixtures::write_text(tmp.file("config.json"),
                             R"({"batch_size":2,"grad_accum_steps":1,"max_steps":4,)"
                             R"("checkpoint_every":2,"seed":7})");
        config = tmp.file("config.json");
    }
};

} // namespace

TEST_SUITE("cli") {

TEST_CASE("help and version exit cleanly") {
    fixtures::TempDir tmp("cli-help");
    CHECK(run_cli({"--help"}, tmp, "help").exit_code == 0);
    const CliResult version = run_cli({"--version"}, tmp, "version");
    CHECK(version.exit_code == 0);
    CHECK(version.out.find("0.1.0") != std::string::npos);
    CHECK(run_cli({"train", "--help"}, tmp, "train-help").exit_code == 0);
}

TEST_CASE("usage errors exit with 2") {
    fixtures::TempDir tmp("cli-usage");
    CHECK(run_cli({}, tmp, "noargs").exit_code == 2); // a subcommand is required
    CHECK(run_cli({"train"}, tmp, "missing").exit_code == 2); // --config et al. required
    CHECK(run_cli({"no-such-command"}, tmp, "unknown").exit_code == 2);
    CHECK(run_cli({"generate", "--passages", "x", "--output", "y", "--beam-size", "0"}, tmp,
                  "badbeam")
              .exit_code == 2);
}

TEST_CASE("runtime failures exit with 1 and explain themselves") {
    fixtures::TempDir tmp("cli-runtime");
    const Workspace ws(tmp);
    const CliResult r = run_cli({"train", "--config", tmp.file("absent.json").string(),
                                 "--corpus", ws.registry.string(), "--output",
                                 tmp.file("out").string()},
                                tmp, "badcfg");
    CHECK(r.exit_code == 1);
    CHECK(r.err.find("error:") != std::string::npos);
}

TEST_CASE("train writes checkpoint, metrics and manifest") {
    fixtures::TempDir tmp("cli-train");
    const Workspace ws(tmp);
    const std::filesystem::path out = tmp.file("run");
    const CliResult r = run_cli({"train", "--config", ws.config.string(), "--corpus",
                                 ws.registry.string(), "--output", out.string()},
                                tmp, "train");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("trained 4 steps") != std::string::npos);
    CHECK(std::filesystem::exists(out / "checkpoint" / "manifest.json"));
    CHECK(std::filesystem::exists(out / "checkpoint" / "stub_weights.json"));
    CHECK(std::filesystem::exists(out / "metrics.jsonl"));
    CHECK(std::filesystem::exists(out / "run_manifest.json"));

    const std::string manifest = convqa::read_file((out / "run_manifest.json").string());
    CHECK(manifest.find("\"command\": \"train\"") != std::string::npos);
    CHECK(manifest.find("\"seed\": 7") != std::string::npos);
}

TEST_CASE("lambda and seed flags override the config file") {
    fixtures::TempDir tmp("cli-override");
    const Workspace ws(tmp);
    const std::filesystem::path out = tmp.file("run");
    const CliResult r = run_cli({"train", "--config", ws.config.string(), "--corpus",
                                 ws.registry.string(), "--output", out.string(), "--lambda-qam",
                                 "0", "--lambda-tdg", "0", "--seed", "123"},
                                tmp, "override");
    CHECK(r.exit_code == 0);
    const std::string manifest = convqa::read_file((out / "run_manifest.json").string());
    CHECK(manifest.find("\"lambda_qam\": 0.0") != std::string::npos);
    CHECK(manifest.find("\"lambda_tdg\": 0.0") != std::string::npos);
    CHECK(manifest.find("\"seed\": 123") != std::string::npos);

    // metrics must show the auxiliary losses at zero
    std::ifstream metrics(out / "metrics.jsonl");
    std::string line;
    REQUIRE(std::getline(metrics, line));
    CHECK(line.find("\"l_qam\":0.0") != std::string::npos);
    CHECK(line.find("\"l_tdg\":0.0") != std::string::npos);
}

TEST_CASE("generate is deterministic across runs") {
    fixtures::TempDir tmp("cli-gen");
    const Workspace ws(tmp);
    const std::vector<std::string> base = {"generate", "--passages", ws.passages.string(),
                                           "--name", "demo", "--retain-candidates"};

    auto gen = [&](const std::string& dir, const std::string& tag) {
        std::vector<std::string> args = base;
        args.push_back("--output");
        args.push_back(tmp.file(dir).string());
        return run_cli(args, tmp, tag);
    };
    const CliResult r1 = gen("g1", "gen1");
    const CliResult r2 = gen("g2", "gen2");
    REQUIRE(r1.exit_code == 0);
    REQUIRE(r2.exit_code == 0);
    CHECK(r1.out.find("inpainted 2/2") != std::string::npos);

    const std::string d1 = convqa::read_file(tmp.file("g1/demo.jsonl").string());
    const std::string d2 = convqa::read_file(tmp.file("g2/demo.jsonl").string());
    CHECK(d1 == d2);
    CHECK(!d1.empty());
    const std::string s1 = convqa::read_file(tmp.file("g1/demo.jsonl.scores").string());
    const std::string s2 = convqa::read_file(tmp.file("g2/demo.jsonl.scores").string());
    CHECK(s1 == s2);
}

TEST_CASE("beam size 1 without rerank equals plain greedy decoding") {
    fixtures::TempDir tmp("cli-greedy");
    const Workspace ws(tmp);
    auto gen = [&](const std::vector<std::string>& extra, const std::string& dir,
                   const std::string& tag) {
        std::vector<std::string> args = {"generate", "--passages", ws.passages.string(),
                                         "--name",   "demo",      "--output",
                                         tmp.file(dir).string()};
        args.insert(args.end(), extra.begin(), extra.end());
        return run_cli(args, tmp, tag);
    };
    REQUIRE(gen({"--no-rerank", "--beam-size", "1"}, "beam1", "beam1").exit_code == 0);
    REQUIRE(gen({"--no-rerank", "--beam-size", "5"}, "beam5", "beam5").exit_code == 0);
    // without re-ranking the beam winner is always candidate 0
    CHECK(convqa::read_file(tmp.file("beam1/demo.jsonl").string()) ==
          convqa::read_file(tmp.file("beam5/demo.jsonl").string()));
}

TEST_CASE("generate from a trained checkpoint") {
    fixtures::TempDir tmp("cli-ckpt");
    const Workspace ws(tmp);
    REQUIRE(run_cli({"train", "--config", ws.config.string(), "--corpus", ws.registry.string(),
                     "--output", tmp.file("t").string()},
                    tmp, "train")
                .exit_code == 0);
    const CliResult r = run_cli({"generate", "--checkpoint", tmp.file("t/checkpoint").string(),
                                 "--passages", ws.passages.string(), "--output",
                                 tmp.file("g").string()},
                                tmp, "gen");
    CHECK(r.exit_code == 0);
    CHECK(r.err.find("loaded checkpoint") != std::string::npos);
    CHECK(std::filesystem::exists(tmp.file("g/dataset.jsonl")));
}

TEST_CASE("evaluate and stats consume a generated dataset") {
    fixtures::TempDir tmp("cli-eval");
    const Workspace ws(tmp);
    REQUIRE(run_cli({"generate", "--passages", ws.passages.string(), "--output",
                     tmp.file("g").string()},
                    tmp, "gen")
                .exit_code == 0);
    const std::string dataset = tmp.file("g/dataset.jsonl").string();

    const CliResult ev = run_cli({"evaluate", "--dataset", dataset, "--output",
                                  tmp.file("e").string(), "--metric", "lexical-overlap",
                                  "--metric", "constant:0.5"},
                                 tmp, "eval");
    CHECK(ev.exit_code == 0);
    CHECK(ev.out.find("lexical-overlap: mean") != std::string::npos);
    CHECK(ev.out.find("constant:0.5: mean 0.5") != std::string::npos);
    CHECK(std::filesystem::exists(tmp.file("e/evaluation.json")));

    const CliResult st = run_cli({"stats", "--dataset", dataset, "--output",
                                  tmp.file("s").string(), "--types"},
                                 tmp, "stats");
    CHECK(st.exit_code == 0);
    const std::string stats = convqa::read_file(tmp.file("s/stats.json").string());
    CHECK(stats.find("\"num_dialogs\": 2") != std::string::npos);
    CHECK(stats.find("question_types") != std::string::npos);
}

TEST_CASE("retrieval-eval runs the shuffle baseline and static rankings") {
    fixtures::TempDir tmp("cli-retr");
    const Workspace ws(tmp);
    REQUIRE(run_cli({"generate", "--passages", ws.passages.string(), "--output",
                     tmp.file("g").string()},
                    tmp, "gen")
                .exit_code == 0);
    const std::string dataset = tmp.file("g/dataset.jsonl").string();

    const CliResult zs = run_cli({"retrieval-eval", "--dataset", dataset, "--passages",
                                  ws.passages.string(), "--output", tmp.file("r").string(),
                                  "--seeds", "0,1", "--k", "1,2", "--export-pairs",
                                  tmp.file("pairs.jsonl").string()},
                                 tmp, "zeroshot");
    CHECK(zs.exit_code == 0);
    CHECK(std::filesystem::exists(tmp.file("r/retrieval.json")));
    CHECK(std::filesystem::exists(tmp.file("pairs.jsonl")));
    const std::string table = convqa::read_file(tmp.file("r/retrieval.json").string());
    CHECK(table.find("\"ndcg\"") != std::string::npos);
    CHECK(table.find("\"recall\"") != std::string::npos);

    // static mode: perfect rankings in, perfect metrics out
    fixtures::write_text(tmp.file("bench.jsonl"),
                         R"({"query_id":"q1","query":"x?","relevant":["p1"]})"
                         "\n");
    fixtures::write_text(tmp.file("rank.jsonl"),
                         R"({"query_id":"q1","ranking":["p1","p2"]})"
                         "\n");
    const CliResult st = run_cli({"retrieval-eval", "--benchmark",
                                  tmp.file("bench.jsonl").string(), "--rankings",
                                  tmp.file("rank.jsonl").string(), "--output",
                                  tmp.file("r2").string(), "--k", "1"},
                                 tmp, "static");
    CHECK(st.exit_code == 0);
    const std::string static_table = convqa::read_file(tmp.file("r2/retrieval.json").string());
    CHECK(static_table.find("\"mean\": 1.0") != std::string::npos);
}

TEST_CASE("ablate emits the eight-cell table") {
    fixtures::TempDir tmp("cli-ablate");
    const Workspace ws(tmp);
    const CliResult r = run_cli({"ablate", "--config", ws.config.string(), "--corpus",
                                 ws.registry.string(), "--passages", ws.passages.string(),
                                 "--output", tmp.file("a").string(), "--beam-size", "3"},
                                tmp, "ablate");
    CHECK(r.exit_code == 0);
    CHECK(std::filesystem::exists(tmp.file("a/ablation.json")));
    CHECK(std::filesystem::exists(tmp.file("a/ablation.txt")));
    const std::string table = convqa::read_file(tmp.file("a/ablation.json").string());
    CHECK(table.find("dr+qam+tdg_rerank-on") != std::string::npos);
    for (const char* cell : {"dr_rerank-off", "dr_rerank-on", "dr+qam_rerank-off",
                             "dr+tdg_rerank-on", "dr+qam+tdg_rerank-off"}) {
        CHECK(table.find(cell) != std::string::npos);
    }
}

} // TEST_SUITE
