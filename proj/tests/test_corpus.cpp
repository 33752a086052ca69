#include <stdexcept>

#include "convqa/corpus.hpp"
#include "convqa/text.hpp"
#include "doctest.h"
#include "fixtures.hpp"

using namespace convqa;

TEST_SUITE("corpus") {

TEST_CASE("segmenter splits on terminators followed by capitalized text") {
    const RuleSegmenter seg;
    CHECK(seg.segment("One. Two. Three.") ==
          std::vector<std::string>{"One.", "Two.", "Three."});
    CHECK(seg.segment("Is it real? Yes! Good.") ==
          std::vector<std::string>{"Is it real?", "Yes!", "Good."});
    CHECK(seg.segment("It was 1999. 2000 came next.") ==
          std::vector<std::string>{"It was 1999.", "2000 came next."});
}

TEST_CASE("segmenter keeps abbreviations and lowercase continuations together") {
    const RuleSegmenter seg;
    CHECK(seg.segment("Dr. Smith arrived. He sat.") ==
          std::vector<std::string>{"Dr. Smith arrived.", "He sat."});
    CHECK(seg.segment("See e.g. the appendix. Then stop.") ==
          std::vector<std::string>{"See e.g. the appendix.", "Then stop."});
    // lowercase after the period -> same sentence
    CHECK(seg.segment("It grows approx. two meters tall.") ==
          std::vector<std::string>{"It grows approx. two meters tall."});
}

TEST_CASE("segmenter handles closing quotes and brackets") {
    const RuleSegmenter seg;
    CHECK(seg.segment("He said \"stop.\" Then left.") ==
          std::vector<std::string>{"He said \"stop.\"", "Then left."});
    CHECK(seg.segment("It works (mostly). \"Quote\" follows.") ==
          std::vector<std::string>{"It works (mostly).", "\"Quote\" follows."});
}

TEST_CASE("segmenter output joins back to the normalized input") {
    const RuleSegmenter seg;
    const std::string raw = "  First   sentence. Second one? Dr. Who said \"hi.\" The (end). ";
    const auto sentences = seg.segment(raw);
    std::string joined;
    for (std::size_t i = 0; i < sentences.size(); ++i) {
        if (i) joined += ' ';
        joined += sentences[i];
    }
    CHECK(joined == normalize_whitespace(raw));
    for (const auto& s : sentences) CHECK(is_normalized(s));
}

TEST_CASE("segment_passage builds a passage and validates inputs") {
    const RuleSegmenter seg;
    const Passage p = segment_passage("p1", "Topic", "One. Two.", seg);
    CHECK(p.id == "p1");
    CHECK(p.title == "Topic");
    CHECK(p.sentences == std::vector<std::string>{"One.", "Two."});
    CHECK(p.normalized_text() == "One. Two.");
    CHECK_THROWS_AS(segment_passage("", "T", "One.", seg), std::invalid_argument);
    CHECK_THROWS_AS(segment_passage("p2", "T", "   ", seg), std::invalid_argument);
}

TEST_CASE("title prompt template") {
    CHECK(build_title_prompt("Mount Fuji") == "Hello, I want to learn about Mount Fuji.");
    CHECK(build_title_prompt("X", "About {title}?") == "About X?");
    CHECK_THROWS_AS(build_title_prompt(""), std::invalid_argument);
    CHECK_THROWS_AS(build_title_prompt("X", "no placeholder"), std::invalid_argument);
    CHECK_THROWS_AS(build_title_prompt("X", "{title} and {title}"), std::invalid_argument);
    CHECK(std::string(kDefaultPromptTemplate) == "Hello, I want to learn about {title}.");
}

TEST_CASE("corpus kind names round-trip") {
    CHECK(corpus_kind_name(CorpusKind::OpenDomainDialog) == "open_domain_dialog");
    CHECK(corpus_kind_name(CorpusKind::ConvQADialog) == "convqa_dialog");
    CHECK(corpus_kind_name(CorpusKind::TextPassages) == "text_passages");
    CHECK(corpus_kind_from_name("convqa_dialog") == CorpusKind::ConvQADialog);
    CHECK_THROWS_AS(corpus_kind_from_name("nope"), std::invalid_argument);
}

TEST_CASE("registry resolves relative paths against its own directory") {
    fixtures::TempDir tmp("registry");
    fixtures::write_text(tmp.file("corpora.json"),
                         R"([{"name":"qa","kind":"convqa_dialog","path":"qa.jsonl"},)"
                         R"({"name":"chat","kind":"open_domain_dialog","path":"/abs/chat.jsonl",)"
                         R"("adapter":"turns"}])");
    const auto descs = load_corpus_registry(tmp.file("corpora.json"));
    REQUIRE(descs.size() == 2);
    CHECK(descs[0].name == "qa");
    CHECK(descs[0].kind == CorpusKind::ConvQADialog);
    CHECK(descs[0].path == tmp.file("qa.jsonl"));
    CHECK(descs[0].adapter.empty());
    CHECK(descs[1].path == std::filesystem::path("/abs/chat.jsonl"));
    CHECK(descs[1].adapter == "turns");
}

TEST_CASE("registry rejects malformed files") {
    fixtures::TempDir tmp("registry-bad");
    fixtures::write_text(tmp.file("bad.json"), R"({"not":"an array"})");
    CHECK_THROWS_AS(load_corpus_registry(tmp.file("bad.json")), std::runtime_error);
    fixtures::write_text(tmp.file("badkind.json"),
                         R"([{"name":"x","kind":"mystery","path":"x.jsonl"}])");
    CHECK_THROWS(load_corpus_registry(tmp.file("badkind.json")));
}

TEST_CASE("dialog corpus loads the default record shape") {
    fixtures::TempDir tmp("dialogs");
    fixtures::write_text(
        tmp.file("d.jsonl"),
        R"({"id":"d1","title":"T1","utterances":[{"role":"user","text":"Q?"},{"role":"agent","text":"A."}]})"
        "\n"
        R"({"utterances":[{"role":"user","text":"Q2?"},{"role":"agent","text":"A2."}]})"
        "\n");
    CorpusDescriptor desc{"mini", CorpusKind::ConvQADialog, tmp.file("d.jsonl"), ""};
    const DialogCorpus corpus = load_dialog_corpus(desc);
    REQUIRE(corpus.dialogs.size() == 2);
    CHECK(corpus.skipped == 0);
    CHECK(corpus.dialogs[0].id == "d1");
    CHECK(corpus.dialogs[0].title == "T1");
    CHECK(corpus.dialogs[0].utterances[0].origin == Origin::Corpus);
    CHECK(corpus.dialogs[1].id == "mini-0"); // synthesized: first record without an id
    CHECK(corpus.mean_turns() == doctest::Approx(2.0));
}

TEST_CASE("turns adapter alternates roles starting with the user") {
    fixtures::TempDir tmp("turns");
    fixtures::write_text(tmp.file("t.jsonl"),
                         R"({"id":"t1","turns":["hi?","hello.","more?","sure."]})"
                         "\n");
    CorpusDescriptor desc{"chat", CorpusKind::OpenDomainDialog, tmp.file("t.jsonl"), "turns"};
    const DialogCorpus corpus = load_dialog_corpus(desc);
    REQUIRE(corpus.dialogs.size() == 1);
    const Dialog& d = corpus.dialogs[0];
    REQUIRE(d.utterances.size() == 4);
    CHECK(d.utterances[0].role == Role::User);
    CHECK(d.utterances[1].role == Role::Agent);
    CHECK(d.utterances[3].text == "sure.");
}

TEST_CASE("invalid records are skipped up to the tolerance") {
    fixtures::TempDir tmp("skippy");
    std::string body;
    for (int i = 0; i < 99; ++i) {
        body += R"({"utterances":[{"role":"user","text":"Q?"},{"role":"agent","text":"A."}]})";
        body += "\n";
    }
    body += "not json\n";
    fixtures::write_text(tmp.file("d.jsonl"), body);
    CorpusDescriptor desc{"tol", CorpusKind::OpenDomainDialog, tmp.file("d.jsonl"), ""};
    const DialogCorpus ok = load_dialog_corpus(desc, 0.02);
    CHECK(ok.dialogs.size() == 99);
    CHECK(ok.skipped == 1);
    // tighter tolerance -> the same file fails
    CHECK_THROWS_AS(load_dialog_corpus(desc, 0.005), std::runtime_error);
}

TEST_CASE("empty corpus file is an error") {
    fixtures::TempDir tmp("empty");
    fixtures::write_text(tmp.file("e.jsonl"), "");
    CorpusDescriptor desc{"none", CorpusKind::OpenDomainDialog, tmp.file("e.jsonl"), ""};
    CHECK_THROWS_AS(load_dialog_corpus(desc), std::runtime_error);
}

TEST_CASE("convqa corpora warn about non-question user turns") {
    fixtures::TempDir tmp("warn");
    fixtures::write_text(
        tmp.file("w.jsonl"),
        R"({"id":"w1","utterances":[{"role":"user","text":"Tell me."},{"role":"agent","text":"A."}]})"
        "\n");
    CorpusDescriptor desc{"warned", CorpusKind::ConvQADialog, tmp.file("w.jsonl"), ""};
    const DialogCorpus corpus = load_dialog_corpus(desc);
    CHECK(corpus.dialogs.size() == 1); // kept, only flagged
    REQUIRE(!corpus.warnings.empty());
    CHECK(corpus.warnings[0].find("w1") != std::string::npos);

    CorpusDescriptor open{"open", CorpusKind::OpenDomainDialog, tmp.file("w.jsonl"), ""};
    CHECK(load_dialog_corpus(open).warnings.empty());
}

TEST_CASE("directory corpora merge in filename order") {
    fixtures::TempDir tmp("dir");
    std::filesystem::create_directories(tmp.file("corpus"));
    fixtures::write_text(
        tmp.file("corpus") / "b.jsonl",
        R"({"id":"from-b","utterances":[{"role":"user","text":"Q?"},{"role":"agent","text":"A."}]})"
        "\n");
    fixtures::write_text(
        tmp.file("corpus") / "a.jsonl",
        R"({"id":"from-a","utterances":[{"role":"user","text":"Q?"},{"role":"agent","text":"A."}]})"
        "\n");
    CorpusDescriptor desc{"dir", CorpusKind::OpenDomainDialog, tmp.file("corpus"), ""};
    const DialogCorpus corpus = load_dialog_corpus(desc);
    REQUIRE(corpus.dialogs.size() == 2);
    CHECK(corpus.dialogs[0].id == "from-a");
    CHECK(corpus.dialogs[1].id == "from-b");
}

TEST_CASE("load_passages is strict and names the line") {
    fixtures::TempDir tmp("passages");
    fixtures::write_text(tmp.file("p.jsonl"),
                         R"({"id":"p1","title":"T","text":"One. Two."})"
                         "\n");
    const RuleSegmenter seg;
    const auto passages = load_passages(tmp.file("p.jsonl"), seg);
    REQUIRE(passages.size() == 1);
    CHECK(passages[0].sentences.size() == 2);

    fixtures::write_text(tmp.file("bad.jsonl"), "{\"id\":\"p1\"}\n");
    try {
        load_passages(tmp.file("bad.jsonl"), seg);
        FAIL("expected a parse error");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("line 1") != std::string::npos);
    }
}

TEST_CASE("passage store lookups") {
    PassageStore store(fixtures::synthetic_passages(3));
    CHECK(store.size() == 3);
    CHECK(store.find("pass-1") != nullptr);
    CHECK(store.find("nope") == nullptr);
    CHECK(store.at("pass-2").title == "Subject 2");
    CHECK_THROWS_AS(store.at("nope"), std::out_of_range);
    Passage dup;
    dup.id = "pass-0";
    dup.title = "Dup";
    dup.sentences = {"X."};
    CHECK_THROWS_AS(store.add(std::move(dup)), std::invalid_argument);
}

} // TEST_SUITE
