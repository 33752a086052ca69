#pragma once

// Shared fixtures for the test binaries: a hand-written reference dialog,
// deterministic synthetic corpora, and a scratch-directory guard.

#include <unistd.h>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "convqa/corpus.hpp"
#include "convqa/dialog.hpp"

namespace fixtures {

inline convqa::Utterance user(std::string text, convqa::Origin origin = convqa::Origin::Corpus) {
    return convqa::Utterance{std::move(text), convqa::Role::User, origin};
}

inline convqa::Utterance agent(std::string text, convqa::Origin origin = convqa::Origin::Corpus) {
    return convqa::Utterance{std::move(text), convqa::Role::Agent, origin};
}

// A 12-utterance QA dialog about a flowering shrub; every agent turn is a
// sentence of the underlying encyclopedia-style passage.
inline convqa::Dialog wiki_shrub_dialog() {
    convqa::Dialog d;
    d.id = "wiki-shrub";
    d.title = "Grevillea rudis";
    d.utterances = {
        user("Where is Grevillea rudis found?"),
        agent("Grevillea rudis Grevillea rudis is a shrub of the genus \"Grevillea\" native to "
              "an area along the west coast in the Wheatbelt region of Western Australia.",
              convqa::Origin::SourceSentence),
        user("How tall is the shrub?"),
        agent("The loose, spreading to erect shrub typically grows to a height of and has "
              "non-glaucous branchlets.",
              convqa::Origin::SourceSentence),
        user("How do the leaves of the shrub Grevillea rudis look like?"),
        agent("It has simple flat, spathulate, irregularly lobed leaves with a blade that is "
              "long and wide.",
              convqa::Origin::SourceSentence),
        user("How often does the shrub Grevillea rudis bloom?"),
        agent("It blooms sporadically throughout the year and produces a terminal raceme "
              "regular inflorescence with cream or yellow flowers and white or cream styles.",
              convqa::Origin::SourceSentence),
        user("What kind of fruit does the shrub Grevillea rudis produce?"),
        agent("Later it forms obovoid or ellipsoidal glandular hairy fruit that is long.",
              convqa::Origin::SourceSentence),
        user("How does the shrub Grevillea rudis regenerate?"),
        agent("It will regenerate from seed only.", convqa::Origin::SourceSentence),
    };
    return d;
}

// Small fully-specified dialog used for rendering goldens.
inline convqa::Dialog two_pair_dialog() {
    convqa::Dialog d;
    d.id = "pair2";
    d.utterances = {
        user("Q one?"),
        agent("A one."),
        user("Q two?"),
        agent("A two."),
    };
    return d;
}

// `count` synthetic QA dialogs with 2..4 QA pairs, distinct texts.
inline std::vector<convqa::Dialog> synthetic_dialogs(std::size_t count,
                                                     const std::string& prefix = "syn") {
    std::vector<convqa::Dialog> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        convqa::Dialog d;
        d.id = prefix + "-" + std::to_string(i);
        const std::size_t pairs = 2 + i % 3;
        for (std::size_t p = 0; p < pairs; ++p) {
            const std::string tag = std::to_string(i) + "-" + std::to_string(p);
            d.utterances.push_back(user("What about topic " + tag + "?"));
            d.utterances.push_back(agent("Topic " + tag + " concerns subject " + tag + "."));
        }
        out.push_back(std::move(d));
    }
    return out;
}

// `count` synthetic passages with 2..4 sentences each.
inline std::vector<convqa::Passage> synthetic_passages(std::size_t count,
                                                       const std::string& prefix = "pass") {
    std::vector<convqa::Passage> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        convqa::Passage p;
        p.id = prefix + "-" + std::to_string(i);
        p.title = "Subject " + std::to_string(i);
        const std::size_t n = 2 + i % 3;
        for (std::size_t s = 0; s < n; ++s) {
            p.sentences.push_back("Fact " + std::to_string(s) + " about item " +
                                  std::to_string(i) + " mentions detail " + std::to_string(s) +
                                  ".");
        }
        p.raw_text = p.normalized_text();
        out.push_back(std::move(p));
    }
    return out;
}

// Unique scratch directory, removed on destruction.
struct TempDir {
    std::filesystem::path path;

    explicit TempDir(const std::string& tag) {
        static std::uint64_t counter = 0;
        path = std::filesystem::temp_directory_path() /
               ("convqa-test-" + tag + "-" + std::to_string(::getpid()) + "-" +
                std::to_string(counter++));
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::filesystem::path file(const std::string& name) const { return path / name; }
};

inline void write_text(const std::filesystem::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary);
    out << content;
}

// Repo data/ directory (CONVQA_TEST_DATA_DIR is set by the build).
inline std::filesystem::path data_file(const std::string& name) {
    return std::filesystem::path(CONVQA_TEST_DATA_DIR) / name;
}

} // namespace fixtures
