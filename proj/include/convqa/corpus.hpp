#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "convqa/dialog.hpp"

namespace convqa {

enum class CorpusKind {
    OpenDomainDialog, // chit-chat style dialogs, used for reconstruction only
    ConvQADialog,     // question-answer dialogs, used for matching / generation
    TextPassages,     // raw documents to be inpainted
};

std::string corpus_kind_name(CorpusKind kind);
CorpusKind corpus_kind_from_name(const std::string& name);

struct CorpusDescriptor {
    std::string name;
    CorpusKind kind = CorpusKind::OpenDomainDialog;
    std::filesystem::path path;
    std::string adapter; // record adapter name, "" = default
};

// Reads a JSON array of {name, kind, path, adapter?} records. Relative paths
// resolve against the registry file's directory.
std::vector<CorpusDescriptor> load_corpus_registry(const std::filesystem::path& path);

// --- sentence segmentation ---------------------------------------------

class SentenceSegmenter {
public:
    virtual ~SentenceSegmenter() = default;
    // Splits normalized text into sentences. Joining the result with single
    // spaces must reproduce normalize_whitespace(text).
    virtual std::vector<std::string> segment(const std::string& text) const = 0;
    virtual std::string name() const = 0;
};

// Rule-based segmenter: splits after [.?!] (plus trailing quotes/brackets)
// when followed by a space and an uppercase letter, digit, or opening quote,
// unless the preceding token is a known abbreviation.
class RuleSegmenter : public SentenceSegmenter {
public:
    RuleSegmenter();
    explicit RuleSegmenter(std::vector<std::string> abbreviations);

    std::vector<std::string> segment(const std::string& text) const override;
    std::string name() const override { return "rule"; }

private:
    std::vector<std::string> abbreviations_; // lowercase, no trailing period
};

// Turns raw passage text into a Passage with sentences populated.
Passage segment_passage(const std::string& id, const std::string& title,
                        const std::string& raw_text, const SentenceSegmenter& segmenter);

// "Hello, I want to learn about {title}."  The template must contain
// "{title}" exactly once; the title must be non-empty after normalization.
inline constexpr const char* kDefaultPromptTemplate = "Hello, I want to learn about {title}.";
std::string build_title_prompt(const std::string& title,
                               const std::string& prompt_template = kDefaultPromptTemplate);

// --- dialog corpora ------------------------------------------------------

struct DialogCorpus {
    CorpusDescriptor descriptor;
    std::vector<Dialog> dialogs;
    std::size_t skipped = 0;            // records dropped as unparseable/invalid
    std::vector<std::string> warnings;  // e.g. non-question user turns in ConvQA data
    double mean_turns() const;
};

// Loads dialogs from a JSONL file (records: {id, utterances:[{role,text}], title?})
// or a directory of such files (merged in filename order). Unparseable or
// invariant-violating records are skipped and counted; throws when more than
// max_skip_fraction of records had to be dropped.
DialogCorpus load_dialog_corpus(const CorpusDescriptor& descriptor,
                                double max_skip_fraction = 0.01);

// --- passage corpora -----------------------------------------------------

// Loads passages from JSONL records {id, title, text}; text is segmented.
std::vector<Passage> load_passages(const std::filesystem::path& path,
                                   const SentenceSegmenter& segmenter);

// Keyed passage lookup used by the retrieval harness.
class PassageStore {
public:
    PassageStore() = default;
    explicit PassageStore(std::vector<Passage> passages);

    void add(Passage passage); // throws on duplicate id
    const Passage* find(const std::string& id) const;
    const Passage& at(const std::string& id) const; // throws std::out_of_range
    std::size_t size() const { return passages_.size(); }
    const std::vector<Passage>& all() const { return passages_; }

private:
    std::vector<Passage> passages_;
    std::map<std::string, std::size_t> index_;
};

} // namespace convqa
