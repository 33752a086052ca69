#include "convqa/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "convqa/text.hpp"

namespace convqa {

namespace {

using ordered_json = nlohmann::ordered_json;

bool is_closer(char c) {
    return c == '"' || c == '\'' || c == ')' || c == ']';
}

bool is_sentence_start(char c) {
    return (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '"' || c == '\'' ||
           c == '(' || c == '[';
}

const char* const kAbbreviations[] = {
    "al", "cf", "co", "dr", "e.g", "etc", "fig", "i.e", "inc", "jr",
    "ltd", "mr", "mrs", "ms", "prof", "rev", "sr", "st", "vs",
};

} // namespace

std::string corpus_kind_name(CorpusKind kind) {
    switch (kind) {
    case CorpusKind::OpenDomainDialog: return "open_domain_dialog";
    case CorpusKind::ConvQADialog: return "convqa_dialog";
    case CorpusKind::TextPassages: return "text_passages";
    }
    throw std::invalid_argument("corpus_kind_name: unknown kind");
}

CorpusKind corpus_kind_from_name(const std::string& name) {
    if (name == "open_domain_dialog") return CorpusKind::OpenDomainDialog;
    if (name == "convqa_dialog") return CorpusKind::ConvQADialog;
    if (name == "text_passages") return CorpusKind::TextPassages;
    throw std::invalid_argument("corpus_kind_from_name: unknown corpus kind '" + name + "'");
}

std::vector<CorpusDescriptor> load_corpus_registry(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_corpus_registry: cannot open " + path.string());
    ordered_json doc;
    try {
        in >> doc;
    } catch (const std::exception& e) {
        throw std::runtime_error("load_corpus_registry: " + path.string() + ": " + e.what());
    }
    if (!doc.is_array()) {
        throw std::runtime_error("load_corpus_registry: " + path.string() +
                                 ": expected a JSON array of corpus records");
    }
    const std::filesystem::path base = path.parent_path();
    std::vector<CorpusDescriptor> result;
    for (std::size_t i = 0; i < doc.size(); ++i) {
        const auto& rec = doc[i];
        CorpusDescriptor d;
        try {
            d.name = rec.at("name").get<std::string>();
            d.kind = corpus_kind_from_name(rec.at("kind").get<std::string>());
            std::filesystem::path p = rec.at("path").get<std::string>();
            d.path = p.is_absolute() ? p : base / p;
            d.adapter = rec.value("adapter", std::string());
        } catch (const std::exception& e) {
            throw std::runtime_error("load_corpus_registry: record " + std::to_string(i) + ": " +
                                     e.what());
        }
        result.push_back(std::move(d));
    }
    return result;
}

// --- sentence segmentation ---------------------------------------------

RuleSegmenter::RuleSegmenter()
    : abbreviations_(std::begin(kAbbreviations), std::end(kAbbreviations)) {}

RuleSegmenter::RuleSegmenter(std::vector<std::string> abbreviations)
    : abbreviations_(std::move(abbreviations)) {}

std::vector<std::string> RuleSegmenter::segment(const std::string& text) const {
    const std::string t = normalize_whitespace(text);
    if (t.empty()) return {};

    auto preceding_token_is_abbreviation = [&](std::size_t dot) {
        std::string token;
        for (std::size_t j = dot; j-- > 0;) {
            const char c = t[j];
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '.') {
                token.insert(token.begin(), c);
            } else {
                break;
            }
        }
        if (token.empty()) return false;
        const std::string lower = to_lower(token);
        return std::find(abbreviations_.begin(), abbreviations_.end(), lower) !=
               abbreviations_.end();
    };

    std::vector<std::string> sentences;
    std::size_t start = 0;
    std::size_t i = 0;
    while (i < t.size()) {
        const char c = t[i];
        if (c == '.' || c == '?' || c == '!') {
            std::size_t end = i + 1;
            while (end < t.size() && is_closer(t[end])) ++end;
            if (end + 1 < t.size() && t[end] == ' ' && is_sentence_start(t[end + 1]) &&
                !(c == '.' && preceding_token_is_abbreviation(i))) {
                sentences.push_back(t.substr(start, end - start));
                start = end + 1;
                i = end + 1;
                continue;
            }
        }
        ++i;
    }
    if (start < t.size()) sentences.push_back(t.substr(start));
    return sentences;
}

Passage segment_passage(const std::string& id, const std::string& title,
                        const std::string& raw_text, const SentenceSegmenter& segmenter) {
    Passage p;
    p.id = id;
    p.title = normalize_whitespace(title);
    p.raw_text = raw_text;
    p.sentences = segmenter.segment(raw_text);
    if (p.id.empty()) throw std::invalid_argument("segment_passage: passage id is empty");
    if (p.sentences.empty()) {
        throw std::invalid_argument("segment_passage: passage '" + id + "' has no sentences");
    }
    return p;
}

std::string build_title_prompt(const std::string& title, const std::string& prompt_template) {
    const std::string t = normalize_whitespace(title);
    if (t.empty()) {
        throw std::invalid_argument("build_title_prompt: title is empty");
    }
    const std::string placeholder = "{title}";
    const auto pos = prompt_template.find(placeholder);
    if (pos == std::string::npos ||
        prompt_template.find(placeholder, pos + 1) != std::string::npos) {
        throw std::invalid_argument(
            "build_title_prompt: template must contain '{title}' exactly once");
    }
    std::string out = prompt_template;
    out.replace(pos, placeholder.size(), t);
    return normalize_whitespace(out);
}

// --- dialog corpora ------------------------------------------------------

double DialogCorpus::mean_turns() const {
    if (dialogs.empty()) return 0.0;
    std::size_t total = 0;
    for (const Dialog& d : dialogs) total += d.turn_count();
    return static_cast<double>(total) / static_cast<double>(dialogs.size());
}

namespace {

// Canonical record: {id?, title?, utterances:[{role,text}]}
Dialog parse_default_record(const ordered_json& rec) {
    Dialog d;
    if (rec.contains("id")) d.id = rec.at("id").get<std::string>();
    if (rec.contains("title")) d.title = rec.at("title").get<std::string>();
    for (const auto& u : rec.at("utterances")) {
        Utterance utt;
        utt.role = role_from_name(u.at("role").get<std::string>());
        utt.text = normalize_whitespace(u.at("text").get<std::string>());
        utt.origin = Origin::Corpus;
        d.utterances.push_back(std::move(utt));
    }
    return d;
}

// Adapter "turns": {id?, turns:[str, ...]} alternating, user speaks first.
Dialog parse_turns_record(const ordered_json& rec) {
    Dialog d;
    if (rec.contains("id")) d.id = rec.at("id").get<std::string>();
    std::size_t i = 0;
    for (const auto& t : rec.at("turns")) {
        Utterance utt;
        utt.role = (i % 2 == 0) ? Role::User : Role::Agent;
        utt.text = normalize_whitespace(t.get<std::string>());
        utt.origin = Origin::Corpus;
        d.utterances.push_back(std::move(utt));
        ++i;
    }
    return d;
}

std::vector<std::filesystem::path> corpus_files(const std::filesystem::path& path) {
    if (std::filesystem::is_directory(path)) {
        std::vector<std::filesystem::path> files;
        for (const auto& entry : std::filesystem::directory_iterator(path)) {
            if (entry.is_regular_file()) files.push_back(entry.path());
        }
        std::sort(files.begin(), files.end());
        if (files.empty()) {
            throw std::runtime_error("load_dialog_corpus: directory " + path.string() +
                                     " contains no files");
        }
        return files;
    }
    return {path};
}

} // namespace

DialogCorpus load_dialog_corpus(const CorpusDescriptor& descriptor, double max_skip_fraction) {
    DialogCorpus corpus;
    corpus.descriptor = descriptor;

    const bool use_turns_adapter = descriptor.adapter == "turns";
    if (!descriptor.adapter.empty() && !use_turns_adapter && descriptor.adapter != "default") {
        throw std::invalid_argument("load_dialog_corpus: unknown adapter '" + descriptor.adapter +
                                    "' for corpus '" + descriptor.name + "'");
    }

    std::size_t total = 0;
    std::size_t synthesized = 0;
    for (const std::filesystem::path& file : corpus_files(descriptor.path)) {
        std::ifstream in(file, std::ios::binary);
        if (!in) throw std::runtime_error("load_dialog_corpus: cannot open " + file.string());
        std::string line;
        while (std::getline(in, line)) {
            if (normalize_whitespace(line).empty()) continue;
            ++total;
            Dialog d;
            try {
                const ordered_json rec = ordered_json::parse(line);
                d = use_turns_adapter ? parse_turns_record(rec) : parse_default_record(rec);
            } catch (const std::exception&) {
                ++corpus.skipped;
                continue;
            }
            if (d.id.empty()) {
                d.id = descriptor.name + "-" + std::to_string(synthesized++);
            }
            if (!validate_dialog(d).empty()) {
                ++corpus.skipped;
                continue;
            }
            if (descriptor.kind == CorpusKind::ConvQADialog) {
                for (std::size_t t = 0; t < d.utterances.size(); ++t) {
                    const Utterance& u = d.utterances[t];
                    if (u.role == Role::User && (u.text.empty() || u.text.back() != '?')) {
                        corpus.warnings.push_back("dialog '" + d.id + "' turn " +
                                                  std::to_string(t) +
                                                  ": user turn does not look like a question");
                    }
                }
            }
            corpus.dialogs.push_back(std::move(d));
        }
    }

    if (total == 0) {
        throw std::runtime_error("load_dialog_corpus: corpus '" + descriptor.name +
                                 "' contains no records");
    }
    if (static_cast<double>(corpus.skipped) > max_skip_fraction * static_cast<double>(total)) {
        throw std::runtime_error("load_dialog_corpus: corpus '" + descriptor.name + "' skipped " +
                                 std::to_string(corpus.skipped) + " of " + std::to_string(total) +
                                 " records, over the " + std::to_string(max_skip_fraction) +
                                 " tolerance");
    }
    return corpus;
}

// --- passage corpora -----------------------------------------------------

std::vector<Passage> load_passages(const std::filesystem::path& path,
                                   const SentenceSegmenter& segmenter) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_passages: cannot open " + path.string());
    std::vector<Passage> passages;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (normalize_whitespace(line).empty()) continue;
        try {
            const ordered_json rec = ordered_json::parse(line);
            passages.push_back(segment_passage(rec.at("id").get<std::string>(),
                                               rec.value("title", std::string()),
                                               rec.at("text").get<std::string>(), segmenter));
        } catch (const std::exception& e) {
            throw std::runtime_error("load_passages: " + path.string() + " line " +
                                     std::to_string(line_no) + ": " + e.what());
        }
    }
    return passages;
}

PassageStore::PassageStore(std::vector<Passage> passages) {
    for (Passage& p : passages) add(std::move(p));
}

void PassageStore::add(Passage passage) {
    if (index_.count(passage.id)) {
        throw std::invalid_argument("PassageStore: duplicate passage id '" + passage.id + "'");
    }
    index_.emplace(passage.id, passages_.size());
    passages_.push_back(std::move(passage));
}

const Passage* PassageStore::find(const std::string& id) const {
    const auto it = index_.find(id);
    return it == index_.end() ? nullptr : &passages_[it->second];
}

const Passage& PassageStore::at(const std::string& id) const {
    const Passage* p = find(id);
    if (!p) throw std::out_of_range("PassageStore: no passage with id '" + id + "'");
    return *p;
}

} // namespace convqa
