#include "convqa/dataset.hpp"

#include <fstream>
#include <set>
#include <stdexcept>

#include <json.hpp>

namespace convqa {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr const char* kFormatTag = "convqa.dataset";
constexpr int kFormatVersion = 1;

ordered_json utterance_to_json(const Utterance& u) {
    return ordered_json{{"role", role_name(u.role)},
                        {"text", u.text},
                        {"origin", origin_name(u.origin)}};
}

Utterance utterance_from_json(const ordered_json& j) {
    Utterance u;
    u.role = role_from_name(j.at("role").get<std::string>());
    u.text = j.at("text").get<std::string>();
    u.origin = origin_from_name(j.at("origin").get<std::string>());
    return u;
}

ordered_json meta_to_json(const DialogMeta& meta) {
    ordered_json turns = ordered_json::array();
    for (const TurnMeta& t : meta.turns) {
        turns.push_back(ordered_json{{"keywords", t.keywords}});
    }
    return ordered_json{{"title", meta.title},
                        {"prompt", meta.prompt_text},
                        {"turns", std::move(turns)}};
}

DialogMeta meta_from_json(const ordered_json& j) {
    DialogMeta meta;
    meta.title = j.value("title", std::string());
    meta.prompt_text = j.value("prompt", std::string());
    if (j.contains("turns")) {
        for (const auto& t : j.at("turns")) {
            TurnMeta tm;
            if (t.contains("keywords")) {
                tm.keywords = t.at("keywords").get<std::vector<std::string>>();
            }
            meta.turns.push_back(std::move(tm));
        }
    }
    return meta;
}

ordered_json candidate_to_json(const Candidate& c) {
    ordered_json j{{"text", c.text}, {"model_score", c.model_score}};
    if (c.relevance_score) j["relevance_score"] = *c.relevance_score;
    return j;
}

Candidate candidate_from_json(const ordered_json& j) {
    Candidate c;
    c.text = j.at("text").get<std::string>();
    c.model_score = j.at("model_score").get<double>();
    if (j.contains("relevance_score")) c.relevance_score = j.at("relevance_score").get<double>();
    return c;
}

bool has_candidates(const DialogMeta& meta) {
    for (const TurnMeta& t : meta.turns) {
        if (!t.candidates.empty()) return true;
    }
    return false;
}

} // namespace

std::vector<std::string> validate_dataset(const ConvQADataset& ds) {
    std::vector<std::string> violations;
    std::set<std::string> ids;
    for (const Dialog& d : ds.dialogs) {
        if (!ids.insert(d.id).second) {
            violations.push_back("dataset: duplicate dialog id '" + d.id + "'");
        }
        for (const std::string& v : validate_dialog(d)) {
            violations.push_back("dialog '" + d.id + "': " + v);
        }
    }
    for (const auto& [id, meta] : ds.per_dialog_meta) {
        (void)meta;
        if (!ids.count(id)) {
            violations.push_back("dataset: meta entry for unknown dialog id '" + id + "'");
        }
    }
    for (const std::string& id : ids) {
        if (!ds.per_dialog_meta.count(id)) {
            violations.push_back("dataset: dialog '" + id + "' has no meta entry");
        }
    }
    return violations;
}

std::filesystem::path sidecar_path(const std::filesystem::path& dataset_path) {
    std::filesystem::path p = dataset_path;
    p += ".scores";
    return p;
}

void write_dataset(const ConvQADataset& ds, const std::filesystem::path& path) {
    const std::vector<std::string> violations = validate_dataset(ds);
    if (!violations.empty()) {
        throw std::invalid_argument("write_dataset: dataset invalid: " + violations.front() +
                                    (violations.size() > 1 ? " (and " + std::to_string(violations.size() - 1) + " more)"
                                                           : ""));
    }

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("write_dataset: cannot open " + path.string());

    ordered_json header{{"format", kFormatTag}, {"version", kFormatVersion}, {"name", ds.name}};
    out << header.dump() << '\n';

    bool any_candidates = false;
    for (const Dialog& d : ds.dialogs) {
        const DialogMeta& meta = ds.per_dialog_meta.at(d.id);
        any_candidates = any_candidates || has_candidates(meta);
        ordered_json utterances = ordered_json::array();
        for (const Utterance& u : d.utterances) utterances.push_back(utterance_to_json(u));
        ordered_json record{{"id", d.id}};
        if (d.title) record["title"] = *d.title;
        if (d.source_passage_id) record["source_passage_id"] = *d.source_passage_id;
        record["utterances"] = std::move(utterances);
        record["meta"] = meta_to_json(meta);
        out << record.dump() << '\n';
    }
    out.close();

    const std::filesystem::path scores = sidecar_path(path);
    if (any_candidates) {
        std::ofstream side(scores, std::ios::binary | std::ios::trunc);
        if (!side) throw std::runtime_error("write_dataset: cannot open " + scores.string());
        for (const Dialog& d : ds.dialogs) {
            const DialogMeta& meta = ds.per_dialog_meta.at(d.id);
            if (!has_candidates(meta)) continue;
            ordered_json turns = ordered_json::array();
            for (const TurnMeta& t : meta.turns) {
                ordered_json cands = ordered_json::array();
                for (const Candidate& c : t.candidates) cands.push_back(candidate_to_json(c));
                turns.push_back(ordered_json{{"candidates", std::move(cands)}});
            }
            side << ordered_json{{"id", d.id}, {"turns", std::move(turns)}}.dump() << '\n';
        }
    } else if (std::filesystem::exists(scores)) {
        // stale sidecar from a previous write would corrupt a later read
        std::filesystem::remove(scores);
    }
}

ConvQADataset read_dataset(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_dataset: cannot open " + path.string());

    ConvQADataset ds;
    std::string line;
    std::size_t line_no = 0;

    auto parse_line = [&](const std::string& text) -> ordered_json {
        try {
            return ordered_json::parse(text);
        } catch (const std::exception& e) {
            throw std::runtime_error("read_dataset: parse failure at line " +
                                     std::to_string(line_no) + ": " + e.what());
        }
    };

    if (!std::getline(in, line)) {
        throw std::runtime_error("read_dataset: empty file, missing header record");
    }
    ++line_no;
    const ordered_json header = parse_line(line);
    if (header.value("format", std::string()) != kFormatTag) {
        throw std::runtime_error("read_dataset: line 1 is not a dataset header record");
    }
    ds.name = header.value("name", std::string());

    std::set<std::string> ids;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const ordered_json record = parse_line(line);
        Dialog d;
        try {
            d.id = record.at("id").get<std::string>();
            if (record.contains("title")) d.title = record.at("title").get<std::string>();
            if (record.contains("source_passage_id")) {
                d.source_passage_id = record.at("source_passage_id").get<std::string>();
            }
            for (const auto& u : record.at("utterances")) {
                d.utterances.push_back(utterance_from_json(u));
            }
        } catch (const std::exception& e) {
            throw std::runtime_error("read_dataset: malformed record at line " +
                                     std::to_string(line_no) + ": " + e.what());
        }
        if (!ids.insert(d.id).second) {
            throw std::runtime_error("read_dataset: duplicate dialog id '" + d.id + "' at line " +
                                     std::to_string(line_no));
        }
        const std::vector<std::string> violations = validate_dialog(d);
        if (!violations.empty()) {
            throw std::runtime_error("read_dataset: dialog '" + d.id + "' violates invariants: " +
                                     violations.front());
        }
        DialogMeta meta;
        if (record.contains("meta")) meta = meta_from_json(record.at("meta"));
        ds.per_dialog_meta.emplace(d.id, std::move(meta));
        ds.dialogs.push_back(std::move(d));
    }

    const std::filesystem::path scores = sidecar_path(path);
    if (std::filesystem::exists(scores)) {
        std::ifstream side(scores, std::ios::binary);
        if (!side) throw std::runtime_error("read_dataset: cannot open " + scores.string());
        std::size_t side_line = 0;
        while (std::getline(side, line)) {
            ++side_line;
            if (line.empty()) continue;
            ordered_json record;
            try {
                record = ordered_json::parse(line);
            } catch (const std::exception& e) {
                throw std::runtime_error("read_dataset: sidecar parse failure at line " +
                                         std::to_string(side_line) + ": " + e.what());
            }
            const std::string id = record.at("id").get<std::string>();
            auto it = ds.per_dialog_meta.find(id);
            if (it == ds.per_dialog_meta.end()) {
                throw std::runtime_error("read_dataset: sidecar names unknown dialog id '" + id + "'");
            }
            const auto& turns = record.at("turns");
            if (it->second.turns.size() < turns.size()) it->second.turns.resize(turns.size());
            for (std::size_t i = 0; i < turns.size(); ++i) {
                for (const auto& c : turns[i].at("candidates")) {
                    it->second.turns[i].candidates.push_back(candidate_from_json(c));
                }
            }
        }
    }
    return ds;
}

} // namespace convqa
