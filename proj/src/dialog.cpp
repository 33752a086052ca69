#include "convqa/dialog.hpp"

#include <stdexcept>

#include "convqa/text.hpp"

namespace convqa {

std::string_view role_name(Role r) {
    switch (r) {
        case Role::User: return "user";
        case Role::Agent: return "agent";
    }
    return "user";
}

std::string_view origin_name(Origin o) {
    switch (o) {
        case Origin::SourceSentence: return "source_sentence";
        case Origin::Generated: return "generated";
        case Origin::Corpus: return "corpus";
    }
    return "corpus";
}

Role role_from_name(std::string_view name) {
    if (name == "user") return Role::User;
    if (name == "agent") return Role::Agent;
    throw std::invalid_argument("unknown role: " + std::string(name));
}

Origin origin_from_name(std::string_view name) {
    if (name == "source_sentence") return Origin::SourceSentence;
    if (name == "generated") return Origin::Generated;
    if (name == "corpus") return Origin::Corpus;
    throw std::invalid_argument("unknown origin: " + std::string(name));
}

std::vector<std::string> validate_dialog(const Dialog& d) {
    std::vector<std::string> violations;
    if (d.utterances.size() < 2) {
        violations.push_back("dialog '" + d.id + "': fewer than 2 utterances (T=" +
                             std::to_string(d.utterances.size()) + ")");
    }
    for (std::size_t i = 0; i < d.utterances.size(); ++i) {
        const Utterance& u = d.utterances[i];
        const std::string at = "utterance " + std::to_string(i);
        if (u.text.empty()) {
            violations.push_back(at + ": text is empty");
        } else if (!is_normalized(u.text)) {
            violations.push_back(at + ": text is not whitespace-normalized");
        }
        if (i > 0 && u.role == d.utterances[i - 1].role) {
            violations.push_back(at + ": role does not alternate with previous utterance");
        }
        if (u.origin == Origin::SourceSentence && u.role != Role::Agent) {
            violations.push_back(at + ": source-sentence origin requires agent role");
        }
    }
    return violations;
}

std::string MaskedDialog::render_plain(std::string_view separator) const {
    std::string out;
    for (std::size_t i = 0; i < base.utterances.size(); ++i) {
        if (i > 0) out += separator;
        out += (i == mask_index) ? mask_sentinel : base.utterances[i].text;
    }
    return out;
}

MaskedDialog mask_utterance(const Dialog& d, std::size_t t, std::string sentinel) {
    if (t >= d.utterances.size()) {
        throw std::out_of_range("mask_utterance: index " + std::to_string(t) +
                                " out of range for dialog with T=" +
                                std::to_string(d.utterances.size()));
    }
    return MaskedDialog{d, t, std::move(sentinel)};
}

std::vector<QAPair> qa_pairs(const Dialog& d) {
    std::vector<QAPair> pairs;
    for (std::size_t i = 0; i + 1 < d.utterances.size(); ++i) {
        if (d.utterances[i].role == Role::User && d.utterances[i + 1].role == Role::Agent) {
            pairs.push_back(QAPair{d.utterances[i], d.utterances[i + 1], i});
        }
    }
    return pairs;
}

std::string Passage::normalized_text() const {
    std::string out;
    for (std::size_t i = 0; i < sentences.size(); ++i) {
        if (i > 0) out += ' ';
        out += sentences[i];
    }
    return out;
}

} // namespace convqa
