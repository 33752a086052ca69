#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace convqa {

enum class Role { User, Agent };

enum class Origin { SourceSentence, Generated, Corpus };

std::string_view role_name(Role r);
std::string_view origin_name(Origin o);
Role role_from_name(std::string_view name);
Origin origin_from_name(std::string_view name);

struct Utterance {
    std::string text;
    Role role = Role::User;
    Origin origin = Origin::Corpus;

    bool operator==(const Utterance&) const = default;
};

// Ordered utterances with strictly alternating speaker roles.
struct Dialog {
    std::string id;
    std::vector<Utterance> utterances;
    std::optional<std::string> title;
    std::optional<std::string> source_passage_id;

    std::size_t turn_count() const { return utterances.size(); }

    bool operator==(const Dialog&) const = default;
};

// Every violated Dialog invariant, each naming the failing invariant and the
// utterance index. Empty result means the dialog is valid. Total: never
// throws on well-typed input.
std::vector<std::string> validate_dialog(const Dialog& d);

struct MaskedDialog {
    Dialog base;
    std::size_t mask_index = 0;
    std::string mask_sentinel;

    // Utterance texts joined by `separator`, the masked slot replaced by the
    // sentinel. Role tags are the renderer's concern, not applied here.
    std::string render_plain(std::string_view separator = " ") const;
};

// Replaces utterance t by `sentinel` in the rendered view; d is not modified.
MaskedDialog mask_utterance(const Dialog& d, std::size_t t, std::string sentinel);

// A question utterance directly followed by its answer utterance.
struct QAPair {
    Utterance question;
    Utterance answer;
    std::size_t turn_index = 0; // index of the question utterance in the dialog
};

std::vector<QAPair> qa_pairs(const Dialog& d);

struct Passage {
    std::string id;
    std::string title;
    std::vector<std::string> sentences;
    std::string raw_text;

    // Sentences joined by single spaces; equals normalize_whitespace(raw_text)
    // for any passage produced by segment_passage.
    std::string normalized_text() const;
};

} // namespace convqa
