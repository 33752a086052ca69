#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "convqa/candidates.hpp"
#include "convqa/dialog.hpp"

namespace convqa {

// Per-question-turn provenance of a generated dialog.
struct TurnMeta {
    std::vector<std::string> keywords;
    std::vector<Candidate> candidates; // retained beam candidates; empty unless retention was on

    bool operator==(const TurnMeta&) const = default;
};

struct DialogMeta {
    std::string title;
    std::string prompt_text;
    std::vector<TurnMeta> turns; // one entry per question turn

    bool operator==(const DialogMeta&) const = default;
};

// A generated ConvQA dataset: dialogs plus per-dialog provenance.
struct ConvQADataset {
    std::string name;
    std::vector<Dialog> dialogs;
    std::map<std::string, DialogMeta> per_dialog_meta;

    bool operator==(const ConvQADataset&) const = default;
};

// Dataset-level invariant violations: invalid dialogs, duplicate ids, and
// meta keys that do not match the dialog ids one-to-one.
std::vector<std::string> validate_dataset(const ConvQADataset& ds);

// On-disk format: UTF-8, one JSON record per line, a header record first.
// Candidate scores are written to a sidecar file ("<path>.scores", one record
// per dialog id) so the main file stays lean. Output is byte-stable: writing
// the same dataset twice produces identical bytes.
void write_dataset(const ConvQADataset& ds, const std::filesystem::path& path);

// Inverse of write_dataset. Parse failures name the line number; invariant
// failures name the dialog id. A missing sidecar is not an error.
ConvQADataset read_dataset(const std::filesystem::path& path);

std::filesystem::path sidecar_path(const std::filesystem::path& dataset_path);

} // namespace convqa
