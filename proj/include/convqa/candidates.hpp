#pragma once

#include <optional>
#include <string>
#include <vector>

namespace convqa {

struct Candidate {
    std::string text;
    double model_score = 0.0;
    std::optional<double> relevance_score;

    bool operator==(const Candidate&) const = default;
};

// Beam candidates for one masked slot, ordered by non-increasing model score.
struct CandidateSet {
    std::vector<Candidate> candidates;

    // Throws std::invalid_argument when empty or when model scores increase
    // along the list.
    void validate() const;

    bool operator==(const CandidateSet&) const = default;
};

} // namespace convqa
