#include "convqa/candidates.hpp"

#include <cmath>
#include <stdexcept>

namespace convqa {

void CandidateSet::validate() const {
    if (candidates.empty()) {
        throw std::invalid_argument("CandidateSet: must contain at least one candidate");
    }
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const Candidate& c = candidates[i];
        if (!std::isfinite(c.model_score)) {
            throw std::invalid_argument("CandidateSet: candidate " + std::to_string(i) +
                                        " has non-finite model score");
        }
        if (i > 0 && candidates[i - 1].model_score < c.model_score) {
            throw std::invalid_argument(
                "CandidateSet: model scores must be non-increasing (violated at index " +
                std::to_string(i) + ")");
        }
    }
}

} // namespace convqa
