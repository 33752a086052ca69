#pragma once

#include <functional>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "convqa/candidates.hpp"

namespace convqa {

// Contextual relevance of a candidate question to (context, answer).
// Implementations must be deterministic and return finite values.
class RelevanceScorer {
public:
    virtual ~RelevanceScorer() = default;
    virtual std::string name() const = 0;
    virtual double score(const std::string& context, const std::string& question,
                         const std::string& answer) const = 0;
};

// Fraction of the question's unique content words that also occur in the
// answer or the context. 0 when the question has no content words.
class LexicalOverlapScorer : public RelevanceScorer {
public:
    LexicalOverlapScorer(); // built-in stopword list
    explicit LexicalOverlapScorer(std::set<std::string> stopwords);

    std::string name() const override { return "lexical-overlap"; }
    double score(const std::string& context, const std::string& question,
                 const std::string& answer) const override;

private:
    std::set<std::string> stopwords_;
};

// Scores every candidate and returns the argmax index (ties go to the lowest
// index, i.e. the highest model score). Throws before mutating the set when
// any candidate is empty or the scorer fails / returns a non-finite value.
std::size_t rerank(CandidateSet& cs, const RelevanceScorer& scorer, const std::string& context,
                   const std::string& answer);

using ScorerFactory = std::function<std::unique_ptr<RelevanceScorer>()>;

void register_scorer(const std::string& name, ScorerFactory factory);
std::unique_ptr<RelevanceScorer> make_scorer(const std::string& name);
std::vector<std::string> scorer_names();

} // namespace convqa
