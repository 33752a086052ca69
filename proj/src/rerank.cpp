#include "convqa/rerank.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

#include "convqa/keywords.hpp"
#include "convqa/text.hpp"

namespace convqa {

LexicalOverlapScorer::LexicalOverlapScorer() : stopwords_(default_stopwords()) {}

LexicalOverlapScorer::LexicalOverlapScorer(std::set<std::string> stopwords)
    : stopwords_(std::move(stopwords)) {}

namespace {

std::set<std::string> content_words(const std::string& text,
                                    const std::set<std::string>& stopwords) {
    std::set<std::string> words;
    for (const std::string& token : lowercase_tokens(text)) {
        if (!stopwords.count(token)) words.insert(token);
    }
    return words;
}

} // namespace

double LexicalOverlapScorer::score(const std::string& context, const std::string& question,
                                   const std::string& answer) const {
    const std::set<std::string> q = content_words(question, stopwords_);
    if (q.empty()) return 0.0;
    std::set<std::string> support = content_words(answer, stopwords_);
    for (const std::string& w : content_words(context, stopwords_)) support.insert(w);
    std::size_t hit = 0;
    for (const std::string& w : q) {
        if (support.count(w)) ++hit;
    }
    return static_cast<double>(hit) / static_cast<double>(q.size());
}

std::size_t rerank(CandidateSet& cs, const RelevanceScorer& scorer, const std::string& context,
                   const std::string& answer) {
    cs.validate();
    for (std::size_t i = 0; i < cs.candidates.size(); ++i) {
        if (cs.candidates[i].text.empty()) {
            throw std::invalid_argument("rerank: candidate " + std::to_string(i) + " is empty");
        }
    }
    // score everything first so a scorer failure leaves the set untouched
    std::vector<double> scores;
    scores.reserve(cs.candidates.size());
    for (std::size_t i = 0; i < cs.candidates.size(); ++i) {
        const double s = scorer.score(context, cs.candidates[i].text, answer);
        if (!std::isfinite(s)) {
            throw std::runtime_error("rerank: scorer '" + scorer.name() +
                                     "' returned a non-finite score for candidate " +
                                     std::to_string(i));
        }
        scores.push_back(s);
    }
    std::size_t best = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        cs.candidates[i].relevance_score = scores[i];
        if (scores[i] > scores[best]) best = i;
    }
    return best;
}

namespace {

std::map<std::string, ScorerFactory>& scorer_registry() {
    static std::map<std::string, ScorerFactory> registry{
        {"lexical-overlap", [] { return std::make_unique<LexicalOverlapScorer>(); }},
    };
    return registry;
}

} // namespace

void register_scorer(const std::string& name, ScorerFactory factory) {
    auto [it, inserted] = scorer_registry().emplace(name, std::move(factory));
    (void)it;
    if (!inserted) {
        throw std::invalid_argument("register_scorer: scorer '" + name + "' already registered");
    }
}

std::unique_ptr<RelevanceScorer> make_scorer(const std::string& name) {
    const auto& registry = scorer_registry();
    const auto it = registry.find(name);
    if (it == registry.end()) {
        std::string known;
        for (const auto& [k, v] : registry) {
            (void)v;
            if (!known.empty()) known += ", ";
            known += k;
        }
        throw std::invalid_argument("make_scorer: unknown scorer '" + name + "' (known: " + known +
                                    ")");
    }
    return it->second();
}

std::vector<std::string> scorer_names() {
    std::vector<std::string> names;
    for (const auto& [k, v] : scorer_registry()) {
        (void)v;
        names.push_back(k);
    }
    return names;
}

} // namespace convqa
