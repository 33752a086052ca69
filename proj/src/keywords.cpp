#include "convqa/keywords.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <stdexcept>

#include "convqa/text.hpp"

namespace convqa {

namespace {

// Keep in sync with data/stopwords.txt (the parity test enforces it).
const char* const kStopwords[] = {
    "a", "about", "above", "after", "again", "against", "all", "am", "an", "and",
    "any", "are", "as", "at", "be", "because", "been", "before", "being", "below",
    "between", "both", "but", "by", "can", "cannot", "could", "did", "do", "does",
    "doing", "down", "during", "each", "few", "for", "from", "further", "had",
    "has", "have", "having", "he", "her", "here", "hers", "herself", "him",
    "himself", "his", "how", "i", "if", "in", "into", "is", "it", "its", "itself",
    "just", "me", "more", "most", "my", "myself", "no", "nor", "not", "now", "of",
    "off", "on", "once", "only", "or", "other", "our", "ours", "ourselves", "out",
    "over", "own", "same", "she", "should", "so", "some", "such", "than", "that",
    "the", "their", "theirs", "them", "themselves", "then", "there", "these",
    "they", "this", "those", "through", "to", "too", "under", "until", "up",
    "very", "was", "we", "were", "what", "when", "where", "which", "while", "who",
    "whom", "why", "will", "with", "would", "you", "your", "yours", "yourself",
    "yourselves",
};

} // namespace

const std::set<std::string>& default_stopwords() {
    static const std::set<std::string> words(std::begin(kStopwords), std::end(kStopwords));
    return words;
}

std::set<std::string> load_stopwords(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_stopwords: cannot open " + path.string());
    std::set<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = normalize_whitespace(line);
        if (line.empty()) continue;
        words.insert(to_lower(line));
    }
    return words;
}

FrequencyKeywordExtractor::FrequencyKeywordExtractor() : stopwords_(default_stopwords()) {}

FrequencyKeywordExtractor::FrequencyKeywordExtractor(std::set<std::string> stopwords)
    : stopwords_(std::move(stopwords)) {}

std::vector<std::string> FrequencyKeywordExtractor::extract(const std::string& text,
                                                            std::size_t max_keywords) const {
    if (max_keywords == 0) return {};

    struct Entry {
        std::string surface;    // casing of the first occurrence
        std::size_t count = 0;
        std::size_t first_pos = 0;
    };

    const std::vector<std::string> tokens = word_tokens(text);
    std::map<std::string, Entry> by_key;
    std::vector<std::string> order; // keys in first-occurrence order
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const std::string key = to_lower(tokens[i]);
        if (stopwords_.count(key)) continue;
        auto [it, inserted] = by_key.try_emplace(key);
        if (inserted) {
            it->second.surface = tokens[i];
            it->second.first_pos = i;
            order.push_back(key);
        }
        ++it->second.count;
    }

    std::stable_sort(order.begin(), order.end(), [&](const std::string& a, const std::string& b) {
        const Entry& ea = by_key.at(a);
        const Entry& eb = by_key.at(b);
        if (ea.count != eb.count) return ea.count > eb.count;
        return ea.first_pos < eb.first_pos;
    });

    std::vector<std::string> result;
    for (const std::string& key : order) {
        if (result.size() == max_keywords) break;
        result.push_back(by_key.at(key).surface);
    }
    return result;
}

std::string format_keyword_prompt(const std::vector<std::string>& keywords) {
    if (keywords.empty()) {
        throw std::invalid_argument("format_keyword_prompt: keyword list is empty");
    }
    std::string out = kKeywordPromptPrefix;
    for (std::size_t i = 0; i < keywords.size(); ++i) {
        const std::string k = normalize_whitespace(keywords[i]);
        if (k.empty()) {
            throw std::invalid_argument("format_keyword_prompt: keyword " + std::to_string(i) +
                                        " is empty after normalization");
        }
        if (i > 0) out += ", ";
        out += k;
    }
    return out;
}

} // namespace convqa
