#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace convqa {

inline constexpr std::size_t kDefaultMaxKeywords = 3;

// Extracts salient keywords from a sentence. Implementations must be
// deterministic: the same text always yields the same keyword list.
class KeywordExtractor {
public:
    virtual ~KeywordExtractor() = default;

    // Up to max_keywords keywords, most salient first. Each keyword is a
    // byte substring of a token of `text` (casing preserved from its first
    // occurrence). May be empty when the text has no content words.
    virtual std::vector<std::string> extract(const std::string& text,
                                             std::size_t max_keywords) const = 0;

    virtual std::string name() const = 0;
};

// Term-frequency extractor over non-stopword tokens. Ties in frequency are
// broken by first occurrence in the text.
class FrequencyKeywordExtractor : public KeywordExtractor {
public:
    FrequencyKeywordExtractor(); // uses the built-in stopword list
    explicit FrequencyKeywordExtractor(std::set<std::string> stopwords);

    std::vector<std::string> extract(const std::string& text,
                                     std::size_t max_keywords) const override;
    std::string name() const override { return "frequency"; }

private:
    std::set<std::string> stopwords_;
};

// Built-in stopword list (lowercase). data/stopwords.txt mirrors it.
const std::set<std::string>& default_stopwords();

// Loads one lowercase word per line; '#' starts a comment, blanks skipped.
std::set<std::string> load_stopwords(const std::filesystem::path& path);

// "Keyword: k1, k2, ..."  Keywords are whitespace-normalized first.
// Throws std::invalid_argument when the list is empty or a keyword
// normalizes to the empty string.
std::string format_keyword_prompt(const std::vector<std::string>& keywords);

inline constexpr const char* kKeywordPromptPrefix = "Keyword: ";

} // namespace convqa
