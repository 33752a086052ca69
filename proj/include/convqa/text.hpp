#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace convqa {

// Collapses runs of ASCII whitespace into single spaces and trims both ends.
std::string normalize_whitespace(std::string_view text);

// True when normalize_whitespace(text) == text.
bool is_normalized(std::string_view text);

std::string to_lower(std::string_view text);

// Word tokens: maximal runs of alphanumerics plus '-' and '\''.
// Surrounding punctuation is dropped, case is preserved.
std::vector<std::string> word_tokens(std::string_view text);

// Lowercased content-word tokens (word_tokens minus stopword-like filtering
// is done by callers; this only lowercases).
std::vector<std::string> lowercase_tokens(std::string_view text);

std::uint64_t fnv1a64(std::string_view bytes);
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed);

std::string to_hex(std::uint64_t value);

// "2024-05-01T12:00:00Z"
std::string utc_timestamp();

std::string read_file(const std::string& path);

} // namespace convqa
