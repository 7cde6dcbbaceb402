#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

// Byte-level text helpers shared by ingest, treatments and diagnostics.
// Input is UTF-8; invalid sequences are treated as ordinary (non-space) bytes.
namespace twinscope::text {

// Unicode White_Space property.
bool is_unicode_space(char32_t cp) noexcept;

// Maximal runs of non-whitespace, in order. Views point into `s`.
std::vector<std::string_view> split_whitespace(std::string_view s);

std::size_t count_tokens(std::string_view s);

std::string ascii_lower(std::string_view s);

bool is_ascii_punct(char c) noexcept;

// Drops leading/trailing ASCII punctuation.
std::string_view strip_punct(std::string_view s) noexcept;

// Single spaces between tokens, no surrounding whitespace.
std::string collapse_whitespace(std::string_view s);

// Lowercase, whitespace split, surrounding punctuation stripped, empty tokens dropped.
// This is the tokenizer behind bag-of-words distances and keyword matching.
std::vector<std::string> bag_tokens(std::string_view s);

}  // namespace twinscope::text
