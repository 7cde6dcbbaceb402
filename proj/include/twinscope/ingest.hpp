#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "twinscope/corpus.hpp"

namespace twinscope {

enum class InputFormat { json_lines, tsv };

// Accepts "json-lines" / "jsonl" / "tsv". Throws UsageError otherwise.
InputFormat parse_input_format(std::string_view name);

struct IngestStats {
    std::size_t lines = 0;       // non-blank, excluding a TSV header
    std::size_t records = 0;
    std::size_t malformed = 0;   // includes duplicates
    std::size_t duplicates = 0;
    std::vector<std::string> sample_errors;  // first few, "line N: reason"
};

struct IngestResult {
    Corpus corpus;
    IngestStats stats;
};

// Malformed lines are skipped and counted. More than half malformed throws
// FormatError; an unreadable file throws IoError. With threads > 1 lines are
// parsed concurrently in batches; the result is identical to threads == 1.
IngestResult parse_corpus(const std::filesystem::path& path, InputFormat format, unsigned threads = 1);
IngestResult parse_corpus(std::istream& in, InputFormat format, unsigned threads = 1);

// Lowercase, collapse whitespace, strip surrounding punctuation. Idempotent.
std::string normalize_venue(std::string_view raw);

// Name lowercased and whitespace-collapsed, id untouched. nullopt when both
// end up empty (the record is then rejected).
std::optional<AuthorRef> normalize_author(std::string_view author_id, std::string_view name);

// Single-line parsers. On failure return nullopt and set *error when given.
std::optional<PaperRecord> parse_json_record(std::string_view line, std::string* error = nullptr);
std::optional<PaperRecord> parse_tsv_record(std::string_view line, std::string* error = nullptr);

std::string to_json_line(const PaperRecord& p);
std::string to_tsv_line(const PaperRecord& p);
extern const std::string_view kTsvHeader;

// One record per line; TSV output starts with kTsvHeader.
void write_corpus(std::ostream& out, const Corpus& corpus, InputFormat format);

}  // namespace twinscope
