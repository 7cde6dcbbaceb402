#pragma once

#include <compare>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "twinscope/corpus.hpp"

namespace twinscope {

// Two papers that cite each other. Canonical: first < second in byte order.
struct TwinPair {
    std::string first;
    std::string second;

    auto operator<=>(const TwinPair&) const = default;
};

// Orders the two ids canonically. Throws DataError when they are equal.
TwinPair canonical_pair(std::string a, std::string b);

struct TwinSet {
    std::vector<TwinPair> pairs;  // sorted, unique
    std::string source_fingerprint;

    std::size_t size() const noexcept { return pairs.size(); }
    bool empty() const noexcept { return pairs.empty(); }
    auto begin() const noexcept { return pairs.begin(); }
    auto end() const noexcept { return pairs.end(); }
};

// Every {s, t} with t in refs(s) and s in refs(t), canonical and sorted.
TwinSet detect_twins(const Corpus& corpus, unsigned threads = 1);

struct FilteredTwins {
    TwinSet twins;
    std::size_t dropped_missing_year = 0;
};

// Keeps pairs whose publication years differ by at most max_year_gap.
// Absent bound returns the input unchanged. Negative bound throws UsageError.
FilteredTwins filter_twins(const TwinSet& twins, const Corpus& corpus, std::optional<int> max_year_gap);

// Twin-list interchange format: "first<TAB>second\n", sorted.
void write_twin_list(std::ostream& out, const TwinSet& twins);

struct TwinListRead {
    TwinSet twins;
    std::size_t malformed_lines = 0;
    std::size_t duplicate_pairs = 0;
};

// Lines are canonicalized, sorted and deduplicated; the fingerprint is the
// content hash of the list.
TwinListRead read_twin_list(std::istream& in);

struct RestrictedTwins {
    TwinSet twins;
    std::size_t dropped_missing_paper = 0;
};

// Drops pairs naming a paper that is not in the corpus.
RestrictedTwins restrict_to_corpus(const TwinSet& twins, const Corpus& corpus);

}  // namespace twinscope
