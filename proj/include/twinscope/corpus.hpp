#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace twinscope {

struct AuthorRef {
    std::string author_id;
    std::string name;  // normalized: lowercase, single spaces

    // Collaboration-network / self-citation identity: id when present, else name.
    std::string key() const;

    bool operator==(const AuthorRef&) const = default;
};

struct PaperRecord {
    std::string id;
    std::string title;
    std::optional<std::string> abstract;
    std::optional<int> year;
    std::optional<std::string> venue;  // normalized
    std::vector<AuthorRef> authors;
    std::vector<std::string> references;  // outgoing, may point outside the corpus
    std::optional<std::int64_t> citation_count;
    std::optional<std::int64_t> page_start;
    std::optional<std::int64_t> page_end;

    bool operator==(const PaperRecord&) const = default;
};

// Returns a reason string when `p` violates a record invariant.
std::optional<std::string> validate_record(const PaperRecord& p);

// Immutable, id-indexed collection of papers with resolved citation edges.
// Safe for concurrent readers.
class Corpus {
public:
    using Index = std::uint32_t;

    Corpus();
    // Throws DataError on an invalid record or a duplicate id.
    explicit Corpus(std::vector<PaperRecord> papers);

    std::size_t size() const noexcept { return papers_.size(); }
    bool empty() const noexcept { return papers_.empty(); }
    const std::vector<PaperRecord>& papers() const noexcept { return papers_; }
    const PaperRecord& paper(Index i) const { return papers_[i]; }

    std::optional<Index> find(std::string_view id) const;
    bool contains(std::string_view id) const { return find(id).has_value(); }
    // Throws DataError naming the id when absent.
    const PaperRecord& at(std::string_view id) const;

    // In-corpus references of paper i, ascending by index. Dangling ids excluded.
    std::span<const Index> references_of(Index i) const;
    // Papers whose references contain i, ascending by index.
    std::span<const Index> citers_of(Index i) const;
    std::uint32_t in_citations(Index i) const;

    // Nonzero entries only.
    std::map<std::string, std::uint32_t> in_citation_index() const;

    std::size_t resolved_reference_count() const noexcept { return ref_targets_.size(); }

    // Content hash over every field of every record, in order.
    const std::string& fingerprint() const noexcept { return fingerprint_; }

    bool operator==(const Corpus& other) const { return papers_ == other.papers_; }

private:
    std::vector<PaperRecord> papers_;
    std::unordered_map<std::string, Index> by_id_;
    std::vector<std::size_t> ref_offsets_;
    std::vector<Index> ref_targets_;
    std::vector<std::size_t> cite_offsets_;
    std::vector<Index> cite_sources_;
    std::string fingerprint_;
};

}  // namespace twinscope
