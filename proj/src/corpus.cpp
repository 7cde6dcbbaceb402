#include "twinscope/corpus.hpp"

#include <algorithm>
#include <limits>

#include "record_codec.hpp"
#include "twinscope/error.hpp"
#include "twinscope/hash.hpp"

namespace twinscope {
namespace {

struct HashSink {
    Fnv1a64& h;
    void write(const char* data, std::size_t n) { h.update(data, n); }
};

}  // namespace

std::string AuthorRef::key() const {
    if (!author_id.empty()) return "id:" + author_id;
    return "name:" + name;
}

std::optional<std::string> validate_record(const PaperRecord& p) {
    if (p.id.empty()) return "empty id";
    if (p.year && *p.year <= 0) return "non-positive year";
    if (p.page_start && p.page_end && *p.page_end < *p.page_start) return "page_end before page_start";
    if (p.citation_count && *p.citation_count < 0) return "negative citation count";
    for (const auto& a : p.authors)
        if (a.author_id.empty() && a.name.empty()) return "author with neither id nor name";
    std::vector<std::string_view> refs(p.references.begin(), p.references.end());
    std::sort(refs.begin(), refs.end());
    if (std::adjacent_find(refs.begin(), refs.end()) != refs.end()) return "duplicate reference";
    if (std::binary_search(refs.begin(), refs.end(), std::string_view(p.id))) return "self reference";
    return std::nullopt;
}

Corpus::Corpus() : ref_offsets_{0}, cite_offsets_{0}, fingerprint_(Fnv1a64{}.hex()) {}

Corpus::Corpus(std::vector<PaperRecord> papers) : papers_(std::move(papers)) {
    const std::size_t n = papers_.size();
    if (n > std::numeric_limits<Index>::max()) throw DataError("corpus too large");
    by_id_.reserve(n);
    Fnv1a64 h;
    HashSink sink{h};
    for (std::size_t i = 0; i < n; ++i) {
        const PaperRecord& p = papers_[i];
        if (auto why = validate_record(p)) throw DataError("invalid record '" + p.id + "': " + *why);
        if (!by_id_.emplace(p.id, static_cast<Index>(i)).second) throw DataError("duplicate paper id '" + p.id + "'");
        detail::encode_record(sink, p);
    }
    fingerprint_ = h.hex();

    ref_offsets_.assign(n + 1, 0);
    std::vector<std::uint32_t> in_degree(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t resolved = 0;
        for (const auto& r : papers_[i].references) {
            auto it = by_id_.find(r);
            if (it != by_id_.end()) {
                ++resolved;
                ++in_degree[it->second];
            }
        }
        ref_offsets_[i + 1] = ref_offsets_[i] + resolved;
    }
    ref_targets_.resize(ref_offsets_[n]);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t pos = ref_offsets_[i];
        for (const auto& r : papers_[i].references) {
            auto it = by_id_.find(r);
            if (it != by_id_.end()) ref_targets_[pos++] = it->second;
        }
        std::sort(ref_targets_.begin() + static_cast<std::ptrdiff_t>(ref_offsets_[i]),
                  ref_targets_.begin() + static_cast<std::ptrdiff_t>(pos));
    }

    cite_offsets_.assign(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) cite_offsets_[i + 1] = cite_offsets_[i] + in_degree[i];
    cite_sources_.resize(cite_offsets_[n]);
    std::vector<std::size_t> cursor(cite_offsets_.begin(), cite_offsets_.end() - 1);
    // Sources are visited in ascending order, so each citer list comes out sorted.
    for (std::size_t i = 0; i < n; ++i)
        for (Index t : references_of(static_cast<Index>(i))) cite_sources_[cursor[t]++] = static_cast<Index>(i);
}

std::optional<Corpus::Index> Corpus::find(std::string_view id) const {
    auto it = by_id_.find(std::string(id));
    if (it == by_id_.end()) return std::nullopt;
    return it->second;
}

const PaperRecord& Corpus::at(std::string_view id) const {
    auto i = find(id);
    if (!i) throw DataError("paper '" + std::string(id) + "' not in corpus");
    return papers_[*i];
}

std::span<const Corpus::Index> Corpus::references_of(Index i) const {
    return {ref_targets_.data() + ref_offsets_[i], ref_offsets_[i + 1] - ref_offsets_[i]};
}

std::span<const Corpus::Index> Corpus::citers_of(Index i) const {
    return {cite_sources_.data() + cite_offsets_[i], cite_offsets_[i + 1] - cite_offsets_[i]};
}

std::uint32_t Corpus::in_citations(Index i) const {
    return static_cast<std::uint32_t>(cite_offsets_[i + 1] - cite_offsets_[i]);
}

std::map<std::string, std::uint32_t> Corpus::in_citation_index() const {
    std::map<std::string, std::uint32_t> out;
    for (std::size_t i = 0; i < papers_.size(); ++i) {
        auto c = in_citations(static_cast<Index>(i));
        if (c > 0) out.emplace(papers_[i].id, c);
    }
    return out;
}

}  // namespace twinscope
