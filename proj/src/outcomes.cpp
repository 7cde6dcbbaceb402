#include "twinscope/outcomes.hpp"

#include <cmath>

#include "twinscope/error.hpp"

namespace twinscope {

CitationSource parse_citation_source(std::string_view name) {
    if (name == "auto") return CitationSource::snapshot_or_internal;
    if (name == "snapshot") return CitationSource::snapshot;
    if (name == "internal") return CitationSource::internal;
    throw UsageError("unknown citation source '" + std::string(name) + "' (expected auto, snapshot or internal)");
}

OutcomeTable::OutcomeTable(std::unordered_map<std::string, double> values, OutcomeConfig config)
    : values_(std::move(values)), config_(config) {}

double OutcomeTable::at(std::string_view id) const {
    if (const double* v = find(id)) return *v;
    throw DataError("no outcome for paper '" + std::string(id) + "'");
}

const double* OutcomeTable::find(std::string_view id) const {
    auto it = values_.find(std::string(id));
    return it == values_.end() ? nullptr : &it->second;
}

double log2_outcome(std::int64_t citations, double smoothing) {
    return std::log2(static_cast<double>(citations) + smoothing);
}

OutcomeTable compute_outcomes(const Corpus& corpus, double smoothing, CitationSource source) {
    if (!(smoothing >= 0.0) || !std::isfinite(smoothing)) throw ConfigError("smoothing must be a finite value >= 0");
    std::unordered_map<std::string, double> values;
    values.reserve(corpus.size());
    std::size_t zero_counts = 0;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const PaperRecord& p = corpus.paper(static_cast<Corpus::Index>(i));
        std::optional<std::int64_t> count;
        switch (source) {
            case CitationSource::snapshot_or_internal:
                count = p.citation_count ? *p.citation_count
                                         : static_cast<std::int64_t>(corpus.in_citations(static_cast<Corpus::Index>(i)));
                break;
            case CitationSource::snapshot:
                count = p.citation_count;
                break;
            case CitationSource::internal:
                count = corpus.in_citations(static_cast<Corpus::Index>(i));
                break;
        }
        if (!count) continue;
        if (*count == 0 && smoothing == 0.0) {
            ++zero_counts;
            continue;
        }
        values.emplace(p.id, log2_outcome(*count, smoothing));
    }
    if (zero_counts > 0)
        throw ConfigError(std::to_string(zero_counts) +
                          " papers have zero citations, so log2 is undefined with smoothing 0; use --smoothing > 0");
    return OutcomeTable(std::move(values), OutcomeConfig{smoothing, source});
}

}  // namespace twinscope
