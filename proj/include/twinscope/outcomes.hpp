#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>

#include "twinscope/corpus.hpp"

namespace twinscope {

enum class CitationSource {
    snapshot_or_internal,  // n_citation when present, else in-corpus count
    snapshot,              // n_citation only; papers without it are not covered
    internal,              // in-corpus count only
};

// Accepts "auto" / "snapshot" / "internal". Throws UsageError.
CitationSource parse_citation_source(std::string_view name);

struct OutcomeConfig {
    double smoothing = 1.0;
    CitationSource source = CitationSource::snapshot_or_internal;
};

// Paper id -> log2(citations + smoothing).
class OutcomeTable {
public:
    OutcomeTable() = default;
    explicit OutcomeTable(std::unordered_map<std::string, double> values, OutcomeConfig config = {});

    // Throws DataError naming the paper when absent.
    double at(std::string_view id) const;
    const double* find(std::string_view id) const;
    std::size_t size() const noexcept { return values_.size(); }
    const OutcomeConfig& config() const noexcept { return config_; }

private:
    std::unordered_map<std::string, double> values_;
    OutcomeConfig config_;
};

double log2_outcome(std::int64_t citations, double smoothing);

// Throws ConfigError when smoothing < 0, or smoothing == 0 and some count is 0.
OutcomeTable compute_outcomes(const Corpus& corpus, double smoothing = 1.0,
                              CitationSource source = CitationSource::snapshot_or_internal);

}  // namespace twinscope
