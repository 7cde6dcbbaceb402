#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "twinscope/corpus.hpp"
#include "twinscope/twins.hpp"

namespace twinscope {

// Bins are [edges[i], edges[i+1]).
class Histogram {
public:
    Histogram() = default;
    // Throws UsageError unless edges has >= 2 strictly increasing values.
    explicit Histogram(std::vector<double> edges);

    // Edges lo, lo+1, ..., hi.
    static Histogram integer_bins(int lo, int hi);

    void add(double x);

    const std::vector<double>& edges() const noexcept { return edges_; }
    const std::vector<std::size_t>& counts() const noexcept { return counts_; }
    std::size_t underflow() const noexcept { return underflow_; }
    std::size_t overflow() const noexcept { return overflow_; }
    std::size_t total() const noexcept { return total_; }

    // Merges into coarser bins. Every new edge must be an existing edge;
    // mass outside the new range moves to underflow/overflow.
    Histogram coarsen(std::vector<double> new_edges) const;

    bool operator==(const Histogram&) const = default;

private:
    std::vector<double> edges_;
    std::vector<std::size_t> counts_;
    std::size_t underflow_ = 0;
    std::size_t overflow_ = 0;
    std::size_t total_ = 0;
};

struct YearGapReport {
    Histogram twins;
    Histogram random;  // empty unless a random baseline was requested
    std::optional<double> same_or_next_year_fraction;
    std::size_t twin_pairs = 0;
    std::size_t missing_year = 0;
};

YearGapReport year_gap_histogram(const TwinSet& twins, const Corpus& corpus);
// Adds a seeded baseline of n_random pairs of distinct non-twin papers with years.
YearGapReport year_gap_report(const TwinSet& twins, const Corpus& corpus, std::size_t n_random, std::uint64_t seed);

// L1 distance between L1-normalized term-frequency vectors, in [0, 2].
double bow_distance(std::string_view a, std::string_view b);

struct AbstractReport {
    Histogram twins;
    Histogram random;
    std::size_t twin_pairs = 0;    // pairs with both abstracts present
    std::size_t random_pairs = 0;
    std::optional<double> mean_twin;
    std::optional<double> mean_random;
    std::optional<double> mean_gap;  // mean_random - mean_twin
};

AbstractReport abstract_distance_report(const TwinSet& twins, const Corpus& corpus, std::size_t n_random,
                                        std::uint64_t seed, unsigned threads = 1);

struct CollabReport {
    Histogram twins;   // finite distances
    Histogram random;
    std::size_t twin_pairs = 0;
    std::size_t random_pairs = 0;
    std::size_t twin_unreachable = 0;   // disconnected + no_authors
    std::size_t random_unreachable = 0;
    std::size_t twin_no_authors = 0;
    std::size_t random_no_authors = 0;
    std::optional<double> mean_twin;    // over finite distances
    std::optional<double> mean_random;
};

CollabReport collab_distance_report(const TwinSet& twins, const Corpus& corpus, std::size_t n_random,
                                    std::uint64_t seed, unsigned threads = 1);

// Seeded uniform pairs (i, j), i != j, drawn from `eligible` and excluding twin
// pairs. Stops early when the rejection budget runs out.
std::vector<std::pair<Corpus::Index, Corpus::Index>> sample_random_pairs(const Corpus& corpus, const TwinSet& twins,
                                                                          std::span<const Corpus::Index> eligible,
                                                                          std::size_t n, std::uint64_t seed);

}  // namespace twinscope
