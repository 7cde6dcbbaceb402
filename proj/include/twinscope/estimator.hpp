#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "twinscope/corpus.hpp"
#include "twinscope/outcomes.hpp"
#include "twinscope/treatments.hpp"
#include "twinscope/twins.hpp"

namespace twinscope {

// (treated, control) twin pairs under one treatment, in
// canonical pair order.
struct PairDataset {
    std::vector<Assignment> assignments;
    TreatmentSpec spec;
    std::string provenance;  // twin-set fingerprint

    std::size_t size() const noexcept { return assignments.size(); }
    bool empty() const noexcept { return assignments.empty(); }
};

PairDataset build_pair_dataset(const TwinSet& twins, const TreatmentSpec& spec, const Corpus& corpus,
                               unsigned threads = 1);

enum class EstimateStatus { ok, empty, empty_group };

// Mean within-pair outcome difference. `stddev` is the sample standard
// deviation of the differences (absent for n < 2), `std_error` = stddev/sqrt(n).
struct AteResult {
    std::string treatment;
    EstimateStatus status = EstimateStatus::empty;
    std::size_t n_pairs = 0;
    double ate = 0.0;  // meaningless unless status == ok
    std::optional<double> stddev;
    std::optional<double> std_error;

    bool ok() const noexcept { return status == EstimateStatus::ok; }
};

// Sums in dataset order, so results are bit-identical across runs.
// Throws DataError when an outcome is missing.
AteResult estimate_ate(const PairDataset& pairs, const OutcomeTable& outcomes);

double estimate_ite(const Assignment& assignment, const OutcomeTable& outcomes);

// Difference of group means over all papers, ignoring twin structure.
struct NaiveResult {
    std::string treatment;
    EstimateStatus status = EstimateStatus::empty_group;
    std::size_t n_treated = 0;
    std::size_t n_control = 0;
    double mean_treated = 0.0;
    double mean_control = 0.0;
    double ate = 0.0;
    std::optional<double> std_error;  // Welch

    bool ok() const noexcept { return status == EstimateStatus::ok; }
};

// Papers without an outcome or with an INAPPLICABLE predicate are skipped.
// `venues` restricts the population to papers whose normalized venue is listed.
NaiveResult naive_observational_ate(const Corpus& corpus, const TreatmentSpec& spec, const OutcomeTable& outcomes,
                                    const std::optional<std::set<std::string>>& venues = std::nullopt);

struct VenueAteRow {
    std::string treated_venue;
    std::string control_venue;
    AteResult result;
};

// One row per unordered venue pair with at least min_pairs twins split across
// the two venues, oriented so ate >= 0, largest n_pairs first.
std::vector<VenueAteRow> venue_ate_table(const TwinSet& twins, const Corpus& corpus, const OutcomeTable& outcomes,
                                         std::size_t min_pairs);

struct AdditivityReport {
    AteResult a;
    AteResult b;
    AteResult both;
    std::optional<bool> subadditive;  // absent when any dataset is empty
};

AdditivityReport additivity_report(const TwinSet& twins, const Corpus& corpus, const OutcomeTable& outcomes,
                                   const TreatmentSpec& a, const TreatmentSpec& b);

}  // namespace twinscope
