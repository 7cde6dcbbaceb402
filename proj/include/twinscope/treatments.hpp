#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "twinscope/corpus.hpp"
#include "twinscope/twins.hpp"

namespace twinscope {

enum class TreatmentKind {
    colon_in_title,
    keyword_in_title,
    title_shorter,
    reference_longer,
    abstract_longer,
    paper_longer,
    self_cited,
    published_earlier,
    venue_pair,
    combo,
};

// A binary research-process decision. Predicate kinds are properties of one
// paper; comparative kinds only make sense within a pair.
struct TreatmentSpec {
    TreatmentKind kind = TreatmentKind::colon_in_title;
    std::string keyword;               // keyword_in_title, lowercase
    std::string venue_a;               // venue_pair: treated venue, normalized
    std::string venue_b;               // venue_pair: control venue, normalized
    std::vector<TreatmentSpec> members;  // combo

    static TreatmentSpec colon();
    static TreatmentSpec keyword_in(std::string_view word);
    static TreatmentSpec comparative(TreatmentKind kind);
    static TreatmentSpec self_citation();
    static TreatmentSpec venues(std::string_view a, std::string_view b);
    // Needs >= 2 members, none of them combo or venue_pair. Throws UsageError.
    static TreatmentSpec combination(std::vector<TreatmentSpec> members);

    bool is_comparative() const noexcept;
    // True for combos whose members are all predicate kinds.
    bool is_predicate() const noexcept;

    // CLI spelling, e.g. "colon", "keyword=learning", "venue=stoc::focs".
    std::string name() const;

    bool operator==(const TreatmentSpec&) const = default;
};

// Parses the CLI spelling. Throws UsageError.
TreatmentSpec parse_treatment(std::string_view text);

enum class PredicateValue { no, yes, inapplicable };

// Throws UsageError for comparative kinds (and combos containing one).
PredicateValue predicate(const TreatmentSpec& spec, const PaperRecord& paper, const Corpus& corpus);

enum class MeasureKind { title_tokens, reference_count, abstract_tokens, page_count, year };

std::optional<std::int64_t> measure(MeasureKind kind, const PaperRecord& paper);

struct Assignment {
    std::string treated;
    std::string control;
    TwinPair pair;

    bool operator==(const Assignment&) const = default;
};

// nullopt is DISCARD. Throws DataError when a pair member is not in the corpus.
std::optional<Assignment> assign_pair(const TreatmentSpec& spec, const TwinPair& pair, const Corpus& corpus);

}  // namespace twinscope
