#include "twinscope/treatments.hpp"

#include <algorithm>

#include "twinscope/error.hpp"
#include "twinscope/ingest.hpp"
#include "twinscope/text.hpp"

namespace twinscope {
namespace {

struct Comparison {
    MeasureKind measure;
    bool smaller_is_treated;
};

std::optional<Comparison> comparison_for(TreatmentKind kind) {
    switch (kind) {
        case TreatmentKind::title_shorter: return Comparison{MeasureKind::title_tokens, true};
        case TreatmentKind::reference_longer: return Comparison{MeasureKind::reference_count, false};
        case TreatmentKind::abstract_longer: return Comparison{MeasureKind::abstract_tokens, false};
        case TreatmentKind::paper_longer: return Comparison{MeasureKind::page_count, false};
        case TreatmentKind::published_earlier: return Comparison{MeasureKind::year, true};
        default: return std::nullopt;
    }
}

struct NamedKind {
    std::string_view name;
    TreatmentKind kind;
};

constexpr NamedKind kSimpleNames[] = {
    {"colon", TreatmentKind::colon_in_title},
    {"short-title", TreatmentKind::title_shorter},
    {"long-refs", TreatmentKind::reference_longer},
    {"long-abstract", TreatmentKind::abstract_longer},
    {"long-paper", TreatmentKind::paper_longer},
    {"self-cite", TreatmentKind::self_cited},
    {"priority", TreatmentKind::published_earlier},
};

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

bool is_self_cited(const PaperRecord& paper, const Corpus& corpus) {
    auto idx = corpus.find(paper.id);
    if (!idx) return false;
    std::vector<std::string> keys;
    for (const auto& a : paper.authors) keys.push_back(a.key());
    std::sort(keys.begin(), keys.end());
    for (auto citer : corpus.citers_of(*idx))
        for (const auto& a : corpus.paper(citer).authors)
            if (std::binary_search(keys.begin(), keys.end(), a.key())) return true;
    return false;
}

// True when `x` is on the treated side of `spec` relative to `y`.
bool favours(const TreatmentSpec& spec, const PaperRecord& x, const PaperRecord& y, const Corpus& corpus) {
    if (spec.kind == TreatmentKind::combo) {
        return std::all_of(spec.members.begin(), spec.members.end(),
                           [&](const TreatmentSpec& m) { return favours(m, x, y, corpus); });
    }
    if (auto cmp = comparison_for(spec.kind)) {
        auto mx = measure(cmp->measure, x);
        auto my = measure(cmp->measure, y);
        if (!mx || !my) return false;
        return cmp->smaller_is_treated ? *mx < *my : *mx > *my;
    }
    return predicate(spec, x, corpus) == PredicateValue::yes && predicate(spec, y, corpus) == PredicateValue::no;
}

}  // namespace

TreatmentSpec TreatmentSpec::colon() { return TreatmentSpec{}; }

TreatmentSpec TreatmentSpec::keyword_in(std::string_view word) {
    auto tokens = text::bag_tokens(word);
    if (tokens.size() != 1) throw UsageError("keyword must be a single word, got '" + std::string(word) + "'");
    TreatmentSpec s;
    s.kind = TreatmentKind::keyword_in_title;
    s.keyword = tokens.front();
    return s;
}

TreatmentSpec TreatmentSpec::comparative(TreatmentKind kind) {
    if (!comparison_for(kind)) throw UsageError("not a comparative treatment kind");
    TreatmentSpec s;
    s.kind = kind;
    return s;
}

TreatmentSpec TreatmentSpec::self_citation() {
    TreatmentSpec s;
    s.kind = TreatmentKind::self_cited;
    return s;
}

TreatmentSpec TreatmentSpec::venues(std::string_view a, std::string_view b) {
    TreatmentSpec s;
    s.kind = TreatmentKind::venue_pair;
    s.venue_a = normalize_venue(a);
    s.venue_b = normalize_venue(b);
    if (s.venue_a.empty() || s.venue_b.empty()) throw UsageError("venue pair needs two non-empty venues");
    if (s.venue_a == s.venue_b) throw UsageError("venue pair needs two different venues");
    return s;
}

TreatmentSpec TreatmentSpec::combination(std::vector<TreatmentSpec> members) {
    if (members.size() < 2) throw UsageError("combo needs at least two treatments");
    for (const auto& m : members)
        if (m.kind == TreatmentKind::combo || m.kind == TreatmentKind::venue_pair)
            throw UsageError("combo members cannot be combo or venue treatments");
    TreatmentSpec s;
    s.kind = TreatmentKind::combo;
    s.members = std::move(members);
    return s;
}

bool TreatmentSpec::is_comparative() const noexcept { return comparison_for(kind).has_value(); }

bool TreatmentSpec::is_predicate() const noexcept {
    if (kind == TreatmentKind::combo)
        return std::all_of(members.begin(), members.end(), [](const TreatmentSpec& m) { return m.is_predicate(); });
    return !is_comparative();
}

std::string TreatmentSpec::name() const {
    switch (kind) {
        case TreatmentKind::keyword_in_title: return "keyword=" + keyword;
        case TreatmentKind::venue_pair: return "venue=" + venue_a + "::" + venue_b;
        case TreatmentKind::combo: {
            std::string out = "combo=";
            for (std::size_t i = 0; i < members.size(); ++i) {
                if (i) out += '+';
                out += members[i].name();
            }
            return out;
        }
        default:
            for (const auto& nk : kSimpleNames)
                if (nk.kind == kind) return std::string(nk.name);
    }
    return "?";
}

TreatmentSpec parse_treatment(std::string_view input) {
    std::string_view t = trim(input);
    for (const auto& nk : kSimpleNames) {
        if (t == nk.name) {
            TreatmentSpec s;
            s.kind = nk.kind;
            return s;
        }
    }
    if (t.starts_with("keyword=")) return TreatmentSpec::keyword_in(t.substr(8));
    if (t.starts_with("venue=")) {
        std::string_view rest = t.substr(6);
        auto sep = rest.find("::");
        if (sep == std::string_view::npos) throw UsageError("venue treatment must look like venue=<a>::<b>");
        return TreatmentSpec::venues(rest.substr(0, sep), rest.substr(sep + 2));
    }
    if (t.starts_with("combo=")) {
        std::vector<TreatmentSpec> members;
        std::string_view rest = t.substr(6);
        std::size_t start = 0;
        for (std::size_t i = 0; i <= rest.size(); ++i) {
            if (i == rest.size() || rest[i] == '+') {
                std::string_view part = rest.substr(start, i - start);
                if (part.starts_with("combo=")) throw UsageError("nested combo treatments are not supported");
                members.push_back(parse_treatment(part));
                start = i + 1;
            }
        }
        return TreatmentSpec::combination(std::move(members));
    }
    throw UsageError("unknown treatment '" + std::string(input) +
                     "' (expected colon, keyword=<w>, short-title, long-refs, long-abstract, long-paper, "
                     "self-cite, priority, venue=<a>::<b>, combo=<k1>+<k2>)");
}

PredicateValue predicate(const TreatmentSpec& spec, const PaperRecord& paper, const Corpus& corpus) {
    auto from_bool = [](bool b) { return b ? PredicateValue::yes : PredicateValue::no; };
    switch (spec.kind) {
        case TreatmentKind::colon_in_title:
            return from_bool(paper.title.find(':') != std::string::npos);
        case TreatmentKind::keyword_in_title: {
            auto tokens = text::bag_tokens(paper.title);
            return from_bool(std::find(tokens.begin(), tokens.end(), spec.keyword) != tokens.end());
        }
        case TreatmentKind::self_cited:
            if (paper.authors.empty()) return PredicateValue::inapplicable;
            return from_bool(is_self_cited(paper, corpus));
        case TreatmentKind::venue_pair:
            if (!paper.venue) return PredicateValue::inapplicable;
            if (*paper.venue == spec.venue_a) return PredicateValue::yes;
            if (*paper.venue == spec.venue_b) return PredicateValue::no;
            return PredicateValue::inapplicable;
        case TreatmentKind::combo: {
            if (!spec.is_predicate())
                throw UsageError("treatment '" + spec.name() + "' compares papers within a pair; it has no per-paper value");
            bool all_yes = true;
            bool all_no = true;
            for (const auto& m : spec.members) {
                auto v = predicate(m, paper, corpus);
                if (v == PredicateValue::inapplicable) return v;
                all_yes = all_yes && v == PredicateValue::yes;
                all_no = all_no && v == PredicateValue::no;
            }
            if (all_yes) return PredicateValue::yes;
            if (all_no) return PredicateValue::no;
            return PredicateValue::inapplicable;
        }
        default:
            throw UsageError("treatment '" + spec.name() + "' compares papers within a pair; it has no per-paper value");
    }
}

std::optional<std::int64_t> measure(MeasureKind kind, const PaperRecord& paper) {
    switch (kind) {
        case MeasureKind::title_tokens:
            return static_cast<std::int64_t>(text::count_tokens(paper.title));
        case MeasureKind::reference_count:
            return static_cast<std::int64_t>(paper.references.size());
        case MeasureKind::abstract_tokens:
            if (!paper.abstract) return std::nullopt;
            return static_cast<std::int64_t>(text::count_tokens(*paper.abstract));
        case MeasureKind::page_count:
            if (!paper.page_start || !paper.page_end) return std::nullopt;
            return *paper.page_end - *paper.page_start + 1;
        case MeasureKind::year:
            if (!paper.year) return std::nullopt;
            return *paper.year;
    }
    return std::nullopt;
}

std::optional<Assignment> assign_pair(const TreatmentSpec& spec, const TwinPair& pair, const Corpus& corpus) {
    const PaperRecord& a = corpus.at(pair.first);
    const PaperRecord& b = corpus.at(pair.second);
    if (favours(spec, a, b, corpus)) return Assignment{a.id, b.id, pair};
    if (favours(spec, b, a, corpus)) return Assignment{b.id, a.id, pair};
    return std::nullopt;
}

}  // namespace twinscope
