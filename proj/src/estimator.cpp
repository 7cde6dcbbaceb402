#include "twinscope/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "twinscope/error.hpp"
#include "twinscope/parallel.hpp"

namespace twinscope {
namespace {

AteResult summarize(std::string treatment, const std::vector<double>& diffs) {
    AteResult r;
    r.treatment = std::move(treatment);
    r.n_pairs = diffs.size();
    if (diffs.empty()) {
        r.status = EstimateStatus::empty;
        return r;
    }
    r.status = EstimateStatus::ok;
    double sum = 0.0;
    for (double d : diffs) sum += d;
    r.ate = sum / static_cast<double>(diffs.size());
    if (diffs.size() >= 2) {
        double ss = 0.0;
        for (double d : diffs) ss += (d - r.ate) * (d - r.ate);
        double sd = std::sqrt(ss / static_cast<double>(diffs.size() - 1));
        r.stddev = sd;
        r.std_error = sd / std::sqrt(static_cast<double>(diffs.size()));
    }
    return r;
}

struct GroupStats {
    std::size_t n = 0;
    double sum = 0.0;
    double mean() const { return sum / static_cast<double>(n); }
};

}  // namespace

PairDataset build_pair_dataset(const TwinSet& twins, const TreatmentSpec& spec, const Corpus& corpus,
                               unsigned threads) {
    std::vector<std::optional<Assignment>> slots(twins.size());
    parallel_for(twins.size(), threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) slots[i] = assign_pair(spec, twins.pairs[i], corpus);
    });
    PairDataset out;
    out.spec = spec;
    out.provenance = twins.source_fingerprint;
    for (auto& s : slots)
        if (s) out.assignments.push_back(std::move(*s));
    return out;
}

double estimate_ite(const Assignment& assignment, const OutcomeTable& outcomes) {
    return outcomes.at(assignment.treated) - outcomes.at(assignment.control);
}

AteResult estimate_ate(const PairDataset& pairs, const OutcomeTable& outcomes) {
    std::vector<double> diffs;
    diffs.reserve(pairs.size());
    for (const auto& a : pairs.assignments) diffs.push_back(estimate_ite(a, outcomes));
    return summarize(pairs.spec.name(), diffs);
}

NaiveResult naive_observational_ate(const Corpus& corpus, const TreatmentSpec& spec, const OutcomeTable& outcomes,
                                    const std::optional<std::set<std::string>>& venues) {
    if (!spec.is_predicate())
        throw UsageError("naive estimator needs a per-paper treatment; '" + spec.name() + "' is comparative");
    std::vector<double> treated, control;
    for (const auto& p : corpus.papers()) {
        if (venues && (!p.venue || !venues->contains(*p.venue))) continue;
        const double* y = outcomes.find(p.id);
        if (!y) continue;
        switch (predicate(spec, p, corpus)) {
            case PredicateValue::yes: treated.push_back(*y); break;
            case PredicateValue::no: control.push_back(*y); break;
            case PredicateValue::inapplicable: break;
        }
    }
    NaiveResult r;
    r.treatment = spec.name();
    r.n_treated = treated.size();
    r.n_control = control.size();
    if (treated.empty() || control.empty()) {
        r.status = EstimateStatus::empty_group;
        return r;
    }
    auto moments = [](const std::vector<double>& v) {
        double sum = 0.0;
        for (double x : v) sum += x;
        double mean = sum / static_cast<double>(v.size());
        double ss = 0.0;
        for (double x : v) ss += (x - mean) * (x - mean);
        double var = v.size() > 1 ? ss / static_cast<double>(v.size() - 1) : std::nan("");
        return std::pair{mean, var};
    };
    auto [mt, vt] = moments(treated);
    auto [mc, vc] = moments(control);
    r.status = EstimateStatus::ok;
    r.mean_treated = mt;
    r.mean_control = mc;
    r.ate = mt - mc;
    double se2 = vt / static_cast<double>(treated.size()) + vc / static_cast<double>(control.size());
    if (std::isfinite(se2)) r.std_error = std::sqrt(se2);
    return r;
}

std::vector<VenueAteRow> venue_ate_table(const TwinSet& twins, const Corpus& corpus, const OutcomeTable& outcomes,
                                         std::size_t min_pairs) {
    if (min_pairs < 1) throw UsageError("min_pairs must be >= 1");
    // Key (lo, hi) with lo < hi; the difference is always outcome(lo-paper) - outcome(hi-paper).
    std::map<std::pair<std::string, std::string>, std::vector<double>> groups;
    for (const auto& pair : twins) {
        const auto& a = corpus.at(pair.first);
        const auto& b = corpus.at(pair.second);
        if (!a.venue || !b.venue || *a.venue == *b.venue) continue;
        bool a_low = *a.venue < *b.venue;
        const PaperRecord& lo = a_low ? a : b;
        const PaperRecord& hi = a_low ? b : a;
        groups[{*lo.venue, *hi.venue}].push_back(outcomes.at(lo.id) - outcomes.at(hi.id));
    }
    std::vector<VenueAteRow> rows;
    for (auto& [key, diffs] : groups) {
        if (diffs.size() < min_pairs) continue;
        AteResult r = summarize(TreatmentSpec::venues(key.first, key.second).name(), diffs);
        VenueAteRow row{key.first, key.second, r};
        if (r.ate < 0.0) {
            for (double& d : diffs) d = -d;
            row = VenueAteRow{key.second, key.first,
                              summarize(TreatmentSpec::venues(key.second, key.first).name(), diffs)};
        }
        rows.push_back(std::move(row));
    }
    std::stable_sort(rows.begin(), rows.end(),
                     [](const VenueAteRow& x, const VenueAteRow& y) { return x.result.n_pairs > y.result.n_pairs; });
    return rows;
}

AdditivityReport additivity_report(const TwinSet& twins, const Corpus& corpus, const OutcomeTable& outcomes,
                                   const TreatmentSpec& a, const TreatmentSpec& b) {
    AdditivityReport r;
    r.a = estimate_ate(build_pair_dataset(twins, a, corpus), outcomes);
    r.b = estimate_ate(build_pair_dataset(twins, b, corpus), outcomes);
    r.both = estimate_ate(build_pair_dataset(twins, TreatmentSpec::combination({a, b}), corpus), outcomes);
    if (r.a.ok() && r.b.ok() && r.both.ok()) r.subadditive = r.both.ate < r.a.ate + r.b.ate;
    return r;
}

}  // namespace twinscope
