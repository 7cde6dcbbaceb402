// Acceptance suite: one PASS/FAIL/SKIP line per criterion, non-zero exit if
// any criterion fails.

#include <sys/resource.h>

#include <array>
#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>

#include "support/oracles.hpp"
#include "twinscope/collab.hpp"
#include "twinscope/diagnostics.hpp"
#include "twinscope/estimator.hpp"
#include "twinscope/ingest.hpp"
#include "twinscope/synthetic.hpp"
#include "twinscope/text.hpp"
#include "twinscope/twins.hpp"

using namespace twinscope;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
    enum class Status { pass, fail, skip } status;
    std::string detail;
};

Outcome verdict(bool ok, std::string detail) {
    return {ok ? Outcome::Status::pass : Outcome::Status::fail, std::move(detail)};
}

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
    char buf[1024];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

// --- 1 -----------------------------------------------------------------

Outcome twin_oracle() {
    auto t0 = Clock::now();
    int matched = 0;
    std::size_t total_pairs = 0;
    rng::Engine g(20240601);
    for (int k = 0; k < 100; ++k) {
        auto n = static_cast<std::size_t>(rng::between(g, 2, 200));
        double p = std::array{0.01, 0.05, 0.1}[k % 3];
        auto papers = oracle::random_graph(1000 + static_cast<std::uint64_t>(k), n, p);
        auto want = oracle::brute_force_twins(papers);
        auto got = detect_twins(Corpus(papers));
        std::set<oracle::IdPair> got_set;
        for (const auto& tp : got) got_set.emplace(tp.first, tp.second);
        bool same = got_set == want && got.size() == want.size() &&
                    std::is_sorted(got.pairs.begin(), got.pairs.end());
        matched += same;
        total_pairs += want.size();
    }
    double s = seconds_since(t0);
    return verdict(matched == 100 && s < 10.0,
                   fmt("%d/100 graphs identical to brute force (%zu pairs), %.2f s (limit 10 s)", matched,
                       total_pairs, s));
}

// --- 2 -----------------------------------------------------------------

struct Fixture {
    PairDataset pairs;
    std::unordered_map<std::string, double> values;
    void add(double t, double c) {
        auto k = std::to_string(pairs.size());
        values["t" + k] = t;
        values["c" + k] = c;
        pairs.assignments.push_back({"t" + k, "c" + k, canonical_pair("t" + k, "c" + k)});
    }
    AteResult ate() const { return estimate_ate(pairs, OutcomeTable(values)); }
};

Outcome estimator_exactness() {
    int hand_ok = 0, hand_total = 0;
    auto hand = [&](std::vector<std::pair<double, double>> rows, double ate, double sd) {
        Fixture f;
        for (auto [t, c] : rows) f.add(t, c);
        auto r = f.ate();
        ++hand_total;
        hand_ok += r.ok() && std::abs(r.ate - ate) <= 1e-12 && r.stddev && std::abs(*r.stddev - sd) <= 1e-12;
    };
    hand({{1.0, 0.0}, {0.0, 0.5}}, 0.25, std::sqrt(1.125));
    hand({{5.0, 3.0}, {7.0, 3.0}, {6.5, 0.5}}, 4.0, 2.0);
    hand({{3.0, 3.0}, {4.0, 1.5}}, 1.25, std::sqrt(3.125));
    // Ten pairs with differences 1..10: mean 5.5, sample sd sqrt(55/6).
    {
        std::vector<std::pair<double, double>> rows;
        for (int i = 1; i <= 10; ++i) rows.emplace_back(i + 0.25, 0.25);
        hand(rows, 5.5, std::sqrt(55.0 / 6.0));
    }

    rng::Engine g(77);
    int anti = 0, shift = 0, subset = 0;
    for (int t = 0; t < 1000; ++t) {
        Fixture f;
        for (auto n = rng::between(g, 1, 80); n > 0; --n) f.add(rng::unit(g) * 20.0, rng::unit(g) * 20.0);
        double base = f.ate().ate;

        Fixture sw = f;
        for (auto& a : sw.pairs.assignments) std::swap(a.treated, a.control);
        anti += sw.ate().ate == -base;

        Fixture sh = f;
        double k = rng::unit(g) * 200.0 - 100.0;
        for (auto& [id, v] : sh.values) v += k;
        shift += std::abs(sh.ate().ate - base) <= 1e-12;

        std::vector<PairDataset> parts(static_cast<std::size_t>(rng::between(g, 1, 6)));
        for (const auto& a : f.pairs.assignments) parts[rng::below(g, parts.size())].assignments.push_back(a);
        double weighted = 0.0;
        for (const auto& p : parts)
            if (!p.empty()) weighted += static_cast<double>(p.size()) * estimate_ate(p, OutcomeTable(f.values)).ate;
        subset += std::abs(weighted / static_cast<double>(f.pairs.size()) - base) <= 1e-12;
    }
    bool ok = hand_ok == hand_total && anti == 1000 && shift == 1000 && subset == 1000;
    return verdict(ok, fmt("hand fixtures %d/%d within 1e-12; antisymmetry %d/1000, shift %d/1000, subset %d/1000",
                           hand_ok, hand_total, anti, shift, subset));
}

// --- 3 and 4 -------------------------------------------------------------

SynthConfig twin_pairs_config(std::uint64_t seed) {
    SynthConfig c;
    c.n_papers = 20000;
    c.twin_fraction = 1.0;  // 10,000 twin pairs
    c.abstract_words = 0;
    c.seed = seed;
    return c;
}

Outcome synthetic_recovery() {
    int good = 0;
    double worst_time = 0.0, worst_err = 0.0;
    std::size_t pairs_seen = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto t0 = Clock::now();
        auto c = twin_pairs_config(seed);
        c.treatments = {{TreatmentSpec::colon(), 0.5}};
        c.confounding = 0.0;
        c.noise_sd = 0.3;
        auto data = generate(c);
        auto twins = detect_twins(data.corpus);
        auto ds = build_pair_dataset(twins, TreatmentSpec::colon(), data.corpus);
        auto est = estimate_ate(ds, compute_outcomes(data.corpus));
        double err = std::abs(est.ate - truth_ate(data.truth, ds));
        double s = seconds_since(t0);
        worst_time = std::max(worst_time, s);
        worst_err = std::max(worst_err, err);
        pairs_seen = twins.size();
        good += err <= 0.05 && s < 60.0;
    }
    return verdict(good >= 19, fmt("%d/20 seeds with |estimate - truth| <= 0.05 in < 60 s (twin pairs %zu, max error "
                                   "%.4f, slowest seed %.2f s)",
                                   good, pairs_seen, worst_err, worst_time));
}

Outcome selection_bias() {
    int good = 0;
    double min_bias = 1e9, max_twin = 0.0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto c = twin_pairs_config(500 + seed);
        c.treatments = {{TreatmentSpec::colon(), 0.0}};
        c.confounding = 0.9;
        c.noise_sd = 0.3;
        c.venues = {{"venue a", 1.0, 1.0, 1.0}, {"venue b", 0.0, 0.0, 1.0}};
        auto data = generate(c);
        auto outcomes = compute_outcomes(data.corpus);
        auto naive = naive_observational_ate(data.corpus, TreatmentSpec::colon(), outcomes);
        auto twin =
            estimate_ate(build_pair_dataset(detect_twins(data.corpus), TreatmentSpec::colon(), data.corpus), outcomes);
        // True effect is 0, so the estimates are their own bias.
        double bias = std::abs(naive.ate);
        min_bias = std::min(min_bias, bias);
        max_twin = std::max(max_twin, std::abs(twin.ate));
        good += naive.ok() && twin.ok() && bias >= 0.3 && std::abs(twin.ate) <= 0.05;
    }
    return verdict(good >= 19, fmt("%d/20 seeds with naive bias >= 0.3 and |twin| <= 0.05 (min naive bias %.3f, max "
                                   "|twin| %.4f)",
                                   good, min_bias, max_twin));
}

// --- 5 -----------------------------------------------------------------

Outcome diagnostics_correctness() {
    rng::Engine g(99);
    auto text = [&] {
        std::string s;
        for (auto n = rng::below(g, 12); n > 0; --n) {
            s += std::string(1, static_cast<char>("aAbBcdef"[rng::below(g, 8)]));
            s += rng::bernoulli(g, 0.2) ? ", " : " ";
        }
        return s;
    };
    int metric_ok = 0;
    for (int t = 0; t < 10000; ++t) {
        auto a = text(), b = text(), c = text();
        double ab = bow_distance(a, b), ba = bow_distance(b, a);
        auto toks = text::bag_tokens(a);
        std::string shuffled;
        for (std::size_t i = toks.size(); i > 0; --i) shuffled += toks[i - 1] + " ";
        bool ok = ab == ba && ab >= 0.0 && ab <= 2.0 && bow_distance(a, a) == 0.0 &&
                  bow_distance(a, shuffled) <= 1e-12 && ab <= bow_distance(a, c) + bow_distance(c, b) + 1e-12;
        metric_ok += ok;
    }

    int bfs_ok = 0, bfs_total = 0;
    for (std::uint64_t k = 0; k < 20; ++k) {
        auto papers = oracle::random_authorship(7000 + k, 150, 200, 3);
        Corpus corpus(papers);
        auto graph = CollabGraph::build(corpus);
        auto adj = oracle::coauthor_sets(papers);
        rng::Engine r(k);
        for (int q = 0; q < 50; ++q) {
            auto i = rng::below(r, papers.size()), j = rng::below(r, papers.size());
            auto want = oracle::paper_distance(adj, papers[i], papers[j]);
            auto got = paper_collab_distance(graph, corpus.paper(static_cast<Corpus::Index>(i)),
                                             corpus.paper(static_cast<Corpus::Index>(j)));
            bool same = !want ? got.kind == CollabDistance::Kind::no_authors
                        : *want < 0 ? got.kind == CollabDistance::Kind::disconnected
                                    : got.reachable() && got.hops == static_cast<std::uint32_t>(*want);
            bfs_ok += same;
            ++bfs_total;
        }
    }

    int community_ok = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        SynthConfig c;
        c.n_papers = 4000;
        c.abstract_words = 0;
        c.seed = 900 + seed;
        auto data = generate(c);
        auto rep = collab_distance_report(data.planted_twins, data.corpus, data.planted_twins.size(), seed);
        community_ok += rep.mean_twin && rep.mean_random && *rep.mean_twin < *rep.mean_random;
    }
    bool ok = metric_ok == 10000 && bfs_ok == bfs_total && community_ok == 20;
    return verdict(ok, fmt("bow metric %d/10000 text triples; collab distance %d/%d pairs match BFS oracle; twins closer "
                           "than random on %d/20 seeds",
                           metric_ok, bfs_ok, bfs_total, community_ok));
}

// --- 6 -----------------------------------------------------------------

double peak_rss_gb() {
    rusage u{};
    getrusage(RUSAGE_SELF, &u);
    return static_cast<double>(u.ru_maxrss) / (1024.0 * 1024.0);  // ru_maxrss is KiB on Linux
}

Outcome scale_smoke() {
    const char* base = std::getenv("TWINSCOPE_TEST_TMP");
    auto dir = (base ? std::filesystem::path(base) : std::filesystem::temp_directory_path()) / "acceptance-scale";
    std::filesystem::create_directories(dir);
    auto path = dir / "corpus-1m.jsonl";
    {
        SynthConfig c;
        c.n_papers = 1000000;
        c.abstract_words = 0;
        c.max_references = 8;
        c.dangling_reference_prob = 0.1;
        c.seed = 1;
        auto data = generate(c);
        std::ofstream out(path, std::ios::binary);
        write_corpus(out, data.corpus, InputFormat::json_lines);
    }

    auto t0 = Clock::now();
    auto parsed = parse_corpus(path, InputFormat::json_lines, 4);
    auto twins = detect_twins(parsed.corpus, 4);
    double s = seconds_since(t0);
    std::string fp = parsed.corpus.fingerprint();
    std::size_t records = parsed.corpus.size();
    auto pairs = twins.pairs;
    parsed = IngestResult{};

    auto single = parse_corpus(path, InputFormat::json_lines, 1);
    auto single_twins = detect_twins(single.corpus, 1);
    bool invariant = single.corpus.fingerprint() == fp && single_twins.pairs == pairs;
    double gb = peak_rss_gb();
    std::filesystem::remove(path);

    bool ok = records == 1000000 && s < 300.0 && gb < 8.0 && invariant;
    return verdict(ok, fmt("%zu records, %zu twin pairs; ingest + detection %.1f s (limit 300 s); peak RSS %.2f GB "
                           "(limit 8 GB); 4 threads vs 1 thread %s",
                           records, pairs.size(), s, gb, invariant ? "identical" : "DIFFER"));
}

// --- 7 -----------------------------------------------------------------

Outcome published_snapshot() {
    const char* corpus_path = std::getenv("TWINSCOPE_DBLP_JSONL");
    const char* list_path = std::getenv("TWINSCOPE_TWIN_LIST");
    if (!corpus_path && !list_path)
        return {Outcome::Status::skip,
                "set TWINSCOPE_DBLP_JSONL (citation dump) and/or TWINSCOPE_TWIN_LIST (released twin list)"};

    std::vector<std::string> notes;
    bool ok = true;
    TwinSet released;
    if (list_path) {
        std::ifstream in(list_path);
        released = read_twin_list(in).twins;
        bool c = released.size() == 87396;
        ok &= c;
        notes.push_back(fmt("released list has %zu pairs (expect 87396)", released.size()));
    }
    if (corpus_path) {
        auto corpus = parse_corpus(corpus_path, InputFormat::json_lines, 0).corpus;
        auto detected = detect_twins(corpus, 0);
        notes.push_back(fmt("detected %zu twin pairs", detected.size()));
        // The released list is the arbiter when both are present.
        TwinSet twins = list_path ? restrict_to_corpus(released, corpus).twins : detected;
        if (!list_path) {
            ok &= detected.size() == 87396;
            notes.back() += " (expect 87396)";
        }
        auto outcomes = compute_outcomes(corpus);
        auto colon = estimate_ate(build_pair_dataset(twins, TreatmentSpec::colon(), corpus), outcomes);
        bool colon_ok = colon.ok() && colon.n_pairs == 21080 && std::abs(colon.ate - 0.356) <= 0.005;
        ok &= colon_ok;
        notes.push_back(fmt("colon n=%zu ate=%.4f (expect 21080, 0.356 +- 0.005)", colon.n_pairs, colon.ate));

        auto years = year_gap_histogram(twins, corpus);
        double frac = years.same_or_next_year_fraction.value_or(-1.0);
        ok &= std::abs(frac - 0.848) <= 0.005;
        notes.push_back(fmt("same-or-next-year %.4f (expect 0.848 +- 0.005)", frac));

        const char* stoc = std::getenv("TWINSCOPE_STOC_VENUE");
        const char* focs = std::getenv("TWINSCOPE_FOCS_VENUE");
        auto venue = TreatmentSpec::venues(stoc ? stoc : "symposium on the theory of computing",
                                           focs ? focs : "foundations of computer science");
        auto v = estimate_ate(build_pair_dataset(twins, venue, corpus), outcomes);
        if (v.ok() && v.ate < 0) {
            venue = TreatmentSpec::venues(venue.venue_b, venue.venue_a);
            v = estimate_ate(build_pair_dataset(twins, venue, corpus), outcomes);
        }
        ok &= v.ok() && v.n_pairs == 182 && std::abs(v.ate - 0.252) <= 0.01;
        notes.push_back(fmt("%s n=%zu ate=%.4f (expect 182, 0.252 +- 0.01)", venue.name().c_str(), v.n_pairs, v.ate));
    }
    std::string detail;
    for (const auto& n : notes) detail += (detail.empty() ? "" : "; ") + n;
    return verdict(ok, detail);
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        std::function<Outcome()> run;
    };
    const Criterion criteria[] = {
        {"twin-detection-oracle", twin_oracle},
        {"estimator-exactness", estimator_exactness},
        {"synthetic-recovery", synthetic_recovery},
        {"selection-bias", selection_bias},
        {"diagnostics-correctness", diagnostics_correctness},
        {"scale-smoke", scale_smoke},
        {"published-snapshot", published_snapshot},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        auto t0 = Clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {Outcome::Status::fail, std::string("exception: ") + e.what()};
        }
        const char* tag = o.status == Outcome::Status::pass ? "PASS" : o.status == Outcome::Status::fail ? "FAIL" : "SKIP";
        failures += o.status == Outcome::Status::fail;
        std::printf("%s %s: %s [%.1f s]\n", tag, c.name, o.detail.c_str(), seconds_since(t0));
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
