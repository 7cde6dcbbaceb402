#include <doctest.h>

#include <cmath>
#include <sstream>

#include "support/oracles.hpp"
#include "twinscope/error.hpp"
#include "twinscope/estimator.hpp"
#include "twinscope/ingest.hpp"
#include "twinscope/synthetic.hpp"
#include "twinscope/text.hpp"

using namespace twinscope;

namespace {

std::string corpus_bytes(const Corpus& c) {
    std::ostringstream out;
    write_corpus(out, c, InputFormat::json_lines);
    return out.str();
}

std::string truth_bytes(const SyntheticTruth& t) {
    std::ostringstream out;
    write_truth(out, t);
    return out.str();
}

SynthConfig small(std::uint64_t seed) {
    SynthConfig c;
    c.n_papers = 2000;
    c.noise_sd = 0.3;
    c.treatments = {{TreatmentSpec::colon(), 0.5}, {TreatmentSpec::keyword_in("graph"), -0.2}};
    c.dangling_reference_prob = 0.2;
    c.seed = seed;
    return c;
}

}  // namespace

TEST_SUITE("synthetic") {

TEST_CASE("same seed gives byte-identical files") {
    auto a = generate(small(1)), b = generate(small(1)), c = generate(small(2));
    CHECK(corpus_bytes(a.corpus) == corpus_bytes(b.corpus));
    CHECK(truth_bytes(a.truth) == truth_bytes(b.truth));
    CHECK(corpus_bytes(a.corpus) != corpus_bytes(c.corpus));
}

TEST_CASE("realized outcome replays the treated potential outcome") {
    auto d = generate(small(3));
    REQUIRE(d.truth.papers.size() == d.corpus.size());
    for (std::size_t i = 0; i < d.corpus.size(); ++i) {
        const auto& p = d.corpus.paper(static_cast<Corpus::Index>(i));
        const auto& t = d.truth.at(p.id);
        CHECK(p.citation_count == t.citations);
        CHECK(std::log2(static_cast<double>(t.citations) + 1.0) == (t.treated ? t.y1 : t.y0));
        CHECK(t.treated == (d.truth.indicators[0][i] != 0));
        CHECK(t.treated == (p.title.find(':') != std::string::npos));
        auto toks = text::bag_tokens(p.title);
        bool has_kw = std::find(toks.begin(), toks.end(), "graph") != toks.end();
        CHECK(has_kw == (d.truth.indicators[1][i] != 0));
        CHECK_FALSE(validate_record(p));
    }
}

TEST_CASE("planted twins are exactly the mutual citations") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        auto c = small(seed);
        c.twin_fraction = 0.3 + 0.1 * static_cast<double>(seed);
        auto d = generate(c);
        CHECK(d.planted_twins.size() == c.twin_pair_count());
        CHECK(detect_twins(d.corpus).pairs == d.planted_twins.pairs);
        for (const auto& p : d.planted_twins)
            CHECK(d.corpus.at(p.first).venue == d.corpus.at(p.second).venue);
    }
    auto none = small(9);
    none.twin_fraction = 0.0;
    CHECK(generate(none).planted_twins.empty());
    auto all = small(9);
    all.twin_fraction = 1.0;
    all.n_papers = 101;
    CHECK(generate(all).planted_twins.size() == 50);
}

TEST_CASE("null model gives exact zeros") {
    auto c = small(4);
    c.treatments = {{TreatmentSpec::colon(), 0.0}};
    c.noise_sd = 0.0;
    c.quality_sd = 0.0;
    c.confounding = 0.0;
    auto d = generate(c);
    auto outcomes = compute_outcomes(d.corpus);
    auto twins = detect_twins(d.corpus);
    CHECK(estimate_ate(build_pair_dataset(twins, TreatmentSpec::colon(), d.corpus), outcomes).ate == 0.0);
    CHECK(naive_observational_ate(d.corpus, TreatmentSpec::colon(), outcomes).ate == 0.0);
}

TEST_CASE("truth_ate examples") {
    SyntheticTruth t;
    PairDataset ds;
    for (int k = 0; k < 2; ++k) {
        auto a = "a" + std::to_string(k), b = "b" + std::to_string(k);
        // ITE 1 on the a-papers, 0 on the b-papers.
        t.papers.push_back({a, true, 3.0, 2.0, 7});
        t.papers.push_back({b, false, 4.0, 4.0, 15});
        ds.assignments.push_back({a, b, canonical_pair(a, b)});
    }
    t.reindex();
    CHECK(truth_ate(t, ds) == 0.5);

    SyntheticTruth constant = t;
    for (auto& p : constant.papers) p.y1 = p.y0 + 0.75;
    constant.reindex();
    CHECK(truth_ate(constant, ds) == 0.75);

    ds.assignments.push_back({"zz", "a0", canonical_pair("zz", "a0")});
    CHECK_THROWS_AS(truth_ate(t, ds), DataError);
    CHECK_THROWS_AS(truth_ate(t, PairDataset{}), DataError);
}

TEST_CASE("truth_ate matches a brute-force average over the truth file") {
    auto d = generate(small(5));
    std::istringstream in(truth_bytes(d.truth));
    auto back = read_truth(in);
    REQUIRE(back.papers.size() == d.truth.papers.size());
    std::map<std::string, double> ite;
    for (const auto& p : back.papers) ite[p.id] = p.y1 - p.y0;
    auto ds = build_pair_dataset(detect_twins(d.corpus), TreatmentSpec::colon(), d.corpus);
    double sum = 0.0;
    for (const auto& a : ds.assignments) sum += ite.at(a.treated) + ite.at(a.control);
    CHECK(std::abs(truth_ate(d.truth, ds) - sum / (2.0 * static_cast<double>(ds.size()))) <= 1e-12);

    double members = 0.0, total = 0.0;
    for (const auto& p : d.planted_twins) {
        total += ite.at(p.first) + ite.at(p.second);
        members += 2.0;
    }
    CHECK(std::abs(d.truth.twin_population_ate - total / members) <= 1e-12);
}

TEST_CASE("noise-free estimate is within the count-quantization bound") {
    auto c = small(6);
    c.treatments = {{TreatmentSpec::colon(), 0.5}};
    c.noise_sd = 0.0;
    auto d = generate(c);
    auto ds = build_pair_dataset(detect_twins(d.corpus), TreatmentSpec::colon(), d.corpus);
    auto est = estimate_ate(ds, compute_outcomes(d.corpus));
    // Rounding 2^Y to an integer count moves log2(count + 1) by at most
    // log2((m + 0.5) / m) with m = count + 1 on either side.
    double bound = 0.0;
    for (const auto& a : ds.assignments)
        for (const auto& id : {a.treated, a.control}) {
            const auto& t = d.truth.at(id);
            for (double y : {t.y1, t.y0}) bound += std::log2((std::exp2(y) + 0.5) / (std::exp2(y) - 0.5));
        }
    bound /= static_cast<double>(ds.size());
    CHECK(std::abs(est.ate - 0.5) <= bound);
    CHECK(std::abs(est.ate - truth_ate(d.truth, ds)) <= 1e-12);
}

TEST_CASE("full confounding follows the venue custom") {
    auto c = small(7);
    c.confounding = 1.0;
    c.venues = {{"a", 0.0, 1.0, 1.0}, {"b", 0.0, 0.0, 1.0}};
    auto d = generate(c);
    for (std::size_t i = 0; i < d.corpus.size(); ++i) {
        const auto& p = d.corpus.paper(static_cast<Corpus::Index>(i));
        CHECK(d.truth.at(p.id).treated == (*p.venue == "a"));
    }
}

TEST_CASE("invalid configs are rejected") {
    auto expect_bad = [](auto mutate) {
        SynthConfig c;
        mutate(c);
        CHECK_THROWS_AS(c.validate(), ConfigError);
        CHECK_THROWS_AS(generate(c), ConfigError);
    };
    expect_bad([](SynthConfig& c) { c.n_papers = 1; });
    expect_bad([](SynthConfig& c) { c.twin_fraction = 1.5; });
    expect_bad([](SynthConfig& c) { c.twin_fraction = -0.1; });
    expect_bad([](SynthConfig& c) { c.venues.clear(); });
    expect_bad([](SynthConfig& c) { c.venues[0].custom = 2.0; });
    expect_bad([](SynthConfig& c) { c.venues[1].name = "Venue  A"; });
    expect_bad([](SynthConfig& c) { c.confounding = 1.1; });
    expect_bad([](SynthConfig& c) { c.noise_sd = -1.0; });
    expect_bad([](SynthConfig& c) { c.treatments = {{TreatmentSpec::comparative(TreatmentKind::reference_longer), 1.0}}; });
    expect_bad([](SynthConfig& c) { c.treatments = {{TreatmentSpec::keyword_in("t3w5"), 1.0}}; });
    expect_bad([](SynthConfig& c) { c.treatments = {{TreatmentSpec::colon(), 1.0}, {TreatmentSpec::colon(), 2.0}}; });
    expect_bad([](SynthConfig& c) { c.max_authors = c.authors_per_community + 1; });
    expect_bad([](SynthConfig& c) { c.min_authors = 0; });
    expect_bad([](SynthConfig& c) { c.last_year = c.first_year + 1; });
    expect_bad([](SynthConfig& c) { c.year_gap_probs = {0.0, 0.0}; });
    expect_bad([](SynthConfig& c) { c.min_references = 5; c.max_references = 2; });
    expect_bad([](SynthConfig& c) { c.missing_pages_prob = -0.5; });
    CHECK_NOTHROW(SynthConfig{}.validate());
}

TEST_CASE("JSON config parsing") {
    auto c = parse_synth_config(R"({
        "n_papers": 500, "twin_fraction": 0.4, "confounding": 0.9, "noise_sd": 0.3,
        "venues": [{"name": "STOC", "effect": 1.0, "custom": 1.0}, {"name": "FOCS", "weight": 2}],
        "treatments": [{"treatment": "colon", "effect": 0.5}, {"treatment": "keyword=learning"}],
        "year_gap_probs": [0.6, 0.4], "seed": 99, "abstract_words": 0
    })");
    CHECK(c.n_papers == 500);
    CHECK(c.twin_fraction == 0.4);
    CHECK(c.confounding == 0.9);
    REQUIRE(c.venues.size() == 2);
    CHECK(c.venues[0].effect == 1.0);
    CHECK(c.venues[1].weight == 2.0);
    REQUIRE(c.treatments.size() == 2);
    CHECK(c.treatments[0].effect == 0.5);
    CHECK(c.treatments[1].spec == TreatmentSpec::keyword_in("learning"));
    CHECK(c.year_gap_probs == std::vector<double>{0.6, 0.4});
    CHECK(c.seed == 99);
    CHECK_NOTHROW(generate(c));

    CHECK_THROWS_AS(parse_synth_config(R"({"n_paper": 10})"), ConfigError);
    CHECK_THROWS_AS(parse_synth_config(R"({"n_papers": "ten"})"), ConfigError);
    CHECK_THROWS_AS(parse_synth_config(R"({"n_papers": -3})"), ConfigError);
    CHECK_THROWS_AS(parse_synth_config(R"({"treatments": [{"treatment": "nope"}]})"), ConfigError);
    CHECK_THROWS_AS(parse_synth_config("not json"), ConfigError);
    CHECK_THROWS_AS(parse_synth_config("[1, 2]"), ConfigError);
    CHECK_THROWS_AS(load_synth_config("/nonexistent/synth.json"), IoError);
}

}
