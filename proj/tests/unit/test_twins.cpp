#include <doctest.h>

#include <sstream>

#include "support/oracles.hpp"
#include "twinscope/error.hpp"
#include "twinscope/synthetic.hpp"
#include "twinscope/twins.hpp"

using namespace twinscope;

namespace {

PaperRecord rec(std::string id, std::vector<std::string> refs, std::optional<int> year = std::nullopt) {
    PaperRecord p;
    p.id = std::move(id);
    p.title = "t";
    p.references = std::move(refs);
    p.year = year;
    return p;
}

std::set<oracle::IdPair> as_set(const TwinSet& t) {
    std::set<oracle::IdPair> s;
    for (const auto& p : t) s.emplace(p.first, p.second);
    return s;
}

}  // namespace

TEST_SUITE("twins") {

TEST_CASE("mutual pair plus one-way citation") {
    Corpus c({rec("A", {"B"}), rec("B", {"A"}), rec("C", {"A"})});
    TwinSet t = detect_twins(c);
    REQUIRE(t.size() == 1);
    CHECK(t.pairs[0] == TwinPair{"A", "B"});
    CHECK(t.source_fingerprint == c.fingerprint());
}

TEST_CASE("no mutual citations") {
    Corpus c({rec("A", {"B"}), rec("B", {"C"}), rec("C", {})});
    CHECK(detect_twins(c).empty());
}

TEST_CASE("canonical order is byte order of ids") {
    Corpus c({rec("b", {"B"}), rec("B", {"b"})});
    auto t = detect_twins(c);
    REQUIRE(t.size() == 1);
    CHECK(t.pairs[0].first == "B");
    CHECK(t.pairs[0].second == "b");
    CHECK(canonical_pair("z", "a") == TwinPair{"a", "z"});
    CHECK_THROWS_AS(canonical_pair("a", "a"), DataError);
}

TEST_CASE("dangling references never form twins") {
    Corpus c({rec("A", {"X"}), rec("B", {"A"})});
    CHECK(detect_twins(c).empty());
}

TEST_CASE("random graphs match the brute-force oracle") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        double p = std::array{0.01, 0.05, 0.1}[seed % 3];
        auto papers = oracle::random_graph(seed, 20 + seed * 4, p);
        auto want = oracle::brute_force_twins(papers);
        Corpus c(papers);
        CHECK(as_set(detect_twins(c, 1)) == want);
        CHECK(detect_twins(c, 3).pairs == detect_twins(c, 1).pairs);
        auto sorted = detect_twins(c).pairs;
        CHECK(std::is_sorted(sorted.begin(), sorted.end()));
    }
}

TEST_CASE("record order does not change the result") {
    auto papers = oracle::random_graph(99, 120, 0.08);
    auto base = detect_twins(Corpus(papers)).pairs;
    rng::Engine g(1);
    for (int k = 0; k < 5; ++k) {
        for (std::size_t i = papers.size(); i > 1; --i) std::swap(papers[i - 1], papers[rng::below(g, i)]);
        CHECK(detect_twins(Corpus(papers)).pairs == base);
    }
}

TEST_CASE("filter by year gap") {
    Corpus c({rec("fft98", {"fft18"}, 1998), rec("fft18", {"fft98"}, 2018), rec("x", {"y"}, 2001),
              rec("y", {"x"}, 2002), rec("m", {"n"}), rec("n", {"m"}, 2000)});
    TwinSet all = detect_twins(c);
    REQUIRE(all.size() == 3);

    auto two = filter_twins(all, c, 2);
    CHECK(as_set(two.twins) == std::set<oracle::IdPair>{{"x", "y"}});
    CHECK(two.dropped_missing_year == 1);

    auto none = filter_twins(all, c, std::nullopt);
    CHECK(none.twins.pairs == all.pairs);
    CHECK(none.dropped_missing_year == 0);

    CHECK_THROWS_AS(filter_twins(all, c, -1), UsageError);
}

TEST_CASE("bound 0 keeps exactly the same-year pairs; filtering is monotone") {
    SynthConfig cfg;
    cfg.n_papers = 4000;
    cfg.year_gap_probs = {0.4, 0.3, 0.2, 0.1};
    cfg.seed = 8;
    auto data = generate(cfg);
    TwinSet all = detect_twins(data.corpus);
    std::size_t same_year = 0;
    for (const auto& p : all)
        if (data.corpus.at(p.first).year == data.corpus.at(p.second).year) ++same_year;
    CHECK(filter_twins(all, data.corpus, 0).twins.size() == same_year);
    std::size_t prev = 0;
    for (int gap = 0; gap < 6; ++gap) {
        std::size_t n = filter_twins(all, data.corpus, gap).twins.size();
        CHECK(n >= prev);
        prev = n;
    }
    CHECK(prev == all.size());
}

TEST_CASE("twin list round trip") {
    auto papers = oracle::random_graph(5, 80, 0.1);
    Corpus c(papers);
    TwinSet t = detect_twins(c);
    std::stringstream buf;
    write_twin_list(buf, t);
    auto back = read_twin_list(buf);
    CHECK(back.twins.pairs == t.pairs);
    CHECK(back.malformed_lines == 0);

    std::istringstream messy("b\ta\na\tb\nonly-one\n\nx\tx\nc\td\textra\n");
    auto m = read_twin_list(messy);
    CHECK(as_set(m.twins) == std::set<oracle::IdPair>{{"a", "b"}});
    CHECK(m.duplicate_pairs == 1);
    CHECK(m.malformed_lines == 3);
}

TEST_CASE("restrict a released list to the loaded corpus") {
    Corpus c({rec("A", {"B"}), rec("B", {"A"})});
    TwinSet t;
    t.pairs = {{"A", "B"}, {"A", "Z"}};
    auto r = restrict_to_corpus(t, c);
    CHECK(r.twins.size() == 1);
    CHECK(r.dropped_missing_paper == 1);
}

}
