#include <doctest.h>

#include "support/oracles.hpp"
#include "twinscope/collab.hpp"

using namespace twinscope;

namespace {

PaperRecord authored(std::string id, std::vector<std::string> authors) {
    PaperRecord p;
    p.id = std::move(id);
    p.title = "t";
    for (auto& a : authors) p.authors.push_back({a, ""});
    return p;
}

int hops(const CollabGraph& g, const PaperRecord& a, const PaperRecord& b) {
    auto d = paper_collab_distance(g, a, b);
    return d.reachable() ? static_cast<int>(d.hops) : -1;
}

}  // namespace

TEST_SUITE("collab") {

TEST_CASE("one paper makes a clique") {
    Corpus c({authored("p", {"u", "v", "w"})});
    auto g = CollabGraph::build(c);
    CHECK(g.node_count() == 3);
    CHECK(g.edge_count() == 3);
    auto u = *g.node("id:u"), v = *g.node("id:v"), w = *g.node("id:w");
    CHECK(g.has_edge(u, v));
    CHECK(g.has_edge(v, w));
    CHECK(g.has_edge(w, u));
    CHECK_FALSE(g.has_edge(u, u));
}

TEST_CASE("disjoint authors give two components") {
    Corpus c({authored("p", {"a", "b"}), authored("q", {"c", "d"})});
    auto g = CollabGraph::build(c);
    CHECK(g.edge_count() == 2);
    CHECK(paper_collab_distance(g, c.paper(0), c.paper(1)).kind == CollabDistance::Kind::disconnected);
}

TEST_CASE("shared author is 0, a single coauthorship is 1") {
    Corpus c({authored("p", {"u", "x"}), authored("q", {"u", "y"}), authored("r", {"v"}), authored("s", {"u", "v"}),
              authored("t", {})});
    auto g = CollabGraph::build(c);
    CHECK(hops(g, c.paper(0), c.paper(1)) == 0);
    // p's x and r's v: x-u-v
    CHECK(hops(g, c.paper(0), c.paper(2)) == 1);
    auto none = paper_collab_distance(g, c.paper(0), c.paper(4));
    CHECK(none.kind == CollabDistance::Kind::no_authors);
    CHECK_FALSE(none.reachable());
}

TEST_CASE("name-keyed and id-keyed authors are distinct nodes") {
    PaperRecord p = authored("p", {});
    p.authors.push_back({"", "ann lee"});
    p.authors.push_back({"ann lee", ""});
    Corpus c({p});
    auto g = CollabGraph::build(c);
    CHECK(g.node_count() == 2);
    CHECK(g.node("name:ann lee"));
    CHECK(g.node("id:ann lee"));
}

TEST_CASE("edge counts match a set-based recount") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        auto papers = oracle::random_authorship(seed, 150, 60, 5);
        auto g = CollabGraph::build(Corpus(papers));
        CHECK(g.edge_count() == oracle::edge_count(papers));
        for (CollabGraph::Node n = 0; n < g.node_count(); ++n)
            for (auto m : g.neighbors(n)) {
                CHECK(g.has_edge(m, n));
                CHECK(m != n);
            }
    }
}

TEST_CASE("distances match pairwise BFS on 200-node graphs") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto papers = oracle::random_authorship(100 + seed, 120, 200, 3);
        Corpus c(papers);
        auto g = CollabGraph::build(c);
        auto adj = oracle::coauthor_sets(papers);
        BfsScratch scratch;
        rng::Engine r(seed);
        for (int k = 0; k < 50; ++k) {
            auto i = rng::below(r, papers.size()), j = rng::below(r, papers.size());
            auto want = oracle::paper_distance(adj, papers[i], papers[j]);
            auto got = paper_collab_distance(g, c.paper(i), c.paper(j), scratch);
            if (!want) {
                CHECK(got.kind == CollabDistance::Kind::no_authors);
            } else if (*want < 0) {
                CHECK(got.kind == CollabDistance::Kind::disconnected);
            } else {
                REQUIRE(got.reachable());
                CHECK(got.hops == static_cast<std::uint32_t>(*want));
            }
            CHECK(paper_collab_distance(g, c.paper(j), c.paper(i)) == got);
        }
    }
}

TEST_CASE("lifted triangle inequality, exhaustive on small graphs") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        auto papers = oracle::random_authorship(500 + seed, 25, 30, 3);
        Corpus c(papers);
        auto g = CollabGraph::build(c);
        for (Corpus::Index a = 0; a < c.size(); ++a)
            for (Corpus::Index b = 0; b < c.size(); ++b)
                for (Corpus::Index m = 0; m < c.size(); ++m) {
                    int ab = hops(g, c.paper(a), c.paper(b));
                    for (const auto& k : c.paper(m).authors) {
                        PaperRecord single = authored("k", {});
                        single.authors.push_back(k);
                        int ak = hops(g, c.paper(a), single), kb = hops(g, single, c.paper(b));
                        if (ab >= 0 && ak >= 0 && kb >= 0) CHECK(ab <= ak + kb);
                    }
                }
    }
}

}
