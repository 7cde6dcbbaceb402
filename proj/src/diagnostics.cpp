#include "twinscope/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <unordered_set>

#include "twinscope/collab.hpp"
#include "twinscope/error.hpp"
#include "twinscope/parallel.hpp"
#include "twinscope/random.hpp"
#include "twinscope/text.hpp"

namespace twinscope {
namespace {

std::optional<double> mean_of(const std::vector<double>& v) {
    if (v.empty()) return std::nullopt;
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

std::uint64_t pair_key(Corpus::Index a, Corpus::Index b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | b;
}

// Bow-distance bins of width 0.1 over [0, 2], plus [2, 2.1) so that
// disjoint-vocabulary pairs (distance exactly 2) get their own bin.
std::vector<double> bow_edges() {
    std::vector<double> e;
    for (int k = 0; k <= 21; ++k) e.push_back(k / 10.0);
    return e;
}

std::optional<int> year_gap(const PaperRecord& a, const PaperRecord& b) {
    if (!a.year || !b.year) return std::nullopt;
    return std::abs(*a.year - *b.year);
}

}  // namespace

Histogram::Histogram(std::vector<double> edges) : edges_(std::move(edges)) {
    if (edges_.size() < 2) throw UsageError("histogram needs at least two edges");
    for (std::size_t i = 0; i + 1 < edges_.size(); ++i)
        if (!(edges_[i] < edges_[i + 1])) throw UsageError("histogram edges must be strictly increasing");
    counts_.assign(edges_.size() - 1, 0);
}

Histogram Histogram::integer_bins(int lo, int hi) {
    std::vector<double> e;
    for (int k = lo; k <= hi; ++k) e.push_back(k);
    return Histogram(std::move(e));
}

void Histogram::add(double x) {
    ++total_;
    if (x < edges_.front()) {
        ++underflow_;
    } else if (x >= edges_.back() || std::isnan(x)) {
        ++overflow_;
    } else {
        auto it = std::upper_bound(edges_.begin(), edges_.end(), x);
        ++counts_[static_cast<std::size_t>(it - edges_.begin()) - 1];
    }
}

Histogram Histogram::coarsen(std::vector<double> new_edges) const {
    Histogram out(std::move(new_edges));
    for (double e : out.edges_)
        if (!std::binary_search(edges_.begin(), edges_.end(), e))
            throw UsageError("coarsened edges must be a subset of the existing edges");
    out.underflow_ = underflow_;
    out.overflow_ = overflow_;
    out.total_ = total_;
    for (std::size_t i = 0; i < counts_.size(); ++i) {
        double lo = edges_[i];
        double hi = edges_[i + 1];
        if (hi <= out.edges_.front()) {
            out.underflow_ += counts_[i];
        } else if (lo >= out.edges_.back()) {
            out.overflow_ += counts_[i];
        } else {
            auto it = std::upper_bound(out.edges_.begin(), out.edges_.end(), lo);
            out.counts_[static_cast<std::size_t>(it - out.edges_.begin()) - 1] += counts_[i];
        }
    }
    return out;
}

std::vector<std::pair<Corpus::Index, Corpus::Index>> sample_random_pairs(const Corpus& corpus, const TwinSet& twins,
                                                                          std::span<const Corpus::Index> eligible,
                                                                          std::size_t n, std::uint64_t seed) {
    std::vector<std::pair<Corpus::Index, Corpus::Index>> out;
    if (eligible.size() < 2 || n == 0) return out;
    std::unordered_set<std::uint64_t> twin_keys;
    twin_keys.reserve(twins.size());
    for (const auto& p : twins) {
        auto a = corpus.find(p.first);
        auto b = corpus.find(p.second);
        if (a && b) twin_keys.insert(pair_key(*a, *b));
    }
    rng::Engine g(seed);
    const std::size_t budget = 20 * n + 1000;
    out.reserve(n);
    for (std::size_t attempt = 0; attempt < budget && out.size() < n; ++attempt) {
        auto i = eligible[rng::below(g, eligible.size())];
        auto j = eligible[rng::below(g, eligible.size())];
        if (i == j || twin_keys.contains(pair_key(i, j))) continue;
        out.emplace_back(i, j);
    }
    return out;
}

YearGapReport year_gap_histogram(const TwinSet& twins, const Corpus& corpus) {
    YearGapReport r;
    std::vector<int> gaps;
    for (const auto& p : twins) {
        auto g = year_gap(corpus.at(p.first), corpus.at(p.second));
        if (!g) {
            ++r.missing_year;
            continue;
        }
        gaps.push_back(*g);
    }
    int max_gap = gaps.empty() ? 0 : *std::max_element(gaps.begin(), gaps.end());
    r.twins = Histogram::integer_bins(0, max_gap + 1);
    std::size_t close = 0;
    for (int g : gaps) {
        r.twins.add(g);
        if (g <= 1) ++close;
    }
    r.twin_pairs = gaps.size();
    if (!gaps.empty()) r.same_or_next_year_fraction = static_cast<double>(close) / static_cast<double>(gaps.size());
    return r;
}

YearGapReport year_gap_report(const TwinSet& twins, const Corpus& corpus, std::size_t n_random, std::uint64_t seed) {
    YearGapReport r = year_gap_histogram(twins, corpus);
    std::vector<Corpus::Index> eligible;
    for (std::size_t i = 0; i < corpus.size(); ++i)
        if (corpus.paper(static_cast<Corpus::Index>(i)).year) eligible.push_back(static_cast<Corpus::Index>(i));
    std::vector<int> gaps;
    for (auto [i, j] : sample_random_pairs(corpus, twins, eligible, n_random, seed))
        gaps.push_back(*year_gap(corpus.paper(i), corpus.paper(j)));

    int max_gap = static_cast<int>(r.twins.edges().back()) - 1;
    for (int g : gaps) max_gap = std::max(max_gap, g);
    Histogram tw = Histogram::integer_bins(0, max_gap + 1);
    for (const auto& p : twins)
        if (auto g = year_gap(corpus.at(p.first), corpus.at(p.second))) tw.add(*g);
    r.twins = std::move(tw);
    r.random = Histogram::integer_bins(0, max_gap + 1);
    for (int g : gaps) r.random.add(g);
    return r;
}

double bow_distance(std::string_view a, std::string_view b) {
    std::map<std::string, std::pair<std::size_t, std::size_t>> counts;
    std::size_t na = 0, nb = 0;
    for (auto& t : text::bag_tokens(a)) {
        ++counts[std::move(t)].first;
        ++na;
    }
    for (auto& t : text::bag_tokens(b)) {
        ++counts[std::move(t)].second;
        ++nb;
    }
    if (na == 0 && nb == 0) return 0.0;
    if (na == 0 || nb == 0) return 2.0;
    double d = 0.0;
    for (const auto& [tok, c] : counts)
        d += std::abs(static_cast<double>(c.first) / static_cast<double>(na) -
                      static_cast<double>(c.second) / static_cast<double>(nb));
    return std::clamp(d, 0.0, 2.0);
}

AbstractReport abstract_distance_report(const TwinSet& twins, const Corpus& corpus, std::size_t n_random,
                                        std::uint64_t seed, unsigned threads) {
    if (n_random < 1) throw UsageError("n_random must be >= 1");
    std::vector<std::pair<const PaperRecord*, const PaperRecord*>> twin_pairs;
    for (const auto& p : twins) {
        const auto& a = corpus.at(p.first);
        const auto& b = corpus.at(p.second);
        if (a.abstract && b.abstract) twin_pairs.emplace_back(&a, &b);
    }
    std::vector<Corpus::Index> eligible;
    for (std::size_t i = 0; i < corpus.size(); ++i)
        if (corpus.paper(static_cast<Corpus::Index>(i)).abstract) eligible.push_back(static_cast<Corpus::Index>(i));
    auto random_pairs = sample_random_pairs(corpus, twins, eligible, n_random, seed);

    std::vector<double> twin_d(twin_pairs.size()), random_d(random_pairs.size());
    parallel_for(twin_pairs.size(), threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i)
            twin_d[i] = bow_distance(*twin_pairs[i].first->abstract, *twin_pairs[i].second->abstract);
    });
    parallel_for(random_pairs.size(), threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i)
            random_d[i] = bow_distance(*corpus.paper(random_pairs[i].first).abstract,
                                       *corpus.paper(random_pairs[i].second).abstract);
    });

    AbstractReport r;
    r.twins = Histogram(bow_edges());
    r.random = Histogram(bow_edges());
    for (double d : twin_d) r.twins.add(d);
    for (double d : random_d) r.random.add(d);
    r.twin_pairs = twin_d.size();
    r.random_pairs = random_d.size();
    r.mean_twin = mean_of(twin_d);
    r.mean_random = mean_of(random_d);
    if (r.mean_twin && r.mean_random) r.mean_gap = *r.mean_random - *r.mean_twin;
    return r;
}

CollabReport collab_distance_report(const TwinSet& twins, const Corpus& corpus, std::size_t n_random,
                                    std::uint64_t seed, unsigned threads) {
    if (n_random < 1) throw UsageError("n_random must be >= 1");
    CollabGraph graph = CollabGraph::build(corpus);

    std::vector<std::pair<const PaperRecord*, const PaperRecord*>> twin_pairs;
    for (const auto& p : twins) twin_pairs.emplace_back(&corpus.at(p.first), &corpus.at(p.second));
    std::vector<Corpus::Index> all(corpus.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<Corpus::Index>(i);
    std::vector<std::pair<const PaperRecord*, const PaperRecord*>> random_pairs;
    for (auto [i, j] : sample_random_pairs(corpus, twins, all, n_random, seed))
        random_pairs.emplace_back(&corpus.paper(i), &corpus.paper(j));

    auto distances = [&](const std::vector<std::pair<const PaperRecord*, const PaperRecord*>>& pairs) {
        std::vector<CollabDistance> out(pairs.size());
        parallel_for(pairs.size(), threads, [&](std::size_t begin, std::size_t end) {
            BfsScratch scratch(graph.node_count());
            for (std::size_t i = begin; i < end; ++i)
                out[i] = paper_collab_distance(graph, *pairs[i].first, *pairs[i].second, scratch);
        });
        return out;
    };
    auto twin_d = distances(twin_pairs);
    auto random_d = distances(random_pairs);

    std::uint32_t max_hops = 0;
    for (const auto* v : {&twin_d, &random_d})
        for (const auto& d : *v)
            if (d.reachable()) max_hops = std::max(max_hops, d.hops);

    CollabReport r;
    r.twins = Histogram::integer_bins(0, static_cast<int>(max_hops) + 1);
    r.random = r.twins;
    auto tally = [](const std::vector<CollabDistance>& ds, Histogram& h, std::size_t& unreachable,
                    std::size_t& no_authors) {
        std::vector<double> finite;
        for (const auto& d : ds) {
            if (d.reachable()) {
                h.add(d.hops);
                finite.push_back(d.hops);
            } else {
                ++unreachable;
                if (d.kind == CollabDistance::Kind::no_authors) ++no_authors;
            }
        }
        return mean_of(finite);
    };
    r.mean_twin = tally(twin_d, r.twins, r.twin_unreachable, r.twin_no_authors);
    r.mean_random = tally(random_d, r.random, r.random_unreachable, r.random_no_authors);
    r.twin_pairs = twin_d.size();
    r.random_pairs = random_d.size();
    return r;
}

}  // namespace twinscope
