#include "twinscope/collab.hpp"

#include <algorithm>
#include <limits>

namespace twinscope {
namespace {

std::vector<std::string> author_keys(const PaperRecord& p) {
    std::vector<std::string> keys;
    keys.reserve(p.authors.size());
    for (const auto& a : p.authors) keys.push_back(a.key());
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    return keys;
}

}  // namespace

CollabGraph CollabGraph::build(const Corpus& corpus) {
    CollabGraph g;
    std::vector<std::uint64_t> edges;
    std::vector<Node> members;
    for (const auto& p : corpus.papers()) {
        members.clear();
        for (const auto& a : p.authors) {
            std::string k = a.key();
            auto [it, inserted] = g.index_.emplace(k, static_cast<Node>(g.keys_.size()));
            if (inserted) g.keys_.push_back(std::move(k));
            members.push_back(it->second);
        }
        std::sort(members.begin(), members.end());
        members.erase(std::unique(members.begin(), members.end()), members.end());
        for (std::size_t i = 0; i < members.size(); ++i)
            for (std::size_t j = i + 1; j < members.size(); ++j)
                edges.push_back((static_cast<std::uint64_t>(members[i]) << 32) | members[j]);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    const std::size_t n = g.keys_.size();
    g.offsets_.assign(n + 1, 0);
    for (auto e : edges) {
        ++g.offsets_[(e >> 32) + 1];
        ++g.offsets_[(e & 0xFFFFFFFFu) + 1];
    }
    for (std::size_t i = 0; i < n; ++i) g.offsets_[i + 1] += g.offsets_[i];
    g.adjacency_.resize(g.offsets_[n]);
    std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
    for (auto e : edges) {
        auto u = static_cast<Node>(e >> 32);
        auto v = static_cast<Node>(e & 0xFFFFFFFFu);
        g.adjacency_[cursor[u]++] = v;
        g.adjacency_[cursor[v]++] = u;
    }
    for (std::size_t i = 0; i < n; ++i)
        std::sort(g.adjacency_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[i]),
                  g.adjacency_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[i + 1]));
    return g;
}

std::optional<CollabGraph::Node> CollabGraph::node(std::string_view key) const {
    auto it = index_.find(std::string(key));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::span<const CollabGraph::Node> CollabGraph::neighbors(Node n) const {
    return {adjacency_.data() + offsets_[n], offsets_[n + 1] - offsets_[n]};
}

bool CollabGraph::has_edge(Node u, Node v) const {
    auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
}

BfsScratch::BfsScratch(std::size_t nodes) { reset(nodes); }

void BfsScratch::reset(std::size_t nodes) {
    if (seen_.size() != nodes || epoch_ == std::numeric_limits<std::uint32_t>::max()) {
        seen_.assign(nodes, 0);
        target_.assign(nodes, 0);
        epoch_ = 0;
    }
    ++epoch_;
    frontier_.clear();
    next_.clear();
}

CollabDistance paper_collab_distance(const CollabGraph& graph, const PaperRecord& a, const PaperRecord& b) {
    BfsScratch scratch(graph.node_count());
    return paper_collab_distance(graph, a, b, scratch);
}

CollabDistance paper_collab_distance(const CollabGraph& graph, const PaperRecord& a, const PaperRecord& b,
                                     BfsScratch& s) {
    using Kind = CollabDistance::Kind;
    if (a.authors.empty() || b.authors.empty()) return {Kind::no_authors, 0};

    auto ka = author_keys(a);
    auto kb = author_keys(b);
    std::vector<std::string> shared;
    std::set_intersection(ka.begin(), ka.end(), kb.begin(), kb.end(), std::back_inserter(shared));
    if (!shared.empty()) return {Kind::finite, 0};

    s.reset(graph.node_count());
    const std::uint32_t epoch = s.epoch_;
    bool any_target = false;
    for (const auto& k : kb) {
        if (auto n = graph.node(k)) {
            s.target_[*n] = epoch;
            any_target = true;
        }
    }
    for (const auto& k : ka) {
        if (auto n = graph.node(k)) {
            if (s.seen_[*n] != epoch) {
                s.seen_[*n] = epoch;
                s.frontier_.push_back(*n);
            }
        }
    }
    if (!any_target || s.frontier_.empty()) return {Kind::disconnected, 0};

    std::uint32_t hops = 0;
    while (!s.frontier_.empty()) {
        ++hops;
        s.next_.clear();
        for (auto u : s.frontier_) {
            for (auto w : graph.neighbors(u)) {
                if (s.seen_[w] == epoch) continue;
                if (s.target_[w] == epoch) return {Kind::finite, hops};
                s.seen_[w] = epoch;
                s.next_.push_back(w);
            }
        }
        std::swap(s.frontier_, s.next_);
    }
    return {Kind::disconnected, 0};
}

}  // namespace twinscope
