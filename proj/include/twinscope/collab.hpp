#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "twinscope/corpus.hpp"

namespace twinscope {

// Undirected coauthorship graph over author keys (AuthorRef::key()).
class CollabGraph {
public:
    using Node = std::uint32_t;

    static CollabGraph build(const Corpus& corpus);

    std::size_t node_count() const noexcept { return keys_.size(); }
    std::size_t edge_count() const noexcept { return adjacency_.size() / 2; }

    std::optional<Node> node(std::string_view key) const;
    const std::string& key(Node n) const { return keys_[n]; }
    std::span<const Node> neighbors(Node n) const;
    bool has_edge(Node u, Node v) const;

private:
    std::vector<std::string> keys_;
    std::unordered_map<std::string, Node> index_;
    std::vector<std::size_t> offsets_;
    std::vector<Node> adjacency_;
};

struct CollabDistance {
    enum class Kind { finite, disconnected, no_authors };

    Kind kind = Kind::disconnected;
    std::uint32_t hops = 0;

    bool reachable() const noexcept { return kind == Kind::finite; }
    bool operator==(const CollabDistance&) const = default;
};

// Per-thread BFS workspace, reusable across queries on one graph.
class BfsScratch {
public:
    explicit BfsScratch(std::size_t nodes = 0);

private:
    friend CollabDistance paper_collab_distance(const CollabGraph&, const PaperRecord&, const PaperRecord&,
                                                BfsScratch&);
    void reset(std::size_t nodes);

    std::vector<std::uint32_t> seen_;
    std::vector<std::uint32_t> target_;
    std::vector<CollabGraph::Node> frontier_;
    std::vector<CollabGraph::Node> next_;
    std::uint32_t epoch_ = 0;
};

// Minimum hop distance between any author of `a` and any author of `b`.
// A shared author gives 0.
CollabDistance paper_collab_distance(const CollabGraph& graph, const PaperRecord& a, const PaperRecord& b);
CollabDistance paper_collab_distance(const CollabGraph& graph, const PaperRecord& a, const PaperRecord& b,
                                     BfsScratch& scratch);

}  // namespace twinscope
