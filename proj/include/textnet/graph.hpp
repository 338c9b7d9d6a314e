#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "textnet/corpus.hpp"

namespace textnet {

using NodeId = std::uint32_t;

// Undirected, unweighted word-adjacency network. Neighbor lists are sorted
// and free of self-loops and duplicates; the structure is immutable once
// built.
class WordNetwork {
public:
    WordNetwork() = default;

    // Builds from an explicit edge list. Self-loops and duplicate edges are
    // dropped. Labels must be unique.
    WordNetwork(std::vector<std::string> labels, const std::vector<std::pair<NodeId, NodeId>>& edges,
                std::vector<std::size_t> frequency = {}, std::vector<bool> stopword = {});

    std::size_t node_count() const { return labels_.size(); }
    std::size_t edge_count() const { return edge_count_; }

    std::span<const NodeId> neighbors(NodeId node) const { return adjacency_[node]; }
    std::size_t degree(NodeId node) const { return adjacency_[node].size(); }
    // The network is undirected; both directed degrees equal the degree.
    std::size_t in_degree(NodeId node) const { return degree(node); }
    std::size_t out_degree(NodeId node) const { return degree(node); }
    bool has_edge(NodeId a, NodeId b) const;

    const std::string& label(NodeId node) const { return labels_[node]; }
    const std::vector<std::string>& labels() const { return labels_; }
    std::optional<NodeId> find(const std::string& label) const;

    std::size_t frequency(NodeId node) const { return frequency_[node]; }
    bool is_stopword(NodeId node) const { return stopword_[node]; }

    // Each undirected edge once, as (smaller id, larger id), sorted.
    std::vector<std::pair<NodeId, NodeId>> edges() const;

private:
    std::vector<std::string> labels_;
    std::vector<std::vector<NodeId>> adjacency_;
    std::vector<std::size_t> frequency_;
    std::vector<bool> stopword_;
    std::unordered_map<std::string, NodeId> index_;
    std::size_t edge_count_ = 0;
};

// Node ids follow first appearance in the token stream. Each token is linked
// to the next `window` tokens.
WordNetwork build_network(const Document& doc, std::size_t window = 1);

// Node sets of the connected components, each sorted, ordered by smallest id.
std::vector<std::vector<NodeId>> connected_components(const WordNetwork& net);

// Ties broken toward the component holding the smallest node id.
std::vector<NodeId> largest_component_nodes(const WordNetwork& net);

// Induced subgraph; node i of the result is nodes[i] of the input.
WordNetwork induced_subgraph(const WordNetwork& net, std::span<const NodeId> nodes);

WordNetwork largest_component(const WordNetwork& net);

bool is_connected(const WordNetwork& net);

inline constexpr std::uint32_t kUnreachable = UINT32_MAX;

// Hop distances from one source; unreachable nodes get kUnreachable.
std::vector<std::uint32_t> bfs_distances(const WordNetwork& net, NodeId source);

class DistanceOracle {
public:
    explicit DistanceOracle(std::size_t n) : n_(n), d_(n * n, 0) {}

    std::size_t size() const { return n_; }
    std::uint32_t operator()(NodeId i, NodeId j) const { return d_[std::size_t(i) * n_ + j]; }
    std::span<const std::uint32_t> row(NodeId i) const { return {d_.data() + std::size_t(i) * n_, n_}; }
    std::span<std::uint32_t> row(NodeId i) { return {d_.data() + std::size_t(i) * n_, n_}; }

private:
    std::size_t n_;
    std::vector<std::uint32_t> d_;
};

// Requires a connected network.
DistanceOracle all_pairs_distances(const WordNetwork& net);

std::string network_to_json(const WordNetwork& net);

}  // namespace textnet
