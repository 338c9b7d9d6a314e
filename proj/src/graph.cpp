#include "textnet/graph.hpp"

#include <algorithm>

#include "json.hpp"

#include "textnet/error.hpp"

namespace textnet {

WordNetwork::WordNetwork(std::vector<std::string> labels, const std::vector<std::pair<NodeId, NodeId>>& edges,
                         std::vector<std::size_t> frequency, std::vector<bool> stopword)
    : labels_(std::move(labels)),
      adjacency_(labels_.size()),
      frequency_(std::move(frequency)),
      stopword_(std::move(stopword)) {
    const auto n = labels_.size();
    if (frequency_.empty()) frequency_.assign(n, 1);
    if (stopword_.empty()) stopword_.assign(n, false);
    if (frequency_.size() != n || stopword_.size() != n)
        throw Error(ErrorKind::InvalidArgument, "per-node arrays must match the label count");
    for (NodeId i = 0; i < n; ++i)
        if (!index_.emplace(labels_[i], i).second)
            throw Error(ErrorKind::InvalidArgument, "duplicate node label '" + labels_[i] + "'");
    for (auto [a, b] : edges) {
        if (a >= n || b >= n) throw Error(ErrorKind::InvalidArgument, "edge endpoint out of range");
        if (a == b) continue;
        adjacency_[a].push_back(b);
        adjacency_[b].push_back(a);
    }
    for (auto& list : adjacency_) {
        std::sort(list.begin(), list.end());
        list.erase(std::unique(list.begin(), list.end()), list.end());
        edge_count_ += list.size();
    }
    edge_count_ /= 2;
}

bool WordNetwork::has_edge(NodeId a, NodeId b) const {
    const auto& list = adjacency_[a];
    return std::binary_search(list.begin(), list.end(), b);
}

std::optional<NodeId> WordNetwork::find(const std::string& label) const {
    auto it = index_.find(label);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::vector<std::pair<NodeId, NodeId>> WordNetwork::edges() const {
    std::vector<std::pair<NodeId, NodeId>> out;
    out.reserve(edge_count_);
    for (NodeId a = 0; a < node_count(); ++a)
        for (NodeId b : adjacency_[a])
            if (a < b) out.emplace_back(a, b);
    return out;
}

WordNetwork build_network(const Document& doc, std::size_t window) {
    if (doc.tokens.size() < 2)
        throw Error(ErrorKind::TooFewTokens, doc.id + ": a network needs at least 2 tokens");
    if (window == 0) throw Error(ErrorKind::InvalidArgument, "window must be >= 1");

    std::unordered_map<std::string, NodeId> ids;
    std::vector<std::string> labels;
    std::vector<std::size_t> frequency;
    std::vector<bool> stopword;
    std::vector<NodeId> sequence;
    sequence.reserve(doc.tokens.size());
    for (std::size_t t = 0; t < doc.tokens.size(); ++t) {
        auto [it, inserted] = ids.emplace(doc.tokens[t], static_cast<NodeId>(labels.size()));
        if (inserted) {
            labels.push_back(doc.tokens[t]);
            frequency.push_back(0);
            stopword.push_back(t < doc.stopword_mask.size() && doc.stopword_mask[t]);
        }
        ++frequency[it->second];
        sequence.push_back(it->second);
    }
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (std::size_t t = 0; t < sequence.size(); ++t)
        for (std::size_t w = 1; w <= window && t + w < sequence.size(); ++w)
            edges.emplace_back(sequence[t], sequence[t + w]);
    return WordNetwork(std::move(labels), edges, std::move(frequency), std::move(stopword));
}

std::vector<std::vector<NodeId>> connected_components(const WordNetwork& net) {
    const auto n = net.node_count();
    std::vector<bool> seen(n, false);
    std::vector<std::vector<NodeId>> components;
    std::vector<NodeId> stack;
    for (NodeId start = 0; start < n; ++start) {
        if (seen[start]) continue;
        std::vector<NodeId> component;
        seen[start] = true;
        stack.push_back(start);
        while (!stack.empty()) {
            NodeId u = stack.back();
            stack.pop_back();
            component.push_back(u);
            for (NodeId v : net.neighbors(u))
                if (!seen[v]) {
                    seen[v] = true;
                    stack.push_back(v);
                }
        }
        std::sort(component.begin(), component.end());
        components.push_back(std::move(component));
    }
    return components;
}

std::vector<NodeId> largest_component_nodes(const WordNetwork& net) {
    auto components = connected_components(net);
    if (components.empty()) return {};
    // Components arrive ordered by their smallest id, so the first maximum wins ties.
    auto best = std::max_element(components.begin(), components.end(),
                                 [](const auto& a, const auto& b) { return a.size() < b.size(); });
    return std::move(*best);
}

WordNetwork induced_subgraph(const WordNetwork& net, std::span<const NodeId> nodes) {
    std::vector<NodeId> local(net.node_count(), kUnreachable);
    std::vector<std::string> labels;
    std::vector<std::size_t> frequency;
    std::vector<bool> stopword;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        local[nodes[i]] = static_cast<NodeId>(i);
        labels.push_back(net.label(nodes[i]));
        frequency.push_back(net.frequency(nodes[i]));
        stopword.push_back(net.is_stopword(nodes[i]));
    }
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (std::size_t i = 0; i < nodes.size(); ++i)
        for (NodeId v : net.neighbors(nodes[i]))
            if (local[v] != kUnreachable && i < local[v]) edges.emplace_back(static_cast<NodeId>(i), local[v]);
    return WordNetwork(std::move(labels), edges, std::move(frequency), std::move(stopword));
}

WordNetwork largest_component(const WordNetwork& net) {
    auto nodes = largest_component_nodes(net);
    if (nodes.size() == net.node_count()) return net;
    return induced_subgraph(net, nodes);
}

bool is_connected(const WordNetwork& net) {
    return net.node_count() > 0 && largest_component_nodes(net).size() == net.node_count();
}

std::vector<std::uint32_t> bfs_distances(const WordNetwork& net, NodeId source) {
    std::vector<std::uint32_t> dist(net.node_count(), kUnreachable);
    std::vector<NodeId> queue;
    queue.reserve(net.node_count());
    dist[source] = 0;
    queue.push_back(source);
    for (std::size_t head = 0; head < queue.size(); ++head) {
        NodeId u = queue[head];
        for (NodeId v : net.neighbors(u))
            if (dist[v] == kUnreachable) {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
    }
    return dist;
}

DistanceOracle all_pairs_distances(const WordNetwork& net) {
    if (!is_connected(net)) throw Error(ErrorKind::Disconnected, "all-pairs distances need a connected network");
    DistanceOracle oracle(net.node_count());
    for (NodeId s = 0; s < net.node_count(); ++s) {
        auto dist = bfs_distances(net, s);
        std::copy(dist.begin(), dist.end(), oracle.row(s).begin());
    }
    return oracle;
}

std::string network_to_json(const WordNetwork& net) {
    nlohmann::ordered_json out;
    out["nodes"] = nlohmann::ordered_json::array();
    for (NodeId i = 0; i < net.node_count(); ++i)
        out["nodes"].push_back({{"id", i},
                                {"label", net.label(i)},
                                {"frequency", net.frequency(i)},
                                {"stopword", net.is_stopword(i)}});
    out["edges"] = nlohmann::ordered_json::array();
    for (auto [a, b] : net.edges()) out["edges"].push_back({a, b});
    return out.dump(2);
}

}  // namespace textnet
