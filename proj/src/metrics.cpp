#include "textnet/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>

#include "textnet/error.hpp"

namespace textnet {

std::vector<double> NodeMeasures::present() const {
    std::vector<double> out;
    out.reserve(values.size());
    for (const auto& v : values)
        if (v) out.push_back(*v);
    return out;
}

namespace {

NodeMeasures make(std::string name, std::size_t n) {
    return NodeMeasures{std::move(name), std::vector<std::optional<double>>(n), {}};
}

// Runs `compute` on the largest component and scatters its per-node results
// back, leaving every other node missing.
template <class Compute>
NodeMeasures on_largest_component(const WordNetwork& net, std::string name, Compute compute) {
    auto result = make(std::move(name), net.node_count());
    auto nodes = largest_component_nodes(net);
    if (nodes.empty()) return result;
    std::vector<std::optional<double>> local;
    if (nodes.size() == net.node_count()) {
        local = compute(net);
    } else {
        local = compute(induced_subgraph(net, nodes));
    }
    for (std::size_t i = 0; i < nodes.size(); ++i) result.values[nodes[i]] = local[i];
    return result;
}

std::vector<std::optional<double>> to_optional(const std::vector<double>& v) {
    return {v.begin(), v.end()};
}

}  // namespace

NodeMeasures degree(const WordNetwork& net) {
    auto m = make("k", net.node_count());
    for (NodeId i = 0; i < net.node_count(); ++i) m.values[i] = static_cast<double>(net.degree(i));
    return m;
}

NodeMeasures neighborhood_connectivity(const WordNetwork& net, unsigned h, bool cumulative) {
    if (h == 0) throw Error(ErrorKind::InvalidArgument, "neighborhood connectivity needs h >= 1");
    auto m = make("N" + std::to_string(h), net.node_count());
    const auto n = net.node_count();
    std::vector<std::uint32_t> dist(n, kUnreachable);
    std::vector<NodeId> queue;
    for (NodeId s = 0; s < n; ++s) {
        queue.assign(1, s);
        dist[s] = 0;
        std::size_t count = 0;
        for (std::size_t head = 0; head < queue.size(); ++head) {
            NodeId u = queue[head];
            if (dist[u] == h) continue;
            for (NodeId v : net.neighbors(u)) {
                if (dist[v] != kUnreachable) continue;
                dist[v] = dist[u] + 1;
                queue.push_back(v);
                if (dist[v] == h || cumulative) ++count;
            }
        }
        for (NodeId u : queue) dist[u] = kUnreachable;
        m.values[s] = static_cast<double>(count);
    }
    return m;
}

NodeMeasures clustering(const WordNetwork& net) {
    auto m = make("cc", net.node_count());
    for (NodeId i = 0; i < net.node_count(); ++i) {
        auto nbrs = net.neighbors(i);
        const double k = static_cast<double>(nbrs.size());
        if (nbrs.size() < 2) {
            m.values[i] = 0.0;
            continue;
        }
        std::size_t triangles = 0;
        for (std::size_t a = 0; a < nbrs.size(); ++a) {
            auto other = net.neighbors(nbrs[a]);
            // count common neighbors beyond position a via sorted merge
            auto it = nbrs.begin() + static_cast<std::ptrdiff_t>(a) + 1;
            auto jt = std::lower_bound(other.begin(), other.end(), nbrs[a]);
            while (it != nbrs.end() && jt != other.end()) {
                if (*it < *jt) ++it;
                else if (*jt < *it) ++jt;
                else { ++triangles; ++it; ++jt; }
            }
        }
        m.values[i] = static_cast<double>(triangles) / (k * (k - 1.0) / 2.0);
    }
    return m;
}

NodeMeasures betweenness(const WordNetwork& net) {
    return on_largest_component(net, "B", [](const WordNetwork& g) {
        const auto n = g.node_count();
        std::vector<double> centrality(n, 0.0), sigma(n), delta(n);
        std::vector<std::int64_t> dist(n);
        std::vector<NodeId> order;
        order.reserve(n);
        for (NodeId s = 0; s < n; ++s) {
            std::fill(sigma.begin(), sigma.end(), 0.0);
            std::fill(delta.begin(), delta.end(), 0.0);
            std::fill(dist.begin(), dist.end(), -1);
            order.assign(1, s);
            sigma[s] = 1.0;
            dist[s] = 0;
            for (std::size_t head = 0; head < order.size(); ++head) {
                NodeId u = order[head];
                for (NodeId v : g.neighbors(u)) {
                    if (dist[v] < 0) {
                        dist[v] = dist[u] + 1;
                        order.push_back(v);
                    }
                    if (dist[v] == dist[u] + 1) sigma[v] += sigma[u];
                }
            }
            for (auto it = order.rbegin(); it != order.rend(); ++it) {
                NodeId w = *it;
                for (NodeId v : g.neighbors(w))
                    if (dist[v] == dist[w] - 1) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
                if (w != s) centrality[w] += delta[w];
            }
        }
        return to_optional(centrality);
    });
}

NodeMeasures closeness(const WordNetwork& net, ClosenessForm form) {
    return on_largest_component(net, "C", [form](const WordNetwork& g) {
        const auto n = g.node_count();
        std::vector<std::optional<double>> out(n);
        for (NodeId s = 0; s < n; ++s) {
            auto dist = bfs_distances(g, s);
            double total = 0.0;
            for (auto d : dist) total += d;
            double mean = total / static_cast<double>(n);
            if (form == ClosenessForm::mean_distance) {
                out[s] = mean;
            } else if (mean > 0.0) {
                out[s] = 1.0 / mean;
            }
        }
        return out;
    });
}

NodeMeasures eccentricity(const WordNetwork& net) {
    return on_largest_component(net, "E", [](const WordNetwork& g) {
        std::vector<std::optional<double>> out(g.node_count());
        for (NodeId s = 0; s < g.node_count(); ++s) {
            auto dist = bfs_distances(g, s);
            out[s] = static_cast<double>(*std::max_element(dist.begin(), dist.end()));
        }
        return out;
    });
}

NodeMeasures eigenvector_centrality(const WordNetwork& net, IterationControl control) {
    return on_largest_component(net, "Ec", [control](const WordNetwork& g) {
        const auto n = g.node_count();
        std::vector<double> x(n, 1.0 / static_cast<double>(n)), next(n);
        double residual = 0.0;
        for (unsigned iter = 0; iter < control.max_iterations; ++iter) {
            double total = 0.0;
            for (NodeId i = 0; i < n; ++i) {
                double s = x[i];
                for (NodeId j : g.neighbors(i)) s += x[j];
                next[i] = s;
                total += s;
            }
            residual = 0.0;
            for (NodeId i = 0; i < n; ++i) {
                next[i] /= total;
                residual = std::max(residual, std::abs(next[i] - x[i]));
            }
            x.swap(next);
            if (residual < control.tolerance) return to_optional(x);
        }
        throw Error(ErrorKind::NonConvergence,
                    "eigenvector centrality residual " + std::to_string(residual) + " after " +
                        std::to_string(control.max_iterations) + " iterations");
    });
}

NodeMeasures pagerank(const WordNetwork& net, double alpha, IterationControl control) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorKind::InvalidArgument, "PageRank damping must lie in (0,1)");
    return on_largest_component(net, "Pr", [alpha, control](const WordNetwork& g) {
        const auto n = g.node_count();
        std::vector<double> x(n, 1.0), next(n), share(n);
        double residual = 0.0;
        for (unsigned iter = 0; iter < control.max_iterations; ++iter) {
            for (NodeId j = 0; j < n; ++j)
                share[j] = x[j] / static_cast<double>(std::max<std::size_t>(g.degree(j), 1));
            residual = 0.0;
            for (NodeId i = 0; i < n; ++i) {
                double s = 0.0;
                for (NodeId j : g.neighbors(i)) s += share[j];
                next[i] = alpha * s + 1.0;
                residual = std::max(residual, std::abs(next[i] - x[i]));
            }
            x.swap(next);
            if (residual < control.tolerance) return to_optional(x);
        }
        throw Error(ErrorKind::NonConvergence, "PageRank residual " + std::to_string(residual) + " after " +
                                                   std::to_string(control.max_iterations) + " iterations");
    });
}

double modularity(const WordNetwork& net, const std::vector<std::size_t>& labels) {
    if (labels.size() != net.node_count()) throw Error(ErrorKind::InvalidArgument, "labels must cover every node");
    const double m = static_cast<double>(net.edge_count());
    if (net.edge_count() == 0) throw Error(ErrorKind::InvalidArgument, "modularity needs at least one edge");
    // Per community: internal edge count and degree sum.
    std::map<std::size_t, std::pair<double, double>> per;
    for (NodeId i = 0; i < net.node_count(); ++i) {
        auto& [internal, degree_sum] = per[labels[i]];
        degree_sum += static_cast<double>(net.degree(i));
        for (NodeId j : net.neighbors(i))
            if (i < j && labels[i] == labels[j]) internal += 1.0;
    }
    double q = 0.0;
    for (const auto& [c, stats] : per) {
        double share = stats.second / (2.0 * m);
        q += stats.first / m - share * share;
    }
    return q;
}

CommunityAssignment detect_communities(const WordNetwork& net) {
    const auto n = net.node_count();
    const auto m = static_cast<std::int64_t>(net.edge_count());
    // Community c is identified by its smallest member; links[c][d] counts edges between c and d.
    std::vector<std::map<NodeId, std::int64_t>> links(n);
    std::vector<std::int64_t> degree_sum(n);
    std::vector<bool> alive(n, true);
    std::vector<NodeId> owner(n);
    std::iota(owner.begin(), owner.end(), 0);
    for (NodeId i = 0; i < n; ++i) {
        degree_sum[i] = static_cast<std::int64_t>(net.degree(i));
        for (NodeId j : net.neighbors(i)) links[i][j] = 1;
    }

    while (m > 0) {
        // gain * 2M^2 = 2M * L_ab - D_a * D_b
        bool found = false;
        std::int64_t best_gain = 0;
        NodeId best_a = 0, best_b = 0;
        for (NodeId a = 0; a < n; ++a) {
            if (!alive[a]) continue;
            for (auto it = links[a].upper_bound(a); it != links[a].end(); ++it) {
                NodeId b = it->first;
                std::int64_t gain = 2 * m * it->second - degree_sum[a] * degree_sum[b];
                if (gain > best_gain) {
                    best_gain = gain;
                    best_a = a;
                    best_b = b;
                    found = true;
                }
            }
        }
        if (!found) break;
        // merge best_b into best_a (best_a < best_b)
        for (auto [c, count] : links[best_b]) {
            if (c == best_a) continue;
            links[best_a][c] += count;
            auto& back = links[c];
            back.erase(best_b);
            back[best_a] += count;
        }
        links[best_a].erase(best_b);
        links[best_b].clear();
        degree_sum[best_a] += degree_sum[best_b];
        alive[best_b] = false;
        for (NodeId i = 0; i < n; ++i)
            if (owner[i] == best_b) owner[i] = best_a;
    }

    CommunityAssignment result;
    result.labels.resize(n);
    std::map<NodeId, std::size_t> renumber;
    for (NodeId i = 0; i < n; ++i) {
        auto [it, inserted] = renumber.emplace(owner[i], renumber.size());
        result.labels[i] = it->second;
    }
    result.modularity = m > 0 ? modularity(net, result.labels) : 0.0;
    return result;
}

}  // namespace textnet
