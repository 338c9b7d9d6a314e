#include "textnet/walks.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "textnet/error.hpp"

namespace textnet {

ConcentricLevels concentric_levels(const WordNetwork& net, NodeId source, unsigned h_max) {
    ConcentricLevels levels;
    levels.source = source;
    std::vector<std::uint32_t> dist(net.node_count(), kUnreachable);
    dist[source] = 0;
    levels.rings.push_back({source});
    // One ring past h_max is explored so that dead ends at h_max are known.
    std::vector<NodeId> frontier{source};
    std::vector<std::vector<NodeId>> all_rings{frontier};
    for (unsigned r = 0; r <= h_max && !frontier.empty(); ++r) {
        std::vector<NodeId> next;
        for (NodeId u : frontier)
            for (NodeId v : net.neighbors(u))
                if (dist[v] == kUnreachable) {
                    dist[v] = r + 1;
                    next.push_back(v);
                }
        std::sort(next.begin(), next.end());
        all_rings.push_back(next);
        frontier = std::move(next);
    }
    levels.rings.assign(all_rings.begin(), all_rings.begin() + std::min<std::size_t>(all_rings.size(), h_max + 1));
    while (levels.rings.size() < h_max + 1) levels.rings.emplace_back();
    levels.dead_ends.assign(h_max + 1, 0);
    for (unsigned r = 0; r <= h_max; ++r)
        for (NodeId u : levels.rings[r]) {
            auto nbrs = net.neighbors(u);
            bool outward = std::any_of(nbrs.begin(), nbrs.end(), [&](NodeId v) { return dist[v] == r + 1; });
            if (!outward) ++levels.dead_ends[r];
        }
    return levels;
}

double WalkDistribution::probability(NodeId node) const {
    auto it = std::lower_bound(probs.begin(), probs.end(), node,
                               [](const auto& entry, NodeId n) { return entry.first < n; });
    return it != probs.end() && it->first == node ? it->second : 0.0;
}

double WalkDistribution::reached_mass() const {
    double total = 0.0;
    for (const auto& [node, p] : probs) total += p;
    return total;
}

namespace {

struct WalkState {
    const WordNetwork& net;
    unsigned h;
    double floor;
    std::array<NodeId, kMaxWalkLength + 1> path{};
    // The final step spreads mass evenly over the open neighbors of the
    // penultimate node, so it is deferred: spread[c] is added to every
    // neighbor of c afterwards and blocked[w] takes back what landed on path
    // nodes. This saves a full level of enumeration around hubs.
    std::vector<double>& spread;
    std::vector<double>& blocked;
    std::vector<NodeId>& touched;
    double dead_end = 0.0;
    double pruned = 0.0;

    bool visited(NodeId v, unsigned depth) const {
        for (unsigned i = 0; i <= depth; ++i)
            if (path[i] == v) return true;
        return false;
    }

    void last_step(NodeId u, unsigned depth, double p) {
        std::size_t open = net.degree(u);
        for (unsigned i = 0; i < depth; ++i)
            if (net.has_edge(u, path[i])) --open;
        if (open == 0) {
            dead_end += p;
            return;
        }
        const double share = p / static_cast<double>(open);
        if (share < floor) {
            dead_end += p;
            pruned += p;
            return;
        }
        if (spread[u] == 0.0) touched.push_back(u);
        spread[u] += share;
        for (unsigned i = 0; i < depth; ++i)
            if (net.has_edge(u, path[i])) blocked[path[i]] += share;
    }

    void step(NodeId u, unsigned depth, double p) {
        if (depth + 1 == h) {
            last_step(u, depth, p);
            return;
        }
        std::size_t open = 0;
        for (NodeId v : net.neighbors(u))
            if (!visited(v, depth)) ++open;
        if (open == 0) {
            dead_end += p;
            return;
        }
        const double share = p / static_cast<double>(open);
        if (share < floor) {
            dead_end += p;
            pruned += p;
            return;
        }
        for (NodeId v : net.neighbors(u)) {
            if (visited(v, depth)) continue;
            path[depth + 1] = v;
            step(v, depth + 1, share);
        }
    }
};

double exp_entropy(const std::vector<double>& weights) {
    double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    if (total <= 0.0) return 0.0;
    double entropy = 0.0;
    for (double w : weights) {
        if (w <= 0.0) continue;
        double p = w / total;
        entropy -= p * std::log(p);
    }
    return std::exp(entropy);
}

}  // namespace

WalkDistribution saw_distribution(const WordNetwork& net, NodeId source, unsigned h, double prune_floor,
                                  unsigned max_h) {
    if (h == 0 || h > std::min(max_h, kMaxWalkLength))
        throw Error(ErrorKind::InvalidArgument, "walk length must lie in 1.." + std::to_string(std::min(max_h, kMaxWalkLength)));
    if (source >= net.node_count()) throw Error(ErrorKind::InvalidArgument, "source node out of range");
    const std::size_t n = net.node_count();
    std::vector<double> spread(n, 0.0), blocked(n, 0.0);
    std::vector<NodeId> touched;
    WalkState state{net, h, prune_floor, {}, spread, blocked, touched};
    state.path[0] = source;
    state.step(source, 0, 1.0);

    std::vector<double> mass(n, 0.0), gross(n, 0.0);
    std::sort(touched.begin(), touched.end());
    for (NodeId c : touched)
        for (NodeId d : net.neighbors(c)) gross[d] += spread[c];
    for (NodeId d = 0; d < n; ++d) {
        mass[d] = gross[d] - blocked[d];
        // What remains after taking back blocked mass is rounding noise.
        if (mass[d] <= 1e-12 * gross[d]) mass[d] = 0.0;
    }
    WalkDistribution dist;
    dist.source = source;
    dist.h = h;
    for (NodeId v = 0; v < n; ++v)
        if (mass[v] > 0.0) dist.probs.emplace_back(v, mass[v]);
    dist.dead_end_mass = state.dead_end;
    dist.pruned_mass = state.pruned;
    return dist;
}

double accessibility(const WalkDistribution& dist) {
    std::vector<double> weights;
    weights.reserve(dist.probs.size());
    for (const auto& [node, p] : dist.probs) weights.push_back(p);
    return exp_entropy(weights);
}

double accessibility(const WordNetwork& net, NodeId source, unsigned h) {
    return accessibility(saw_distribution(net, source, h));
}

Eigen::MatrixXd matrix_exponential(const Eigen::MatrixXd& a) {
    using Eigen::MatrixXd;
    if (a.rows() != a.cols()) throw Error(ErrorKind::InvalidArgument, "matrix exponential needs a square matrix");
    const auto n = a.rows();
    if (n == 0) return a;

    static constexpr double theta3 = 1.495585217958292e-2;
    static constexpr double theta5 = 2.539398330063230e-1;
    static constexpr double theta7 = 9.504178996162932e-1;
    static constexpr double theta9 = 2.097847961257068e0;
    static constexpr double theta13 = 5.371920351148152e0;

    // Any consistent norm bounds the truncation error; take the tighter of 1 and inf.
    const double norm = std::min(a.cwiseAbs().colwise().sum().maxCoeff(), a.cwiseAbs().rowwise().sum().maxCoeff());
    const MatrixXd ident = MatrixXd::Identity(n, n);

    auto solve = [&](const MatrixXd& u, const MatrixXd& v) -> MatrixXd {
        return (v - u).partialPivLu().solve(v + u);
    };

    auto low_order = [&](const double* b, int m) -> MatrixXd {
        MatrixXd a2 = a * a;
        MatrixXd power = ident;  // A^(2j)
        MatrixXd u_inner = b[1] * ident;
        MatrixXd v = b[0] * ident;
        for (int k = 2; k <= m; k += 2) {
            power = power * a2;
            v += b[k] * power;
            u_inner += b[k + 1] * power;
        }
        return solve(a * u_inner, v);
    };

    if (norm <= theta9) {
        static constexpr double b3[] = {120.0, 60.0, 12.0, 1.0};
        static constexpr double b5[] = {30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
        static constexpr double b7[] = {17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0};
        static constexpr double b9[] = {17643225600.0, 8821612800.0, 2075673600.0, 302702400.0, 30270240.0,
                                        2162160.0, 110880.0, 3960.0, 90.0, 1.0};
        if (norm <= theta3) return low_order(b3, 3);
        if (norm <= theta5) return low_order(b5, 5);
        if (norm <= theta7) return low_order(b7, 7);
        return low_order(b9, 9);
    }

    static constexpr double b[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                                   1187353796428800.0,  129060195264000.0,   10559470521600.0,
                                   670442572800.0,      33522128640.0,       1323241920.0,
                                   40840800.0,          960960.0,            16380.0,
                                   182.0,               1.0};
    const int s = std::max(0, static_cast<int>(std::ceil(std::log2(norm / theta13))));
    const MatrixXd scaled = a / std::ldexp(1.0, s);
    const MatrixXd a2 = scaled * scaled;
    const MatrixXd a4 = a2 * a2;
    const MatrixXd a6 = a4 * a2;
    MatrixXd u = scaled * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 + b[3] * a2 +
                           b[1] * ident);
    MatrixXd v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * ident;
    MatrixXd r = solve(u, v);
    for (int i = 0; i < s; ++i) r = r * r;
    return r;
}

TransitionMatrix transition_matrix(const WordNetwork& net) {
    const auto n = static_cast<Eigen::Index>(net.node_count());
    TransitionMatrix tm;
    tm.p = Eigen::MatrixXd::Zero(n, n);
    tm.isolated.assign(net.node_count(), false);
    for (NodeId i = 0; i < net.node_count(); ++i) {
        auto nbrs = net.neighbors(i);
        if (nbrs.empty()) {
            tm.isolated[i] = true;
            continue;
        }
        const double w = 1.0 / static_cast<double>(nbrs.size());
        for (NodeId j : nbrs) tm.p(i, j) = w;
    }
    tm.exp_p = matrix_exponential(tm.p);
    return tm;
}

NodeMeasures generalized_accessibility(const TransitionMatrix& tm, bool exclude_self) {
    const auto n = tm.exp_p.rows();
    NodeMeasures m{"Ag", std::vector<std::optional<double>>(static_cast<std::size_t>(n)), {}};
    const double e = std::exp(1.0);
    std::vector<double> row(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j)
            row[static_cast<std::size_t>(j)] = (exclude_self && i == j) ? 0.0 : std::max(0.0, tm.exp_p(i, j) / e);
        m.values[static_cast<std::size_t>(i)] = exp_entropy(row);
    }
    return m;
}

NodeMeasures generalized_accessibility(const WordNetwork& net, bool exclude_self) {
    return generalized_accessibility(transition_matrix(net), exclude_self);
}

std::size_t LocalPattern::ring_size(unsigned r) const {
    return static_cast<std::size_t>(std::count(ring.begin(), ring.end(), r));
}

std::size_t LocalPattern::dead_ends(unsigned r) const {
    std::size_t count = 0;
    for (NodeId u = 0; u < node_count(); ++u) {
        if (ring[u] != r) continue;
        bool outward = std::any_of(adjacency[u].begin(), adjacency[u].end(),
                                   [&](NodeId v) { return ring[v] == r + 1; });
        if (!outward) ++count;
    }
    return count;
}

namespace {

NodeId find_root(std::vector<NodeId>& parent, NodeId x) {
    while (parent[x] != x) {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    return x;
}

LocalPattern build_pattern(const WordNetwork& net, NodeId source, unsigned h, bool merge) {
    if (source >= net.node_count()) throw Error(ErrorKind::InvalidArgument, "source node out of range");
    auto levels = concentric_levels(net, source, h);
    std::vector<NodeId> ball;
    std::vector<std::uint32_t> depth(net.node_count(), kUnreachable);
    for (unsigned r = 0; r <= h; ++r)
        for (NodeId u : levels.rings[r]) {
            depth[u] = r;
            ball.push_back(u);
        }

    // Union-find over intra-ring edges when merging; singletons otherwise.
    std::vector<NodeId> parent(net.node_count());
    for (NodeId u : ball) parent[u] = u;
    if (merge)
        for (NodeId u : ball)
            for (NodeId v : net.neighbors(u))
                if (depth[v] == depth[u]) {
                    NodeId a = find_root(parent, u), b = find_root(parent, v);
                    if (a != b) parent[std::max(a, b)] = std::min(a, b);
                }

    // Group members by root; order groups by (ring, smallest member).
    std::vector<std::pair<std::pair<unsigned, NodeId>, NodeId>> keyed;  // ((ring, root), node)
    for (NodeId u : ball) keyed.push_back({{depth[u], find_root(parent, u)}, u});
    std::sort(keyed.begin(), keyed.end());

    LocalPattern pattern;
    pattern.depth = h;
    std::vector<NodeId> local(net.node_count(), kUnreachable);
    for (std::size_t i = 0; i < keyed.size(); ++i) {
        if (i == 0 || keyed[i].first != keyed[i - 1].first) {
            pattern.members.emplace_back();
            pattern.ring.push_back(keyed[i].first.first);
        }
        pattern.members.back().push_back(keyed[i].second);
        local[keyed[i].second] = static_cast<NodeId>(pattern.members.size() - 1);
    }
    pattern.adjacency.resize(pattern.members.size());
    for (NodeId u : ball)
        for (NodeId v : net.neighbors(u))
            if (depth[v] != kUnreachable && depth[v] != depth[u]) pattern.adjacency[local[u]].push_back(local[v]);
    for (auto& list : pattern.adjacency) {
        std::sort(list.begin(), list.end());
        list.erase(std::unique(list.begin(), list.end()), list.end());
    }
    return pattern;
}

}  // namespace

LocalPattern backbone_transform(const WordNetwork& net, NodeId source, unsigned h) {
    return build_pattern(net, source, h, false);
}

LocalPattern merged_transform(const WordNetwork& net, NodeId source, unsigned h) {
    return build_pattern(net, source, h, true);
}

std::vector<std::pair<NodeId, double>> outward_walk(const LocalPattern& pattern, unsigned h) {
    std::vector<double> mass(pattern.node_count(), 0.0);
    if (pattern.node_count() == 0) return {};
    mass[0] = 1.0;
    // Pattern nodes are sorted by ring, so one sweep in index order propagates level by level.
    for (NodeId u = 0; u < pattern.node_count(); ++u) {
        if (pattern.ring[u] >= h || mass[u] == 0.0) continue;
        std::size_t outward = 0;
        for (NodeId v : pattern.adjacency[u])
            if (pattern.ring[v] == pattern.ring[u] + 1) ++outward;
        if (outward == 0) continue;
        const double share = mass[u] / static_cast<double>(outward);
        for (NodeId v : pattern.adjacency[u])
            if (pattern.ring[v] == pattern.ring[u] + 1) mass[v] += share;
    }
    std::vector<std::pair<NodeId, double>> out;
    for (NodeId u = 0; u < pattern.node_count(); ++u)
        if (pattern.ring[u] == h && mass[u] > 0.0) out.emplace_back(u, mass[u]);
    return out;
}

double symmetry(const LocalPattern& pattern, unsigned h) {
    const std::size_t level = pattern.ring_size(h);
    if (level == 0) return 0.0;
    double entropy = 0.0;
    for (const auto& [node, p] : outward_walk(pattern, h)) entropy -= p * std::log(p);
    std::size_t dead = 0;
    for (unsigned r = 0; r < h; ++r) dead += pattern.dead_ends(r);
    return std::exp(entropy) / static_cast<double>(level + dead);
}

double symmetry(const WordNetwork& net, NodeId source, unsigned h, SymmetryVariant variant) {
    auto pattern = variant == SymmetryVariant::backbone ? backbone_transform(net, source, h)
                                                        : merged_transform(net, source, h);
    return symmetry(pattern, h);
}

}  // namespace textnet
