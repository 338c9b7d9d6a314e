#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <numeric>
#include <random>

#include "oracles.hpp"
#include "textnet/walks.hpp"

using namespace textnet;
using doctest::Approx;

namespace {

struct OraclePattern {
    std::vector<int> ring;               // per pattern node
    std::vector<std::set<int>> adjacency;
};

// Transforms rebuilt from the distance matrix: pattern nodes are ball nodes
// (backbone) or connected pieces of each ring (merged).
OraclePattern oracle_pattern(const oracle::Adj& a, int s, int h, bool merge) {
    const int n = static_cast<int>(a.size());
    auto d = oracle::floyd_warshall(a);
    std::vector<int> group(n, -1);
    OraclePattern p;
    for (int r = 0; r <= h; ++r)
        for (int u = 0; u < n; ++u) {
            if (d[s][u] != r || group[u] >= 0) continue;
            const int id = static_cast<int>(p.ring.size());
            p.ring.push_back(r);
            group[u] = id;
            if (!merge) continue;
            // Flood fill inside ring r.
            std::vector<int> stack{u};
            while (!stack.empty()) {
                int x = stack.back();
                stack.pop_back();
                for (int y = 0; y < n; ++y)
                    if (a[x][y] && d[s][y] == r && group[y] < 0) {
                        group[y] = id;
                        stack.push_back(y);
                    }
            }
        }
    p.adjacency.resize(p.ring.size());
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v)
            if (a[u][v] && group[u] >= 0 && group[v] >= 0 && d[s][u] != d[s][v]) {
                p.adjacency[group[u]].insert(group[v]);
            }
    return p;
}

// Symmetry from the pattern by enumerating outward walks with exact fractions.
double oracle_symmetry(const OraclePattern& p, int h) {
    std::map<int, oracle::Fraction> reach;
    std::function<void(int, oracle::Fraction)> walk = [&](int u, oracle::Fraction prob) {
        if (p.ring[u] == h) {
            reach[u] = reach.count(u) ? reach[u] + prob : prob;
            return;
        }
        std::vector<int> out;
        for (int v : p.adjacency[u])
            if (p.ring[v] == p.ring[u] + 1) out.push_back(v);
        for (int v : out) walk(v, prob / static_cast<__int128>(out.size()));
    };
    walk(0, oracle::Fraction(1, 1));
    int level = 0, dead = 0;
    for (std::size_t u = 0; u < p.ring.size(); ++u) {
        if (p.ring[u] == h) ++level;
        if (p.ring[u] < h) {
            bool outward = false;
            for (int v : p.adjacency[u]) outward |= p.ring[v] == p.ring[u] + 1;
            dead += !outward;
        }
    }
    if (level == 0) return 0.0;
    double entropy = 0.0;
    for (const auto& [node, f] : reach) entropy -= f.value() * std::log(f.value());
    return std::exp(entropy) / (level + dead);
}

bool same_pattern(const LocalPattern& x, const LocalPattern& y) {
    return x.members == y.members && x.ring == y.ring && x.adjacency == y.adjacency;
}

}  // namespace

TEST_CASE("concentric levels") {
    auto star = oracle::to_network(oracle::star(4));
    auto lv = concentric_levels(star, 0, 1);
    CHECK(lv.rings[1] == std::vector<NodeId>{1, 2, 3, 4});
    CHECK(lv.dead_ends[1] == 4);
    CHECK(lv.dead_ends[0] == 0);

    auto p = concentric_levels(oracle::to_network(oracle::path(4)), 0, 3);
    CHECK(p.rings[1] == std::vector<NodeId>{1});
    CHECK(p.rings[3] == std::vector<NodeId>{3});
    CHECK(p.dead_ends == std::vector<std::size_t>{0, 0, 0, 1});

    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 100; ++trial) {
        int n = std::uniform_int_distribution<int>(1, 12)(rng);
        auto g = oracle::random_connected(rng, n, 0.15);
        auto a = oracle::dense(g);
        auto d = oracle::floyd_warshall(a);
        int s = static_cast<int>(rng() % n);
        auto levels = concentric_levels(oracle::to_network(g), s, 4);
        for (int r = 0; r <= 4; ++r) {
            std::vector<NodeId> ring;
            int dead = 0;
            for (int u = 0; u < n; ++u)
                if (d[s][u] == r) {
                    ring.push_back(u);
                    bool out = false;
                    for (int v = 0; v < n; ++v) out |= a[u][v] && d[s][v] == r + 1;
                    dead += !out;
                }
            CHECK(levels.rings[r] == ring);
            CHECK(levels.dead_ends[r] == static_cast<std::size_t>(dead));
        }
    }
}

TEST_CASE("self-avoiding walk distributions") {
    const int n = 5;
    auto star = oracle::to_network(oracle::star(n));
    auto center = saw_distribution(star, 0, 1);
    CHECK(center.probs.size() == n);
    for (auto [v, p] : center.probs) CHECK(p == Approx(1.0 / n));
    auto leaf = saw_distribution(star, 1, 2);
    CHECK(leaf.probs.size() == n - 1);
    for (auto [v, p] : leaf.probs) CHECK(p == Approx(1.0 / (n - 1)));
    CHECK(leaf.probability(1) == 0.0);

    auto c6 = saw_distribution(oracle::to_network(oracle::cycle(6)), 0, 2);
    CHECK(c6.probability(2) == Approx(0.5));
    CHECK(c6.probability(4) == Approx(0.5));
    CHECK(c6.dead_end_mass == 0.0);

    auto dead = saw_distribution(oracle::to_network(oracle::path(3)), 0, 3);
    CHECK(dead.probs.empty());
    CHECK(dead.dead_end_mass == 1.0);
    CHECK_THROWS(saw_distribution(star, 0, 5));
    CHECK_THROWS(saw_distribution(star, 0, 0));
}

TEST_CASE("walk distributions match exact enumeration") {
    std::mt19937_64 rng(22);
    for (int trial = 0; trial < 150; ++trial) {
        int n = std::uniform_int_distribution<int>(1, 12)(rng);
        auto g = oracle::random_connected(rng, n, 0.25);
        auto a = oracle::dense(g);
        auto d = oracle::floyd_warshall(a);
        auto net = oracle::to_network(g);
        for (int s = 0; s < n; ++s)
            for (unsigned h = 1; h <= 4; ++h) {
                auto got = saw_distribution(net, s, h);
                auto ref = oracle::saw(a, s, static_cast<int>(h));
                CHECK(got.probs.size() == ref.probs.size());
                double total = got.dead_end_mass;
                std::vector<double> weights;
                for (auto [v, p] : got.probs) {
                    total += p;
                    weights.push_back(p);
                    CHECK(d[s][v] <= static_cast<int>(h));
                    REQUIRE(ref.probs.count(static_cast<int>(v)));
                    CHECK(p == Approx(ref.probs.at(static_cast<int>(v)).value()).epsilon(1e-13));
                }
                CHECK(got.dead_end_mass == Approx(ref.dead_end.value()).epsilon(1e-13));
                CHECK(total == Approx(1.0).epsilon(1e-12));
                std::vector<double> exact;
                for (const auto& [v, f] : ref.probs) exact.push_back(f.value());
                CHECK(accessibility(got) == Approx(oracle::exp_entropy(exact)).epsilon(1e-10));
                CHECK(accessibility(got) <= static_cast<double>(got.probs.size()) + 1e-9);
            }
    }
}

TEST_CASE("Monte-Carlo walkers agree with the exact distribution") {
    std::mt19937_64 rng(23);
    auto g = oracle::random_connected(rng, 10, 0.3);
    auto a = oracle::dense(g);
    auto net = oracle::to_network(g);
    const int samples = 1000000, h = 3;
    std::vector<double> hits(10, 0.0);
    for (int t = 0; t < samples; ++t) {
        int u = 0;
        std::vector<char> on(10, 0);
        on[0] = 1;
        bool alive = true;
        for (int step = 0; step < h && alive; ++step) {
            std::vector<int> open;
            for (int v = 0; v < 10; ++v)
                if (a[u][v] && !on[v]) open.push_back(v);
            if (open.empty()) {
                alive = false;
                break;
            }
            u = open[rng() % open.size()];
            on[u] = 1;
        }
        if (alive) hits[u] += 1.0;
    }
    auto exact = saw_distribution(net, 0, h);
    for (int v = 0; v < 10; ++v) CHECK(std::abs(hits[v] / samples - exact.probability(v)) < 2e-3);
}

TEST_CASE("accessibility closed forms") {
    for (int n = 2; n <= 8; ++n) {
        auto star = oracle::to_network(oracle::star(n));
        CHECK(accessibility(star, 0, 1) == Approx(n).epsilon(1e-14));
        CHECK(accessibility(star, 1, 2) == Approx(n - 1).epsilon(1e-14));
    }
    CHECK(accessibility(oracle::to_network(oracle::cycle(6)), 0, 2) == Approx(2.0));
    CHECK(accessibility(oracle::to_network(oracle::path(2)), 0, 2) == 0.0);

    // On trees every walk reaches its ring, so A is bounded by the ring size
    // and reaches it only under uniform access.
    std::mt19937_64 rng(24);
    for (int trial = 0; trial < 100; ++trial) {
        int n = std::uniform_int_distribution<int>(2, 12)(rng);
        auto g = oracle::random_tree(rng, n);
        auto net = oracle::to_network(g);
        for (NodeId s = 0; s < static_cast<NodeId>(n); ++s)
            for (unsigned h = 1; h <= 4; ++h) {
                auto dist = saw_distribution(net, s, h);
                auto ring = concentric_levels(net, s, h).rings[h].size();
                double A = accessibility(dist);
                CHECK(A <= ring + 1e-9);
                bool uniform = true;
                for (auto [v, p] : dist.probs) uniform &= std::abs(p - dist.probs.front().second) < 1e-14;
                if (ring > 0) CHECK((std::abs(A - ring) < 1e-9) == uniform);
            }
    }
}

TEST_CASE("matrix exponential") {
    Eigen::MatrixXd p(2, 2);
    p << 0, 1, 1, 0;
    auto e = matrix_exponential(p);
    CHECK(e(0, 0) == Approx(std::cosh(1.0)).epsilon(1e-15));
    CHECK(e(0, 1) == Approx(std::sinh(1.0)).epsilon(1e-15));
    CHECK(matrix_exponential(Eigen::MatrixXd::Zero(3, 3)).isApprox(Eigen::MatrixXd::Identity(3, 3)));

    std::mt19937_64 rng(25);
    for (int trial = 0; trial < 100; ++trial) {
        int n = std::uniform_int_distribution<int>(1, 12)(rng);
        auto g = oracle::random_connected(rng, n, 0.3);
        auto tm = transition_matrix(oracle::to_network(g));
        std::vector<std::vector<double>> m(n, std::vector<double>(n));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m[i][j] = tm.p(i, j);
        auto ref = oracle::taylor_exp(m, 60);
        for (int i = 0; i < n; ++i) {
            double row = 0;
            for (int j = 0; j < n; ++j) {
                CHECK(std::abs(tm.exp_p(i, j) - static_cast<double>(ref[i][j])) < 1e-10);
                row += tm.exp_p(i, j);
            }
            if (n > 1) CHECK(std::abs(row - std::exp(1.0)) < 1e-10);
        }
    }
    // Norms above the largest Pade threshold go through scaling and squaring.
    for (int trial = 0; trial < 20; ++trial) {
        int n = std::uniform_int_distribution<int>(3, 10)(rng);
        auto a = oracle::dense(oracle::random_connected(rng, n, 0.5));
        std::vector<std::vector<double>> m(n, std::vector<double>(n));
        Eigen::MatrixXd em(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) em(i, j) = m[i][j] = 2.5 * a[i][j];
        auto got = matrix_exponential(em);
        auto ref = oracle::taylor_exp(m, 250);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                CHECK(std::abs(got(i, j) - static_cast<double>(ref[i][j])) <= 1e-11 * static_cast<double>(ref[i][j]));
    }
}

TEST_CASE("generalized accessibility") {
    for (int n = 2; n <= 6; ++n) {
        auto ag = generalized_accessibility(oracle::to_network(oracle::complete(n)));
        for (int i = 1; i < n; ++i) CHECK(*ag.values[i] == Approx(*ag.values[0]).epsilon(1e-13));
    }
    auto edge = generalized_accessibility(oracle::to_network(oracle::path(2)));
    double c = std::cosh(1.0) / std::exp(1.0), s = std::sinh(1.0) / std::exp(1.0);
    double expected = std::exp(-(c * std::log(c) + s * std::log(s)));
    CHECK(*edge.values[0] == Approx(expected).epsilon(1e-14));
    CHECK(*edge.values[1] == Approx(expected).epsilon(1e-14));
    auto no_self = generalized_accessibility(oracle::to_network(oracle::path(2)), true);
    CHECK(*no_self.values[0] == Approx(1.0).epsilon(1e-14));

    WordNetwork lone({"a", "b", "c"}, {{0, 1}});
    auto tm = transition_matrix(lone);
    CHECK(tm.isolated == std::vector<bool>{false, false, true});
    CHECK(*generalized_accessibility(tm).values[2] == Approx(1.0));

    std::mt19937_64 rng(26);
    for (int trial = 0; trial < 30; ++trial) {
        int n = std::uniform_int_distribution<int>(2, 12)(rng);
        auto g = oracle::random_connected(rng, n, 0.25);
        std::vector<int> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        oracle::Edges h{n, {}};
        for (auto [u, v] : g.list) h.list.emplace_back(perm[u], perm[v]);
        auto x = generalized_accessibility(oracle::to_network(g));
        auto y = generalized_accessibility(oracle::to_network(h));
        for (int i = 0; i < n; ++i) CHECK(*x.values[i] == Approx(*y.values[perm[i]]).epsilon(1e-12));
    }
}

TEST_CASE("backbone and merged transforms") {
    auto k3 = oracle::to_network(oracle::complete(3));
    auto back = backbone_transform(k3, 0, 1);
    CHECK(back.node_count() == 3);
    CHECK(back.adjacency[1] == std::vector<NodeId>{0});
    CHECK(back.adjacency[2] == std::vector<NodeId>{0});
    auto merged = merged_transform(k3, 0, 1);
    CHECK(merged.node_count() == 2);
    CHECK(merged.members[1] == std::vector<NodeId>{1, 2});
    CHECK(outward_walk(merged, 1) == std::vector<std::pair<NodeId, double>>{{1, 1.0}});

    std::mt19937_64 rng(27);
    for (int trial = 0; trial < 100; ++trial) {
        int n = std::uniform_int_distribution<int>(1, 12)(rng);
        auto tree = oracle::to_network(oracle::random_tree(rng, n));
        auto g = oracle::random_connected(rng, n, 0.3);
        auto net = oracle::to_network(g);
        auto d = oracle::floyd_warshall(oracle::dense(g));
        NodeId s = static_cast<NodeId>(rng() % n);
        for (unsigned h = 1; h <= 4; ++h) {
            CHECK(same_pattern(backbone_transform(tree, s, h), merged_transform(tree, s, h)));
            auto b = backbone_transform(net, s, h);
            for (NodeId u = 0; u < b.node_count(); ++u)
                for (NodeId v : b.adjacency[u]) CHECK(b.ring[u] != b.ring[v]);
            auto ob = oracle_pattern(oracle::dense(g), static_cast<int>(s), static_cast<int>(h), false);
            auto om = oracle_pattern(oracle::dense(g), static_cast<int>(s), static_cast<int>(h), true);
            auto m = merged_transform(net, s, h);
            for (unsigned r = 0; r <= h; ++r) {
                CHECK(b.ring_size(r) == static_cast<std::size_t>(std::count(ob.ring.begin(), ob.ring.end(), static_cast<int>(r))));
                CHECK(m.ring_size(r) == static_cast<std::size_t>(std::count(om.ring.begin(), om.ring.end(), static_cast<int>(r))));
            }
        }
    }
}

TEST_CASE("symmetry") {
    auto c6 = oracle::to_network(oracle::cycle(6));
    CHECK(symmetry(c6, 0, 2, SymmetryVariant::backbone) == Approx(1.0).epsilon(1e-14));
    CHECK(symmetry(c6, 0, 2, SymmetryVariant::merged) == Approx(1.0).epsilon(1e-14));
    auto star = oracle::to_network(oracle::star(5));
    CHECK(symmetry(star, 0, 2, SymmetryVariant::backbone) == 0.0);
    CHECK(symmetry(star, 0, 2, SymmetryVariant::merged) == 0.0);
    for (int n = 3; n <= 7; ++n) {
        auto kn = oracle::to_network(oracle::complete(n));
        CHECK(symmetry(kn, 0, 1, SymmetryVariant::backbone) == Approx(1.0).epsilon(1e-14));
        CHECK(symmetry(kn, 0, 1, SymmetryVariant::merged) == Approx(1.0).epsilon(1e-14));
    }
    for (int n = 4; n <= 10; ++n)
        for (unsigned h = 1; h < static_cast<unsigned>(n) / 2; ++h)
            CHECK(symmetry(oracle::to_network(oracle::cycle(n)), 0, h, SymmetryVariant::backbone) ==
                  Approx(1.0).epsilon(1e-14));

    std::mt19937_64 rng(28);
    for (int trial = 0; trial < 150; ++trial) {
        int n = std::uniform_int_distribution<int>(1, 12)(rng);
        auto g = oracle::random_connected(rng, n, 0.25);
        auto a = oracle::dense(g);
        auto net = oracle::to_network(g);
        for (int s = 0; s < n; ++s)
            for (int h = 1; h <= 4; ++h) {
                double sb = symmetry(net, s, h, SymmetryVariant::backbone);
                double sm = symmetry(net, s, h, SymmetryVariant::merged);
                CHECK(sb >= 0.0);
                CHECK(sb <= 1.0 + 1e-12);
                CHECK(sm >= 0.0);
                CHECK(sm <= 1.0 + 1e-12);
                CHECK(sb == Approx(oracle_symmetry(oracle_pattern(a, s, h, false), h)).epsilon(1e-12));
                CHECK(sm == Approx(oracle_symmetry(oracle_pattern(a, s, h, true), h)).epsilon(1e-12));
            }
    }
}
