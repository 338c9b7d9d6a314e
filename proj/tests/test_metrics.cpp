#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/Eigenvalues>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "textnet/error.hpp"
#include "textnet/metrics.hpp"

using namespace textnet;
using doctest::Approx;

namespace {

double val(const NodeMeasures& m, NodeId i) {
    REQUIRE(m.values[i].has_value());
    return *m.values[i];
}

WordNetwork two_triangles() {
    return WordNetwork({"a", "b", "c", "d", "e", "f"}, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}, {2, 3}});
}

}  // namespace

TEST_CASE("degree") {
    auto k5 = degree(oracle::to_network(oracle::complete(5)));
    for (NodeId i = 0; i < 5; ++i) CHECK(val(k5, i) == 4);
    auto s = degree(oracle::to_network(oracle::star(4)));
    CHECK(val(s, 0) == 4);
    CHECK(val(s, 3) == 1);
    CHECK(s.name == "k");
}

TEST_CASE("neighborhood connectivity counts the ring at distance h") {
    auto p = oracle::to_network(oracle::path(5));
    CHECK(val(neighborhood_connectivity(p, 2), 2) == 2);
    CHECK(val(neighborhood_connectivity(p, 2), 0) == 1);
    CHECK(val(neighborhood_connectivity(p, 2, true), 0) == 2);
    CHECK(neighborhood_connectivity(p, 3).name == "N3");

    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 100; ++trial) {
        int n = std::uniform_int_distribution<int>(1, 12)(rng);
        auto g = oracle::random_connected(rng, n, 0.15);
        auto net = oracle::to_network(g);
        auto d = oracle::floyd_warshall(oracle::dense(g));
        auto k = degree(net);
        for (unsigned h = 1; h <= 4; ++h) {
            auto exact = neighborhood_connectivity(net, h);
            auto within = neighborhood_connectivity(net, h, true);
            for (int i = 0; i < n; ++i) {
                int ring = 0, ball = 0;
                for (int j = 0; j < n; ++j) {
                    ring += d[i][j] == static_cast<int>(h);
                    ball += d[i][j] >= 1 && d[i][j] <= static_cast<int>(h);
                }
                CHECK(val(exact, i) == ring);
                CHECK(val(within, i) == ball);
                if (h == 1) CHECK(val(exact, i) == val(k, i));
            }
        }
    }
}

TEST_CASE("clustering") {
    auto k3 = clustering(oracle::to_network(oracle::complete(3)));
    for (NodeId i = 0; i < 3; ++i) CHECK(val(k3, i) == 1.0);
    CHECK(val(clustering(oracle::to_network(oracle::star(4))), 0) == 0.0);
    CHECK(val(clustering(oracle::to_network(oracle::path(2))), 0) == 0.0);

    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 100; ++trial) {
        int n = std::uniform_int_distribution<int>(1, 12)(rng);
        auto g = oracle::random_connected(rng, n, 0.35);
        auto cc = clustering(oracle::to_network(g));
        auto ref = oracle::clustering(oracle::dense(g));
        for (int i = 0; i < n; ++i) CHECK(val(cc, i) == Approx(ref[i]).epsilon(1e-15));
    }
}

TEST_CASE("betweenness over ordered pairs") {
    auto p = betweenness(oracle::to_network(oracle::path(3)));
    CHECK(val(p, 1) == 2.0);
    CHECK(val(p, 0) == 0.0);
    auto k4 = betweenness(oracle::to_network(oracle::complete(4)));
    for (NodeId i = 0; i < 4; ++i) CHECK(val(k4, i) == 0.0);

    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 60; ++trial) {
        int n = std::uniform_int_distribution<int>(1, 10)(rng);
        auto g = oracle::random_connected(rng, n, 0.25);
        auto b = betweenness(oracle::to_network(g));
        auto ref = oracle::betweenness(oracle::dense(g));
        for (int i = 0; i < n; ++i) CHECK(val(b, i) == Approx(ref[i]).epsilon(1e-12));
    }
}

TEST_CASE("closeness and eccentricity") {
    auto p = oracle::to_network(oracle::path(3));
    CHECK(val(closeness(p), 1) == Approx(2.0 / 3.0));
    CHECK(val(closeness(p, ClosenessForm::reciprocal), 1) == Approx(1.5));
    CHECK(val(closeness(oracle::to_network(oracle::complete(4))), 2) == 0.75);
    auto e = eccentricity(p);
    CHECK(val(e, 1) == 1);
    CHECK(val(e, 0) == 2);
    CHECK(val(e, 2) == 2);

    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 100; ++trial) {
        int n = std::uniform_int_distribution<int>(1, 12)(rng);
        auto g = oracle::random_connected(rng, n, 0.2);
        auto net = oracle::to_network(g);
        auto d = oracle::floyd_warshall(oracle::dense(g));
        auto c = closeness(net);
        auto ecc = eccentricity(net);
        int diameter = 0;
        double max_e = 0;
        for (int i = 0; i < n; ++i) {
            double sum = std::accumulate(d[i].begin(), d[i].end(), 0.0);
            CHECK(val(c, i) == Approx(sum / n).epsilon(1e-15));
            int far = *std::max_element(d[i].begin(), d[i].end());
            CHECK(val(ecc, i) == far);
            for (int j = 0; j < n; ++j) diameter = std::max(diameter, d[i][j]);
            max_e = std::max(max_e, val(ecc, i));
        }
        CHECK(max_e == diameter);
    }
}

TEST_CASE("distance measures leave nodes outside the largest component missing") {
    WordNetwork net({"a", "b", "c", "d", "e"}, {{0, 1}, {1, 2}, {3, 4}});
    for (const auto& m : {betweenness(net), closeness(net), eccentricity(net), eigenvector_centrality(net),
                          pagerank(net)}) {
        CHECK(m.values[0].has_value());
        CHECK_FALSE(m.values[3].has_value());
        CHECK_FALSE(m.values[4].has_value());
        CHECK(m.present().size() == 3);
    }
    // Local measures cover everything.
    CHECK(clustering(net).present().size() == 5);
}

TEST_CASE("eigenvector centrality") {
    auto k4 = eigenvector_centrality(oracle::to_network(oracle::complete(4)));
    for (NodeId i = 0; i < 4; ++i) CHECK(val(k4, i) == Approx(0.25).epsilon(1e-12));
    auto s = eigenvector_centrality(oracle::to_network(oracle::star(4)));
    CHECK(val(s, 0) / val(s, 1) == Approx(2.0).epsilon(1e-9));

    std::mt19937_64 rng(10);
    for (int trial = 0; trial < 100; ++trial) {
        int n = std::uniform_int_distribution<int>(2, 8)(rng);
        auto g = oracle::random_connected(rng, n, 0.3);
        auto a = oracle::dense(g);
        Eigen::MatrixXd m(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m(i, j) = a[i][j];
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
        Eigen::VectorXd lead = solver.eigenvectors().col(n - 1);
        lead /= lead.sum();
        auto ec = eigenvector_centrality(oracle::to_network(g));
        for (int i = 0; i < n; ++i) CHECK(val(ec, i) == Approx(lead(i)).epsilon(1e-8));
    }
}

TEST_CASE("pagerank fixed point") {
    auto c6 = pagerank(oracle::to_network(oracle::cycle(6)), 0.85);
    for (NodeId i = 0; i < 6; ++i) CHECK(val(c6, i) == Approx(1.0 / 0.15).epsilon(1e-12));
    WordNetwork single({"a"}, {});
    CHECK(val(pagerank(single), 0) == 1.0);
    auto small_alpha = pagerank(oracle::to_network(oracle::star(5)), 1e-9);
    for (NodeId i = 0; i < 6; ++i) CHECK(val(small_alpha, i) == Approx(1.0).epsilon(1e-8));

    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 100; ++trial) {
        int n = std::uniform_int_distribution<int>(1, 12)(rng);
        auto g = oracle::random_connected(rng, n, 0.2);
        auto a = oracle::dense(g);
        const double alpha = 0.85;
        auto pr = pagerank(oracle::to_network(g), alpha);
        std::vector<double> k(n, 0);
        for (int i = 0; i < n; ++i) k[i] = std::max(1, std::accumulate(a[i].begin(), a[i].end(), 0));
        double residual = 0;
        for (int i = 0; i < n; ++i) {
            double rhs = 1.0;
            for (int j = 0; j < n; ++j) rhs += alpha * a[i][j] * val(pr, j) / k[j];
            residual = std::max(residual, std::abs(rhs - val(pr, i)));
        }
        CHECK(residual < 1e-10);
    }
}

TEST_CASE("modularity and community detection") {
    auto net = two_triangles();
    auto a = oracle::dense({6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}, {2, 3}}});
    CHECK(modularity(net, {0, 0, 0, 0, 0, 0}) == 0.0);
    // Eq. 10 by hand: each triangle has 3 internal edges and degree sum 7, M = 7,
    // so Q = 2 * (3/7 - (7/14)^2) = 5/14.
    const double split = modularity(net, {0, 0, 0, 1, 1, 1});
    CHECK(split == Approx(5.0 / 14.0).epsilon(1e-14));
    CHECK(split == Approx(oracle::modularity(a, {0, 0, 0, 1, 1, 1})).epsilon(1e-14));
    CHECK(modularity(net, {7, 7, 7, 2, 2, 2}) == split);

    auto found = detect_communities(net);
    CHECK(found.labels == std::vector<std::size_t>{0, 0, 0, 1, 1, 1});
    CHECK(found.modularity == Approx(split).epsilon(1e-14));
    double best = -1;
    oracle::for_each_partition(6, [&](const std::vector<std::size_t>& c) { best = std::max(best, oracle::modularity(a, c)); });
    CHECK(found.modularity == Approx(best).epsilon(1e-14));

    auto k5 = detect_communities(oracle::to_network(oracle::complete(5)));
    CHECK(k5.modularity == 0.0);
    CHECK(std::all_of(k5.labels.begin(), k5.labels.end(), [](std::size_t l) { return l == 0; }));
    CHECK_THROWS_AS(modularity(WordNetwork({"a"}, {}), {0}), Error);

    std::mt19937_64 rng(14);
    for (int trial = 0; trial < 100; ++trial) {
        int n = std::uniform_int_distribution<int>(2, 14)(rng);
        auto g = oracle::random_connected(rng, n, 0.15);
        auto r = detect_communities(oracle::to_network(g));
        CHECK(r.modularity >= -1e-15);
        CHECK(r.modularity == Approx(oracle::modularity(oracle::dense(g), r.labels)).epsilon(1e-12));
    }
}

TEST_CASE("measures are permutation equivariant") {
    std::mt19937_64 rng(16);
    for (int trial = 0; trial < 30; ++trial) {
        int n = std::uniform_int_distribution<int>(2, 12)(rng);
        auto g = oracle::random_connected(rng, n, 0.25);
        std::vector<int> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        oracle::Edges h{n, {}};
        for (auto [u, v] : g.list) h.list.emplace_back(perm[u], perm[v]);
        auto a = oracle::to_network(g), b = oracle::to_network(h);
        auto same = [&](const NodeMeasures& x, const NodeMeasures& y, double tol) {
            for (int i = 0; i < n; ++i) CHECK(val(x, i) == Approx(val(y, perm[i])).epsilon(tol));
        };
        same(degree(a), degree(b), 1e-15);
        same(clustering(a), clustering(b), 1e-15);
        same(betweenness(a), betweenness(b), 1e-12);
        same(closeness(a), closeness(b), 1e-15);
        same(eccentricity(a), eccentricity(b), 1e-15);
        same(eigenvector_centrality(a), eigenvector_centrality(b), 1e-8);
        same(pagerank(a), pagerank(b), 1e-10);
    }
}
