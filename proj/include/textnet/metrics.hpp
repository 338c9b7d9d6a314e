#pragma once

#include <optional>
#include <string>
#include <vector>

#include "textnet/graph.hpp"

namespace textnet {

// Per-node values of one named measurement. std::nullopt marks nodes the
// measure is not defined for (outside the largest component for the
// distance-based measures).
struct NodeMeasures {
    std::string name;
    std::vector<std::optional<double>> values;
    std::string network_ref;

    std::vector<double> present() const;  // defined values, in node order
};

NodeMeasures degree(const WordNetwork& net);

// Nodes at distance exactly h, or within 1..h when cumulative.
NodeMeasures neighborhood_connectivity(const WordNetwork& net, unsigned h, bool cumulative = false);

// 3 * triangles / connected triples centered at the node; 0 below degree 2.
NodeMeasures clustering(const WordNetwork& net);

// The following run on the largest component; other nodes are missing.

// Ordered (i, j) pairs with i != u != j.
NodeMeasures betweenness(const WordNetwork& net);

enum class ClosenessForm { mean_distance, reciprocal };

// mean_distance: (1/V) * sum_j d_ij over the component, d_ii included.
NodeMeasures closeness(const WordNetwork& net, ClosenessForm form = ClosenessForm::mean_distance);

NodeMeasures eccentricity(const WordNetwork& net);

struct IterationControl {
    double tolerance;
    unsigned max_iterations;
};

// Leading eigenvector of A normalized to sum 1. Iterates on A + I so that
// bipartite components, whose spectrum is symmetric, still converge.
// Throws NonConvergence with the final residual.
NodeMeasures eigenvector_centrality(const WordNetwork& net,
                                    IterationControl control = {1e-10, 10000});

// Fixed point of Pr = alpha * A * D^-1 * Pr + 1 with D_ii = max(k_i, 1).
NodeMeasures pagerank(const WordNetwork& net, double alpha = 0.85,
                      IterationControl control = {1e-12, 100000});

struct CommunityAssignment {
    std::vector<std::size_t> labels;  // community per node, numbered by first member
    double modularity = 0.0;
};

double modularity(const WordNetwork& net, const std::vector<std::size_t>& labels);

// Greedy agglomeration: repeatedly merge the adjacent community pair with the
// largest modularity gain while the gain is positive. Gains are compared in
// exact integer arithmetic; ties go to the smallest community id pair.
CommunityAssignment detect_communities(const WordNetwork& net);

}  // namespace textnet
