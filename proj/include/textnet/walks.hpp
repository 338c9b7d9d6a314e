#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "textnet/graph.hpp"
#include "textnet/metrics.hpp"

namespace textnet {

// Breadth-first rings around a source. dead_ends[r] counts ring-r nodes with
// no neighbor in ring r + 1; it is filled for every r <= h_max, so the ring
// beyond h_max is inspected but not stored.
struct ConcentricLevels {
    NodeId source = 0;
    std::vector<std::vector<NodeId>> rings;  // rings[0] == {source}, each sorted
    std::vector<std::size_t> dead_ends;
};

ConcentricLevels concentric_levels(const WordNetwork& net, NodeId source, unsigned h_max);

// Exact distribution of a self-avoiding random walk after h steps. At each
// step the walker moves uniformly to an unvisited neighbor; a walker with no
// unvisited neighbor stops and its mass goes to dead_end_mass. Branches whose
// probability drops below the pruning floor are also booked as dead-end mass
// (and reported separately in pruned_mass), so the total always sums to one.
struct WalkDistribution {
    NodeId source = 0;
    unsigned h = 0;
    std::vector<std::pair<NodeId, double>> probs;  // sorted by node, all > 0
    double dead_end_mass = 0.0;
    double pruned_mass = 0.0;

    double probability(NodeId node) const;
    double reached_mass() const;
};

inline constexpr unsigned kMaxWalkLength = 4;
inline constexpr double kWalkPruneFloor = 1e-15;

WalkDistribution saw_distribution(const WordNetwork& net, NodeId source, unsigned h,
                                  double prune_floor = kWalkPruneFloor, unsigned max_h = kMaxWalkLength);

// exp of the Shannon entropy (natural log) of the access distribution over
// the nodes the walk actually reached, renormalized to sum 1. Zero when
// nothing is reached.
double accessibility(const WalkDistribution& dist);
double accessibility(const WordNetwork& net, NodeId source, unsigned h);

// Scaling and squaring with a diagonal Pade approximant of degree 3..13.
Eigen::MatrixXd matrix_exponential(const Eigen::MatrixXd& a);

struct TransitionMatrix {
    Eigen::MatrixXd p;            // P_ij = a_ij / k_i
    Eigen::MatrixXd exp_p;        // exp(P)
    std::vector<bool> isolated;   // rows of P that are all zero
};

TransitionMatrix transition_matrix(const WordNetwork& net);

// Row-wise exp-entropy of exp(P)/e, each row renormalized to sum 1.
NodeMeasures generalized_accessibility(const TransitionMatrix& tm, bool exclude_self = false);
NodeMeasures generalized_accessibility(const WordNetwork& net, bool exclude_self = false);

// The ball of radius h around a source with every edge inside a ring removed.
// In the merged form, nodes of one ring that were linked inside it first
// collapse into a single super-node. Node 0 is the source; nodes are ordered
// by ring, then by smallest member id.
struct LocalPattern {
    std::vector<std::vector<NodeId>> members;  // original node ids per pattern node
    std::vector<unsigned> ring;
    std::vector<std::vector<NodeId>> adjacency;  // sorted
    unsigned depth = 0;

    std::size_t node_count() const { return members.size(); }
    std::size_t ring_size(unsigned r) const;
    std::size_t dead_ends(unsigned r) const;  // ring-r nodes without a ring r+1 neighbor
};

LocalPattern backbone_transform(const WordNetwork& net, NodeId source, unsigned h);
LocalPattern merged_transform(const WordNetwork& net, NodeId source, unsigned h);

enum class SymmetryVariant { backbone, merged };

// Outward walk over a pattern: every step moves to a uniformly chosen
// neighbor one ring further out; a node with none is a dead end.
// Returns the probability of each pattern node in ring h.
std::vector<std::pair<NodeId, double>> outward_walk(const LocalPattern& pattern, unsigned h);

// exp(entropy of ring-h access) / (|ring h| + sum_{r<h} dead_ends(r)),
// measured on the transformed pattern; 0 when ring h is empty.
double symmetry(const LocalPattern& pattern, unsigned h);
double symmetry(const WordNetwork& net, NodeId source, unsigned h, SymmetryVariant variant);

}  // namespace textnet
