#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "causalforge/hypergraph.hpp"

namespace causalforge {

// Geodesics, geodesic-bundle divergence, and Kuratowski tangle detection on
// the undirected simple skeleton (hyperedges expanded to cliques).

struct GeodesicPath {
    std::vector<VertexId> vertices;
    int length() const { return static_cast<int>(vertices.size()) - 1; }
};

// one shortest path, ties by lexicographically smallest vertex sequence
GeodesicPath geodesic(const Hypergraph& h, VertexId u, VertexId v);

struct RaySeed {
    VertexId start;
    VertexId direction; // a neighbor of start
};

struct BundleProfile {
    std::vector<std::vector<VertexId>> rays; // ray k's vertex sequence
    std::vector<bool> truncated;             // ray stuck before steps ran out
    // separations[s][k]: distance between pair k's rays after s steps,
    // pairs in lexicographic (i, j) order
    std::vector<std::vector<std::optional<int>>> separations;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    std::string to_csv() const;
};

// rays advance greedily (next neighbor maximizing distance from the ray
// start, ties to the smallest vertex id)
BundleProfile bundle_divergence(const Hypergraph& h, const std::vector<RaySeed>& seeds, int steps);

using SkeletonEdge = std::pair<VertexId, VertexId>; // ordered u < v

enum class TangleType { K5, K33 };

struct KuratowskiWitness {
    TangleType type = TangleType::K5;
    std::vector<SkeletonEdge> edges;
};

struct TangleReport {
    bool planar = true;
    std::vector<KuratowskiWitness> witnesses;
};

std::vector<SkeletonEdge> skeleton_edges(const Hypergraph& h);

// planarity of the skeleton; on nonplanar input one verified Kuratowski
// witness is attached
TangleReport is_planar(const Hypergraph& h);

// greedy edge-disjoint tangle extraction: detect, verify, delete, repeat
TangleReport count_tangles(const Hypergraph& h);

// Independent witness verifier (separate path from the detector): the edge
// set must be a subdivision of K5 or K3,3. Returns the classified type.
std::optional<TangleType> verify_kuratowski(const std::vector<SkeletonEdge>& edges);

std::string witness_dot(const Hypergraph& h, const std::vector<KuratowskiWitness>& witnesses);

} // namespace causalforge
