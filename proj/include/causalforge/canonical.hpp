#pragma once

#include <cstdint>
#include <string>
#include <tuple>
#include <vector>

namespace causalforge {

// Canonical forms for finite labeled structures. Everything that needs an
// isomorphism-invariant identity (hypergraph states, causal DAGs, rewrite
// configurations) is lowered to a ColoredDigraph and keyed through one
// canonicalizer: iterative color refinement with an individualization
// fallback, so keys are exact, not heuristic.

struct ColoredDigraph {
    // vertex colors are caller-supplied invariants; edge labels distinguish
    // roles (incidence position, causal vs creation arcs, ...).
    std::vector<int> colors;
    std::vector<std::tuple<int, int, int>> edges; // (from, to, label)

    int add_vertex(int color) {
        colors.push_back(color);
        return static_cast<int>(colors.size()) - 1;
    }
    void add_edge(int from, int to, int label = 0) { edges.emplace_back(from, to, label); }
    int size() const { return static_cast<int>(colors.size()); }
};

struct CanonicalKey {
    std::vector<std::uint8_t> bytes;

    bool operator==(const CanonicalKey& o) const { return bytes == o.bytes; }
    bool operator!=(const CanonicalKey& o) const { return bytes != o.bytes; }
    bool operator<(const CanonicalKey& o) const { return bytes < o.bytes; }

    // short hex digest for labels and DOT output
    std::string digest(std::size_t hex_chars = 12) const;
};

// Equal keys iff the colored digraphs are isomorphic (color- and
// label-preserving). Deterministic and stable across runs.
CanonicalKey canonical_key(const ColoredDigraph& g);

// Canonical relabeling: position i of the result holds the original index of
// the vertex placed at canonical position i.
std::vector<int> canonical_order(const ColoredDigraph& g);

} // namespace causalforge
