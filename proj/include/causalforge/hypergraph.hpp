#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "causalforge/canonical.hpp"

namespace causalforge {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;
using EventId = std::uint32_t;

constexpr EventId kNoEvent = std::numeric_limits<EventId>::max();

// Ordered hyperedge. The vertex sequence is ordered and may repeat
// (self-loops). The directed view splits the sequence at position 1:
// tail = {vertices[0]}, head = {vertices[1..]}; for binary edges this is the
// usual directed edge. creator tags the event that produced the edge.
struct Hyperedge {
    EdgeId id = 0;
    std::vector<VertexId> vertices;
    EventId creator = kNoEvent;
};

// A spatial state: multiset of ordered hyperedges over integer vertices.
// Values are immutable in spirit: mutation happens only while an engine
// builds a successor state, and all queries are const and pure.
class Hypergraph {
public:
    Hypergraph() = default;

    static Hypergraph from_edge_lists(const std::vector<std::vector<VertexId>>& lists);

    EdgeId add_edge(std::vector<VertexId> vertices, EventId creator = kNoEvent);
    // removes by id; throws ConflictError if the id is not present
    void remove_edge(EdgeId id);
    VertexId fresh_vertex();

    const std::vector<Hyperedge>& edges() const { return edges_; }
    const Hyperedge* find_edge(EdgeId id) const;
    bool has_edge(EdgeId id) const { return find_edge(id) != nullptr; }
    std::size_t edge_count() const { return edges_.size(); }

    // vertex universe = vertices incident to at least one edge
    std::vector<VertexId> vertices() const;
    bool has_vertex(VertexId v) const;
    std::size_t vertex_count() const;

    VertexId next_vertex() const { return next_vertex_; }
    EdgeId next_edge() const { return next_edge_; }
    void reserve_vertex(VertexId v); // bump the counter past v

    // sorted, deduplicated co-members of v (excluding v itself)
    std::vector<VertexId> neighbors(VertexId v) const;
    std::size_t degree(VertexId v) const { return neighbors(v).size(); }
    const std::vector<EdgeId>& edges_at(VertexId v) const;

    // Graph metric: hops counted per hyperedge traversed. Directed mode uses
    // tail->head arcs (split at position 1); undirected mode treats
    // co-membership as adjacency. nullopt = unreachable. Unknown vertices
    // throw InputError.
    std::optional<int> distance(VertexId u, VertexId v, bool directed = false) const;
    std::map<VertexId, int> distances_from(VertexId u, bool directed = false,
                                           int radius_cap = -1) const;

    // N(r) for r = 0..r_max on the undirected skeleton; N(0) = 1
    std::vector<std::int64_t> ball_counts(VertexId center, int r_max) const;

    // keys equal iff isomorphic under vertex relabeling (ids, creators and
    // edge order ignored)
    CanonicalKey canonical_form() const;

    // {"edges": [[v,...],...]}; ids implicit by position
    std::string to_json() const;
    static Hypergraph from_json(const std::string& text);

    bool same_edge_multiset(const Hypergraph& other) const;

private:
    std::vector<Hyperedge> edges_; // ascending ids
    std::map<VertexId, std::vector<EdgeId>> incidence_;
    VertexId next_vertex_ = 0;
    EdgeId next_edge_ = 0;
};

// directed split views used by the curvature casework
std::vector<VertexId> edge_tail(const Hyperedge& e);
std::vector<VertexId> edge_head(const Hyperedge& e);

} // namespace causalforge
