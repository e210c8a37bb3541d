#include "causalforge/hypergraph.hpp"

#include <algorithm>
#include <deque>
#include <queue>

#include <nlohmann/json.hpp>

#include "causalforge/errors.hpp"

namespace causalforge {

Hypergraph Hypergraph::from_edge_lists(const std::vector<std::vector<VertexId>>& lists) {
    Hypergraph h;
    for (const auto& vs : lists) h.add_edge(vs);
    return h;
}

EdgeId Hypergraph::add_edge(std::vector<VertexId> vertices, EventId creator) {
    if (vertices.empty()) throw InputError("hyperedge needs at least one vertex");
    EdgeId id = next_edge_++;
    for (VertexId v : vertices) {
        incidence_[v].push_back(id);
        if (v >= next_vertex_) next_vertex_ = v + 1;
    }
    edges_.push_back(Hyperedge{id, std::move(vertices), creator});
    return id;
}

void Hypergraph::remove_edge(EdgeId id) {
    auto it = std::find_if(edges_.begin(), edges_.end(),
                           [id](const Hyperedge& e) { return e.id == id; });
    if (it == edges_.end()) throw ConflictError("edge " + std::to_string(id) + " not present");
    for (VertexId v : it->vertices) {
        auto& list = incidence_[v];
        list.erase(std::find(list.begin(), list.end(), id));
        if (list.empty()) incidence_.erase(v);
    }
    edges_.erase(it);
}

VertexId Hypergraph::fresh_vertex() { return next_vertex_++; }

void Hypergraph::reserve_vertex(VertexId v) {
    if (v >= next_vertex_) next_vertex_ = v + 1;
}

const Hyperedge* Hypergraph::find_edge(EdgeId id) const {
    auto it = std::lower_bound(edges_.begin(), edges_.end(), id,
                               [](const Hyperedge& e, EdgeId x) { return e.id < x; });
    if (it == edges_.end() || it->id != id) return nullptr;
    return &*it;
}

std::vector<VertexId> Hypergraph::vertices() const {
    std::vector<VertexId> out;
    out.reserve(incidence_.size());
    for (const auto& [v, _] : incidence_) out.push_back(v);
    return out;
}

bool Hypergraph::has_vertex(VertexId v) const { return incidence_.count(v) > 0; }

std::size_t Hypergraph::vertex_count() const { return incidence_.size(); }

const std::vector<EdgeId>& Hypergraph::edges_at(VertexId v) const {
    static const std::vector<EdgeId> empty;
    auto it = incidence_.find(v);
    return it == incidence_.end() ? empty : it->second;
}

std::vector<VertexId> Hypergraph::neighbors(VertexId v) const {
    std::set<VertexId> out;
    for (EdgeId id : edges_at(v)) {
        for (VertexId w : find_edge(id)->vertices) {
            if (w != v) out.insert(w);
        }
    }
    return {out.begin(), out.end()};
}

std::vector<VertexId> edge_tail(const Hyperedge& e) { return {e.vertices.front()}; }

std::vector<VertexId> edge_head(const Hyperedge& e) {
    std::set<VertexId> out(e.vertices.begin() + 1, e.vertices.end());
    return {out.begin(), out.end()};
}

std::map<VertexId, int> Hypergraph::distances_from(VertexId u, bool directed,
                                                   int radius_cap) const {
    if (!has_vertex(u)) throw InputError("unknown vertex " + std::to_string(u));
    std::map<VertexId, int> dist;
    dist[u] = 0;
    std::deque<VertexId> queue{u};
    while (!queue.empty()) {
        VertexId x = queue.front();
        queue.pop_front();
        int d = dist[x];
        if (radius_cap >= 0 && d >= radius_cap) continue;
        for (EdgeId id : edges_at(x)) {
            const Hyperedge& e = *find_edge(id);
            auto step = [&](VertexId w) {
                if (dist.emplace(w, d + 1).second) queue.push_back(w);
            };
            if (!directed) {
                for (VertexId w : e.vertices) {
                    if (w != x) step(w);
                }
            } else if (e.vertices.front() == x) {
                for (std::size_t i = 1; i < e.vertices.size(); ++i) {
                    if (e.vertices[i] != x) step(e.vertices[i]);
                }
            }
        }
    }
    return dist;
}

std::optional<int> Hypergraph::distance(VertexId u, VertexId v, bool directed) const {
    if (!has_vertex(u) || !has_vertex(v)) throw InputError("unknown vertex");
    if (u == v) return 0;
    auto dist = distances_from(u, directed);
    auto it = dist.find(v);
    if (it == dist.end()) return std::nullopt;
    return it->second;
}

std::vector<std::int64_t> Hypergraph::ball_counts(VertexId center, int r_max) const {
    if (r_max < 0) throw InputError("r_max must be >= 0");
    auto dist = distances_from(center, /*directed=*/false, r_max);
    std::vector<std::int64_t> counts(static_cast<std::size_t>(r_max) + 1, 0);
    for (const auto& [v, d] : dist) {
        if (d <= r_max) ++counts[d];
    }
    for (std::size_t r = 1; r < counts.size(); ++r) counts[r] += counts[r - 1];
    return counts;
}

CanonicalKey Hypergraph::canonical_form() const {
    // incidence graph: one node per vertex (color 0), one per edge (color 1),
    // arcs edge -> vertex labeled by position in the ordered sequence
    ColoredDigraph g;
    std::map<VertexId, int> vnode;
    for (const auto& [v, _] : incidence_) vnode[v] = g.add_vertex(0);
    for (const Hyperedge& e : edges_) {
        int en = g.add_vertex(1);
        for (std::size_t i = 0; i < e.vertices.size(); ++i) {
            g.add_edge(en, vnode[e.vertices[i]], static_cast<int>(i));
        }
    }
    return canonical_key(g);
}

std::string Hypergraph::to_json() const {
    nlohmann::json j;
    j["edges"] = nlohmann::json::array();
    for (const Hyperedge& e : edges_) j["edges"].push_back(e.vertices);
    return j.dump();
}

Hypergraph Hypergraph::from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError(std::string("bad hypergraph JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("edges") || !j["edges"].is_array()) {
        throw InputError("hypergraph JSON must be {\"edges\": [[v,...],...]}");
    }
    Hypergraph h;
    for (const auto& entry : j["edges"]) {
        if (!entry.is_array() || entry.empty()) throw InputError("each edge must be a non-empty array");
        std::vector<VertexId> vs;
        for (const auto& v : entry) {
            if (!v.is_number_unsigned()) throw InputError("vertices must be non-negative integers");
            vs.push_back(v.get<VertexId>());
        }
        h.add_edge(std::move(vs));
    }
    return h;
}

bool Hypergraph::same_edge_multiset(const Hypergraph& other) const {
    auto collect = [](const Hypergraph& h) {
        std::vector<std::vector<VertexId>> out;
        out.reserve(h.edges_.size());
        for (const auto& e : h.edges_) out.push_back(e.vertices);
        std::sort(out.begin(), out.end());
        return out;
    };
    return collect(*this) == collect(other);
}

} // namespace causalforge
