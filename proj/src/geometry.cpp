#include "causalforge/geometry.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/boyer_myrvold_planar_test.hpp>

#include "causalforge/errors.hpp"

namespace causalforge {

GeodesicPath geodesic(const Hypergraph& h, VertexId u, VertexId v) {
    auto du = h.distances_from(u);
    auto it = du.find(v);
    if (it == du.end()) throw InfeasibleError("vertices are not connected");
    const int total = it->second;
    auto dv = h.distances_from(v);

    GeodesicPath path;
    path.vertices.push_back(u);
    VertexId cur = u;
    for (int k = 0; k < total; ++k) {
        std::optional<VertexId> best;
        for (VertexId w : h.neighbors(cur)) {
            auto iu = du.find(w);
            auto iv = dv.find(w);
            if (iu == du.end() || iv == dv.end()) continue;
            if (iu->second == k + 1 && iv->second == total - k - 1) {
                if (!best || w < *best) best = w;
            }
        }
        if (!best) throw Error("internal: shortest path failed to continue");
        cur = *best;
        path.vertices.push_back(cur);
    }
    return path;
}

BundleProfile bundle_divergence(const Hypergraph& h, const std::vector<RaySeed>& seeds,
                                int steps) {
    if (seeds.size() < 2) throw InputError("bundle needs at least two rays");
    if (steps < 0) throw InputError("steps must be >= 0");
    BundleProfile profile;
    profile.rays.resize(seeds.size());
    profile.truncated.assign(seeds.size(), false);

    for (std::size_t k = 0; k < seeds.size(); ++k) {
        const auto& seed = seeds[k];
        auto nbrs = h.neighbors(seed.start);
        if (!std::binary_search(nbrs.begin(), nbrs.end(), seed.direction)) {
            throw InputError("ray direction must neighbor its start");
        }
        auto dist = h.distances_from(seed.start);
        auto& ray = profile.rays[k];
        ray.push_back(seed.start);
        if (steps >= 1) ray.push_back(seed.direction);
        while (static_cast<int>(ray.size()) <= steps) {
            VertexId cur = ray.back();
            int cur_d = dist.at(cur);
            std::optional<VertexId> best;
            int best_d = -1;
            for (VertexId w : h.neighbors(cur)) {
                int wd = dist.at(w);
                if (wd > best_d || (wd == best_d && best && w < *best)) {
                    best = w;
                    best_d = wd;
                }
            }
            if (!best || best_d <= cur_d) {
                profile.truncated[k] = true;
                break;
            }
            ray.push_back(*best);
        }
    }

    for (std::size_t i = 0; i < seeds.size(); ++i) {
        for (std::size_t j = i + 1; j < seeds.size(); ++j) profile.pairs.emplace_back(i, j);
    }
    profile.separations.resize(static_cast<std::size_t>(steps) + 1);
    for (int s = 0; s <= steps; ++s) {
        auto& row = profile.separations[static_cast<std::size_t>(s)];
        for (const auto& [i, j] : profile.pairs) {
            if (s < static_cast<int>(profile.rays[i].size()) &&
                s < static_cast<int>(profile.rays[j].size())) {
                auto d = h.distance(profile.rays[i][static_cast<std::size_t>(s)],
                                    profile.rays[j][static_cast<std::size_t>(s)]);
                row.push_back(d ? std::optional<int>(*d) : std::nullopt);
            } else {
                row.push_back(std::nullopt);
            }
        }
    }
    return profile;
}

std::string BundleProfile::to_csv() const {
    std::ostringstream out;
    out << "step";
    for (const auto& [i, j] : pairs) out << ",sep_" << i << "_" << j;
    out << "\n";
    for (std::size_t s = 0; s < separations.size(); ++s) {
        out << s;
        for (const auto& d : separations[s]) {
            out << ",";
            if (d) out << *d;
        }
        out << "\n";
    }
    return out.str();
}

std::vector<SkeletonEdge> skeleton_edges(const Hypergraph& h) {
    std::set<SkeletonEdge> edges;
    for (const Hyperedge& e : h.edges()) {
        for (std::size_t i = 0; i < e.vertices.size(); ++i) {
            for (std::size_t j = i + 1; j < e.vertices.size(); ++j) {
                VertexId a = e.vertices[i], b = e.vertices[j];
                if (a == b) continue;
                edges.emplace(std::min(a, b), std::max(a, b));
            }
        }
    }
    return {edges.begin(), edges.end()};
}

namespace {

using BoostGraph =
    boost::adjacency_list<boost::vecS, boost::vecS, boost::undirectedS, boost::no_property,
                          boost::property<boost::edge_index_t, int>>;

struct PlanarityCheck {
    bool planar = true;
    std::vector<SkeletonEdge> kuratowski;
};

PlanarityCheck planarity_of(const std::vector<SkeletonEdge>& edges, bool want_witness) {
    std::map<VertexId, int> index;
    for (const auto& [a, b] : edges) {
        index.emplace(a, 0);
        index.emplace(b, 0);
    }
    int next = 0;
    std::vector<VertexId> back(index.size());
    for (auto& [v, i] : index) {
        i = next;
        back[static_cast<std::size_t>(next)] = v;
        ++next;
    }
    BoostGraph g(index.size());
    int edge_index = 0;
    for (const auto& [a, b] : edges) {
        boost::add_edge(index[a], index[b], edge_index++, g);
    }
    PlanarityCheck out;
    if (!want_witness) {
        out.planar = boost::boyer_myrvold_planarity_test(g);
        return out;
    }
    std::vector<boost::graph_traits<BoostGraph>::edge_descriptor> kur;
    out.planar = boost::boyer_myrvold_planarity_test(
        boost::boyer_myrvold_params::graph = g,
        boost::boyer_myrvold_params::kuratowski_subgraph = std::back_inserter(kur));
    if (!out.planar) {
        for (const auto& e : kur) {
            VertexId a = back[boost::source(e, g)];
            VertexId b = back[boost::target(e, g)];
            out.kuratowski.emplace_back(std::min(a, b), std::max(a, b));
        }
        std::sort(out.kuratowski.begin(), out.kuratowski.end());
        out.kuratowski.erase(std::unique(out.kuratowski.begin(), out.kuratowski.end()),
                             out.kuratowski.end());
    }
    return out;
}

// trim to an edge-minimal nonplanar subgraph; by Kuratowski's theorem that
// is exactly a K5 or K3,3 subdivision
std::vector<SkeletonEdge> minimize_witness(std::vector<SkeletonEdge> edges) {
    for (std::size_t i = 0; i < edges.size();) {
        auto trimmed = edges;
        trimmed.erase(trimmed.begin() + static_cast<long>(i));
        if (!planarity_of(trimmed, false).planar) {
            edges = std::move(trimmed);
        } else {
            ++i;
        }
    }
    return edges;
}

} // namespace

std::optional<TangleType> verify_kuratowski(const std::vector<SkeletonEdge>& edges) {
    std::map<VertexId, std::vector<VertexId>> adj;
    std::set<SkeletonEdge> seen;
    for (const auto& [a, b] : edges) {
        if (a == b || !seen.emplace(a, b).second) return std::nullopt;
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    if (adj.empty()) return std::nullopt;

    std::vector<VertexId> branch;
    for (const auto& [v, nbrs] : adj) {
        if (nbrs.size() != 2) {
            if (nbrs.size() < 2) return std::nullopt;
            branch.push_back(v);
        }
    }
    bool k5_shape = branch.size() == 5;
    bool k33_shape = branch.size() == 6;
    if (!k5_shape && !k33_shape) return std::nullopt;
    for (VertexId v : branch) {
        if (k5_shape && adj[v].size() != 4) return std::nullopt;
        if (k33_shape && adj[v].size() != 3) return std::nullopt;
    }

    // contract degree-2 chains into branch-to-branch connections
    std::set<VertexId> branch_set(branch.begin(), branch.end());
    std::set<SkeletonEdge> used;
    std::set<VertexId> interior_used;
    std::set<SkeletonEdge> connections;
    for (VertexId v : branch) {
        for (VertexId first : adj[v]) {
            SkeletonEdge start{std::min(v, first), std::max(v, first)};
            if (used.count(start)) continue;
            used.insert(start);
            VertexId prev = v, cur = first;
            while (!branch_set.count(cur)) {
                // interior vertices belong to exactly one chain
                if (!interior_used.insert(cur).second) return std::nullopt;
                VertexId next = adj[cur][0] == prev ? adj[cur][1] : adj[cur][0];
                used.insert({std::min(cur, next), std::max(cur, next)});
                prev = cur;
                cur = next;
            }
            if (cur == v) return std::nullopt; // chain loops back
            if (!connections.emplace(std::min(v, cur), std::max(v, cur)).second) {
                return std::nullopt; // parallel chains
            }
        }
    }
    if (used.size() != seen.size()) return std::nullopt; // leftover edges

    if (k5_shape) {
        if (connections.size() != 10) return std::nullopt;
        return TangleType::K5;
    }
    if (connections.size() != 9) return std::nullopt;
    // proper 3+3 bipartition: neighbors of any branch vertex form one side
    std::set<VertexId> side_a;
    VertexId pivot = branch.front();
    for (const auto& [a, b] : connections) {
        if (a == pivot) side_a.insert(b);
        if (b == pivot) side_a.insert(a);
    }
    if (side_a.size() != 3) return std::nullopt;
    for (const auto& [a, b] : connections) {
        if (side_a.count(a) == side_a.count(b)) return std::nullopt;
    }
    return TangleType::K33;
}

namespace {

std::optional<KuratowskiWitness> extract_witness(const std::vector<SkeletonEdge>& edges) {
    auto check = planarity_of(edges, true);
    if (check.planar) return std::nullopt;
    KuratowskiWitness w;
    w.edges = minimize_witness(std::move(check.kuratowski));
    auto type = verify_kuratowski(w.edges);
    if (!type) throw Error("internal: extracted witness failed verification");
    w.type = *type;
    return w;
}

} // namespace

TangleReport is_planar(const Hypergraph& h) {
    TangleReport report;
    auto witness = extract_witness(skeleton_edges(h));
    if (witness) {
        report.planar = false;
        report.witnesses.push_back(std::move(*witness));
    }
    return report;
}

TangleReport count_tangles(const Hypergraph& h) {
    TangleReport report;
    auto edges = skeleton_edges(h);
    for (;;) {
        auto witness = extract_witness(edges);
        if (!witness) break;
        report.planar = false;
        std::set<SkeletonEdge> drop(witness->edges.begin(), witness->edges.end());
        std::vector<SkeletonEdge> rest;
        for (const auto& e : edges) {
            if (!drop.count(e)) rest.push_back(e);
        }
        edges = std::move(rest);
        report.witnesses.push_back(std::move(*witness));
    }
    return report;
}

std::string witness_dot(const Hypergraph& h, const std::vector<KuratowskiWitness>& witnesses) {
    std::set<SkeletonEdge> marked;
    for (const auto& w : witnesses) marked.insert(w.edges.begin(), w.edges.end());
    std::ostringstream out;
    out << "graph skeleton {\n";
    for (const auto& [a, b] : skeleton_edges(h)) {
        out << "  v" << a << " -- v" << b;
        if (marked.count({a, b})) out << " [color=red, penwidth=2]";
        out << ";\n";
    }
    out << "}\n";
    return out.str();
}

} // namespace causalforge
