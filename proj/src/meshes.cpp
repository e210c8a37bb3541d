#include "causalforge/meshes.hpp"

#include <array>
#include <map>
#include <random>
#include <set>

#include "causalforge/errors.hpp"

namespace causalforge {

namespace {

Hypergraph from_pairs(const std::vector<std::pair<VertexId, VertexId>>& pairs) {
    Hypergraph h;
    for (const auto& [a, b] : pairs) h.add_edge({a, b});
    return h;
}

} // namespace

Hypergraph path_graph(int n) {
    if (n < 1) throw InputError("path needs >= 1 vertices");
    std::vector<std::pair<VertexId, VertexId>> edges;
    for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
    return from_pairs(edges);
}

Hypergraph cycle_graph(int n) {
    if (n < 3) throw InputError("cycle needs >= 3 vertices");
    std::vector<std::pair<VertexId, VertexId>> edges;
    for (int i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
    return from_pairs(edges);
}

Hypergraph complete_graph(int n) {
    if (n < 2) throw InputError("complete graph needs >= 2 vertices");
    std::vector<std::pair<VertexId, VertexId>> edges;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
    }
    return from_pairs(edges);
}

Hypergraph complete_bipartite(int a, int b) {
    std::vector<std::pair<VertexId, VertexId>> edges;
    for (int i = 0; i < a; ++i) {
        for (int j = 0; j < b; ++j) edges.emplace_back(i, a + j);
    }
    return from_pairs(edges);
}

VertexId grid2d_vertex(int width, int x, int y) {
    return static_cast<VertexId>(y * width + x);
}

Hypergraph grid2d(int width, int height, bool torus) {
    if (width < 2 || height < 2) throw InputError("grid needs >= 2 per side");
    std::vector<std::pair<VertexId, VertexId>> edges;
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            VertexId v = grid2d_vertex(width, x, y);
            if (x + 1 < width) edges.emplace_back(v, grid2d_vertex(width, x + 1, y));
            else if (torus) edges.emplace_back(v, grid2d_vertex(width, 0, y));
            if (y + 1 < height) edges.emplace_back(v, grid2d_vertex(width, x, y + 1));
            else if (torus) edges.emplace_back(v, grid2d_vertex(width, x, 0));
        }
    }
    return from_pairs(edges);
}

VertexId grid3d_vertex(int nx, int ny, int x, int y, int z) {
    return static_cast<VertexId>((z * ny + y) * nx + x);
}

Hypergraph grid3d(int nx, int ny, int nz, bool torus) {
    if (nx < 2 || ny < 2 || nz < 2) throw InputError("grid needs >= 2 per side");
    std::vector<std::pair<VertexId, VertexId>> edges;
    for (int z = 0; z < nz; ++z) {
        for (int y = 0; y < ny; ++y) {
            for (int x = 0; x < nx; ++x) {
                VertexId v = grid3d_vertex(nx, ny, x, y, z);
                if (x + 1 < nx) edges.emplace_back(v, grid3d_vertex(nx, ny, x + 1, y, z));
                else if (torus) edges.emplace_back(v, grid3d_vertex(nx, ny, 0, y, z));
                if (y + 1 < ny) edges.emplace_back(v, grid3d_vertex(nx, ny, x, y + 1, z));
                else if (torus) edges.emplace_back(v, grid3d_vertex(nx, ny, x, 0, z));
                if (z + 1 < nz) edges.emplace_back(v, grid3d_vertex(nx, ny, x, y, z + 1));
                else if (torus) edges.emplace_back(v, grid3d_vertex(nx, ny, x, y, 0));
            }
        }
    }
    return from_pairs(edges);
}

Hypergraph trivalent_tree(int depth) {
    if (depth < 1) throw InputError("tree needs depth >= 1");
    std::vector<std::pair<VertexId, VertexId>> edges;
    VertexId next = 1;
    std::vector<VertexId> frontier;
    for (int k = 0; k < 3; ++k) {
        edges.emplace_back(0, next);
        frontier.push_back(next++);
    }
    for (int level = 2; level <= depth; ++level) {
        std::vector<VertexId> grown;
        for (VertexId v : frontier) {
            for (int k = 0; k < 2; ++k) {
                edges.emplace_back(v, next);
                grown.push_back(next++);
            }
        }
        frontier = std::move(grown);
    }
    return from_pairs(edges);
}

Hypergraph binary_tree(int depth) {
    if (depth < 1) throw InputError("tree needs depth >= 1");
    std::vector<std::pair<VertexId, VertexId>> edges;
    VertexId next = 1;
    std::vector<VertexId> frontier{0};
    for (int level = 1; level <= depth; ++level) {
        std::vector<VertexId> grown;
        for (VertexId v : frontier) {
            for (int k = 0; k < 2; ++k) {
                edges.emplace_back(v, next);
                grown.push_back(next++);
            }
        }
        frontier = std::move(grown);
    }
    return from_pairs(edges);
}

Hypergraph icosahedron_subdivision(int refinements) {
    if (refinements < 0) throw InputError("refinements must be >= 0");
    // icosahedron faces over vertices 0..11
    std::vector<std::array<VertexId, 3>> faces = {
        {0, 1, 2},  {0, 2, 3},  {0, 3, 4},  {0, 4, 5},  {0, 5, 1},
        {1, 6, 2},  {2, 6, 7},  {2, 7, 3},  {3, 7, 8},  {3, 8, 4},
        {4, 8, 9},  {4, 9, 5},  {5, 9, 10}, {5, 10, 1}, {1, 10, 6},
        {6, 11, 7}, {7, 11, 8}, {8, 11, 9}, {9, 11, 10}, {10, 11, 6}};
    VertexId next = 12;
    for (int step = 0; step < refinements; ++step) {
        std::map<std::pair<VertexId, VertexId>, VertexId> midpoint;
        auto mid = [&](VertexId a, VertexId b) {
            auto key = std::make_pair(std::min(a, b), std::max(a, b));
            auto it = midpoint.find(key);
            if (it == midpoint.end()) it = midpoint.emplace(key, next++).first;
            return it->second;
        };
        std::vector<std::array<VertexId, 3>> split;
        split.reserve(faces.size() * 4);
        for (const auto& [a, b, c] : faces) {
            VertexId ab = mid(a, b), bc = mid(b, c), ca = mid(c, a);
            split.push_back({a, ab, ca});
            split.push_back({b, bc, ab});
            split.push_back({c, ca, bc});
            split.push_back({ab, bc, ca});
        }
        faces = std::move(split);
    }
    std::set<std::pair<VertexId, VertexId>> edges;
    for (const auto& [a, b, c] : faces) {
        edges.emplace(std::min(a, b), std::max(a, b));
        edges.emplace(std::min(b, c), std::max(b, c));
        edges.emplace(std::min(c, a), std::max(c, a));
    }
    return from_pairs({edges.begin(), edges.end()});
}

Hypergraph hyperbolic37_patch(int rings) {
    if (rings < 1) throw InputError("patch needs >= 1 rings");
    // layered construction: ring vertices keep 2 ring neighbors, shared
    // children sit between consecutive parents, own children fill degree to 7
    std::vector<std::pair<VertexId, VertexId>> edges;
    VertexId next = 0;
    VertexId hub = next++;
    struct RingVertex {
        VertexId id;
        int parents; // 1 or 2
    };
    std::vector<RingVertex> ring;
    for (int k = 0; k < 7; ++k) ring.push_back({next++, 1});
    for (int k = 0; k < 7; ++k) {
        edges.emplace_back(hub, ring[k].id);
        edges.emplace_back(ring[k].id, ring[(k + 1) % 7].id);
    }
    for (int level = 2; level <= rings; ++level) {
        std::vector<RingVertex> grown;
        const int n = static_cast<int>(ring.size());
        // one shared child per consecutive pair, plus 3 - parents own children
        std::vector<VertexId> shared(n);
        for (int i = 0; i < n; ++i) shared[i] = next++; // child between i and i+1
        for (int i = 0; i < n; ++i) {
            const RingVertex& rv = ring[i];
            VertexId left_shared = shared[(i + n - 1) % n];
            edges.emplace_back(rv.id, left_shared);
            grown.push_back({left_shared, 2});
            int own = 3 - rv.parents; // degree 7 = 2 ring + parents + own + 2 shared
            for (int k = 0; k < own; ++k) {
                VertexId child = next++;
                edges.emplace_back(rv.id, child);
                grown.push_back({child, 1});
            }
            edges.emplace_back(rv.id, shared[i]);
        }
        const int m = static_cast<int>(grown.size());
        for (int i = 0; i < m; ++i) edges.emplace_back(grown[i].id, grown[(i + 1) % m].id);
        ring = std::move(grown);
    }
    return from_pairs(edges);
}

Hypergraph stacked_triangulation(int vertices, std::uint64_t seed) {
    if (vertices < 3) throw InputError("triangulation needs >= 3 vertices");
    std::mt19937_64 rng(seed);
    std::vector<std::array<VertexId, 3>> faces{{0, 1, 2}};
    std::vector<std::pair<VertexId, VertexId>> edges{{0, 1}, {1, 2}, {0, 2}};
    VertexId next = 3;
    while (next < static_cast<VertexId>(vertices)) {
        std::size_t f = rng() % faces.size();
        auto [a, b, c] = faces[f];
        VertexId v = next++;
        faces[f] = {a, b, v};
        faces.push_back({b, c, v});
        faces.push_back({a, c, v});
        edges.emplace_back(a, v);
        edges.emplace_back(b, v);
        edges.emplace_back(c, v);
    }
    return from_pairs(edges);
}

Hypergraph disjoint_union(const Hypergraph& a, const Hypergraph& b) {
    Hypergraph out;
    for (const Hyperedge& e : a.edges()) out.add_edge(e.vertices);
    VertexId offset = a.next_vertex();
    for (const Hyperedge& e : b.edges()) {
        std::vector<VertexId> vs;
        for (VertexId v : e.vertices) vs.push_back(v + offset);
        out.add_edge(std::move(vs));
    }
    return out;
}

} // namespace causalforge
