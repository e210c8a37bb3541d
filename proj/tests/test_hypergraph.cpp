#include <doctest.h>

#include <random>

#include "causalforge/errors.hpp"
#include "causalforge/hypergraph.hpp"
#include "causalforge/meshes.hpp"
#include "oracles.hpp"

using namespace causalforge;

TEST_CASE("canonical form identifies relabeled hypergraphs") {
    auto a = Hypergraph::from_edge_lists({{0, 0}, {0, 0}});
    auto b = Hypergraph::from_edge_lists({{7, 7}, {7, 7}});
    CHECK(a.canonical_form() == b.canonical_form());

    auto path = Hypergraph::from_edge_lists({{0, 1}, {1, 2}});
    auto wedge = Hypergraph::from_edge_lists({{0, 1}, {0, 2}});
    CHECK(path.canonical_form() != wedge.canonical_form());

    auto shuffled = Hypergraph::from_edge_lists({{1, 2}, {0, 1}});
    CHECK(path.canonical_form() == shuffled.canonical_form());
}

TEST_CASE("canonical form is invariant under random relabeling") {
    std::mt19937_64 rng(11);
    for (int iter = 0; iter < 200; ++iter) {
        int n = 2 + static_cast<int>(rng() % 6);
        std::vector<std::vector<VertexId>> edges;
        int m = 1 + static_cast<int>(rng() % 8);
        for (int e = 0; e < m; ++e) {
            std::vector<VertexId> vs;
            int arity = 1 + static_cast<int>(rng() % 3);
            for (int k = 0; k < arity; ++k) vs.push_back(static_cast<VertexId>(rng() % n));
            edges.push_back(vs);
        }
        auto h = Hypergraph::from_edge_lists(edges);

        std::vector<VertexId> perm(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = static_cast<VertexId>(i);
        std::shuffle(perm.begin(), perm.end(), rng);
        auto relabeled = edges;
        for (auto& e : relabeled) {
            for (auto& v : e) v = perm[v] + 100; // relabel and shift
        }
        std::shuffle(relabeled.begin(), relabeled.end(), rng);
        CHECK(h.canonical_form() == Hypergraph::from_edge_lists(relabeled).canonical_form());
    }
}

TEST_CASE("distance basics") {
    auto h = Hypergraph::from_edge_lists({{0, 1, 2}, {3, 4}});
    CHECK(h.distance(0, 0) == 0);
    CHECK(h.distance(0, 2) == 1);
    CHECK(h.distance(1, 2) == 1);
    CHECK_FALSE(h.distance(0, 3).has_value());
    CHECK_THROWS_AS((void)h.distance(0, 99), InputError);
}

TEST_CASE("directed distance uses tail to head arcs") {
    auto chain = Hypergraph::from_edge_lists({{0, 1}, {1, 2}});
    CHECK(chain.distance(0, 2, true) == 2);
    CHECK_FALSE(chain.distance(2, 0, true).has_value());
    // arity-3 edge: arcs only from the first vertex
    auto tri = Hypergraph::from_edge_lists({{0, 1, 2}});
    CHECK(tri.distance(0, 2, true) == 1);
    CHECK_FALSE(tri.distance(1, 2, true).has_value());
}

TEST_CASE("ball counts") {
    auto isolated = Hypergraph::from_edge_lists({{0}});
    auto counts = isolated.ball_counts(5, 3);
    CHECK(counts == std::vector<std::int64_t>{1, 1, 1, 1});

    auto path = path_graph(201);
    auto c = path.ball_counts(100, 10);
    for (int r = 0; r <= 10; ++r) CHECK(c[static_cast<std::size_t>(r)] == 2 * r + 1);

    auto grid = grid2d(50, 50, false);
    auto gc = grid.ball_counts(grid2d_vertex(50, 25, 25), 2);
    auto expect = oracle::ball_counts(grid, grid2d_vertex(50, 25, 25), 2);
    CHECK(gc[1] == 5);
    CHECK(gc[2] == 13);
    CHECK(gc == std::vector<std::int64_t>(expect.begin(), expect.end()));
}

TEST_CASE("ball counts monotone and distances match oracle") {
    std::mt19937_64 rng(3);
    for (int iter = 0; iter < 50; ++iter) {
        int n = 3 + static_cast<int>(rng() % 8);
        std::vector<std::vector<VertexId>> edges;
        for (int e = 0; e < n + 2; ++e) {
            int arity = 2 + static_cast<int>(rng() % 2);
            std::vector<VertexId> vs;
            for (int k = 0; k < arity; ++k) vs.push_back(static_cast<VertexId>(rng() % n));
            edges.push_back(vs);
        }
        auto h = Hypergraph::from_edge_lists(edges);
        auto verts = h.vertices();
        VertexId u = verts[rng() % verts.size()];
        VertexId v = verts[rng() % verts.size()];
        CHECK(h.distance(u, v) == oracle::distance(h, u, v));

        auto counts = h.ball_counts(u, 5);
        CHECK(counts[0] == 1);
        for (std::size_t r = 1; r < counts.size(); ++r) CHECK(counts[r] >= counts[r - 1]);
    }
}

TEST_CASE("distance triangle inequality on the undirected skeleton") {
    std::mt19937_64 rng(5);
    auto mesh = icosahedron_subdivision(1);
    auto verts = mesh.vertices();
    for (int iter = 0; iter < 200; ++iter) {
        VertexId a = verts[rng() % verts.size()];
        VertexId b = verts[rng() % verts.size()];
        VertexId c = verts[rng() % verts.size()];
        int ab = *mesh.distance(a, b);
        int bc = *mesh.distance(b, c);
        int ac = *mesh.distance(a, c);
        CHECK(ac <= ab + bc);
        CHECK(*mesh.distance(a, a) == 0);
    }
}

TEST_CASE("json round trip is bit identical") {
    auto h = Hypergraph::from_edge_lists({{0, 1}, {1, 2, 2}, {3}});
    auto text = h.to_json();
    auto parsed = Hypergraph::from_json(text);
    CHECK(parsed.to_json() == text);
    CHECK(parsed.same_edge_multiset(h));

    CHECK_THROWS_AS(Hypergraph::from_json("{\"edges\": [[]]}"), InputError);
    CHECK_THROWS_AS(Hypergraph::from_json("not json"), InputError);
}

TEST_CASE("edge bookkeeping") {
    Hypergraph h;
    auto e0 = h.add_edge({0, 1});
    auto e1 = h.add_edge({1, 2});
    CHECK(h.edge_count() == 2);
    h.remove_edge(e0);
    CHECK_FALSE(h.has_edge(e0));
    CHECK(h.has_edge(e1));
    CHECK_FALSE(h.has_vertex(0));
    CHECK_THROWS_AS(h.remove_edge(e0), ConflictError);
    CHECK(h.fresh_vertex() == 3);
}
