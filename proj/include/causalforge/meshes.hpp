#pragma once

#include <cstdint>
#include <vector>

#include "causalforge/hypergraph.hpp"

namespace causalforge {

// Deterministic graph generators for experiments and tests. All meshes are
// binary-edge hypergraphs; analyses use the undirected skeleton.

Hypergraph path_graph(int n);
Hypergraph cycle_graph(int n);
Hypergraph complete_graph(int n);
Hypergraph complete_bipartite(int a, int b);

Hypergraph grid2d(int width, int height, bool torus);
Hypergraph grid3d(int nx, int ny, int nz, bool torus);
VertexId grid2d_vertex(int width, int x, int y);
VertexId grid3d_vertex(int nx, int ny, int x, int y, int z);

// interior vertices have degree 3 (root included), leaves degree 1
Hypergraph trivalent_tree(int depth);
// root has two children, interior vertices two children plus parent
Hypergraph binary_tree(int depth);

// geodesic sphere graph: icosahedron refined `refinements` times (Loop
// split); 12 vertices of degree 5, the rest degree 6
Hypergraph icosahedron_subdivision(int refinements);

// layered patch of the {3,7} triangulation: every vertex not on the last
// ring has degree 7; negatively curved
Hypergraph hyperbolic37_patch(int rings);

// random stacked triangulation (planar by construction)
Hypergraph stacked_triangulation(int vertices, std::uint64_t seed);

// two disjoint copies of g, vertex ids offset
Hypergraph disjoint_union(const Hypergraph& a, const Hypergraph& b);

} // namespace causalforge
