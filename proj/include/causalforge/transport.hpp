#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "causalforge/hypergraph.hpp"
#include "causalforge/rational.hpp"

namespace causalforge {

// Discrete measures, exact 1-Wasserstein distances via min-cost flow, and the
// Ollivier-Ricci curvature family (vertex pairs, directed hyperedges,
// transport-based sectional/Ricci estimates).

struct DiscreteMeasure {
    std::vector<VertexId> support; // sorted, distinct
    std::vector<Rational> mass;    // parallel, sums to exactly 1

    static DiscreteMeasure point(VertexId v);
    static DiscreteMeasure uniform(const std::vector<VertexId>& support);
    void validate() const;
};

// uniform mass on the undirected neighbors of x; delta_x when isolated
DiscreteMeasure uniform_ball_measure(const Hypergraph& h, VertexId x);

struct Coupling {
    std::map<std::pair<VertexId, VertexId>, Rational> entries;
};

struct TransportResult {
    Rational cost;
    Coupling plan;
    bool exact = true; // false when solved on the float fast path
};

enum class Metric { Undirected, Directed };

// Exact optimum of sum d(u,v) * eps(u,v) over couplings of mu and nu, with
// hyperedge-hop distances. Instances with combined support above
// kFastPathThreshold run in floating point (costs still exact integers).
// Throws InfeasibleError when required support points cannot reach each
// other.
TransportResult wasserstein1(const Hypergraph& h, const DiscreteMeasure& mu,
                             const DiscreteMeasure& nu, Metric metric = Metric::Undirected);

constexpr std::size_t kFastPathThreshold = 64;

// kappa(p, q) = 1 - W1(m_p, m_q) / d(p, q) with uniform ball measures
Rational ollivier_ricci_pair(const Hypergraph& h, VertexId p, VertexId q);

// directed hyperedge curvature kappa(e) = 1 - W(mu_Ain, mu_Bout); the edge is
// split tail = first vertex, head = rest, and measures follow the in/out
// degree casework with weights 1/(n d_in |tail|) and 1/(m d_out |head|)
Rational ollivier_ricci_hyperedge(const Hypergraph& h, EdgeId e);

// measures built by the casework, exposed for the oracle tests
std::pair<DiscreteMeasure, DiscreteMeasure> hyperedge_measures(const Hypergraph& h, EdgeId e);

struct TransportMap {
    bool bijective = false;
    std::vector<std::pair<VertexId, VertexId>> matching; // only when bijective
    Coupling plan;
};

// optimal coupling of the unit spheres at x and y, read as the discrete
// parallel transport of directions
TransportMap parallel_transport(const Hypergraph& h, VertexId x, VertexId y);

// K = 2 (1 - dbar/delta) with unit steps, where dbar is the mass-weighted
// distance from w's unit step to its transported image
Rational sectional_curvature(const Hypergraph& h, VertexId x, VertexId v_dir, VertexId w_dir);

// mean sectional curvature over all directions w != v at x
Rational ricci_direction(const Hypergraph& h, VertexId x, VertexId v_dir);

} // namespace causalforge
