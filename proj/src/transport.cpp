#include "causalforge/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "causalforge/errors.hpp"

namespace causalforge {

namespace {

Rational rational_from_double(double x) {
    if (!std::isfinite(x)) throw DomainError("non-finite transport mass");
    // exact binary expansion
    int exp = 0;
    double mant = std::frexp(x, &exp);
    long long scaled = static_cast<long long>(std::ldexp(mant, 53));
    exp -= 53;
    Rational q(scaled);
    BigInt two = 2;
    if (exp > 0) {
        q *= Rational(boost::multiprecision::pow(two, static_cast<unsigned>(exp)));
    } else if (exp < 0) {
        q /= Rational(boost::multiprecision::pow(two, static_cast<unsigned>(-exp)));
    }
    return q;
}

// transportation problem on a sparse bipartite graph, successive shortest
// augmenting paths with potentials; exact when MassT is Rational
template <typename MassT>
struct Transportation {
    int m = 0, n = 0;
    std::vector<MassT> supply, demand;
    // arc costs: -1 marks a missing (unreachable) arc
    std::vector<std::vector<long long>> cost;
    std::vector<std::vector<MassT>> flow;

    static constexpr long long kInf = std::numeric_limits<long long>::max() / 4;

    bool is_zero(const MassT& x) const {
        if constexpr (std::is_same_v<MassT, double>) {
            return std::abs(x) < 1e-15;
        } else {
            return x == 0;
        }
    }

    // returns total cost as (integer cost units weighted by mass)
    MassT solve() {
        flow.assign(m, std::vector<MassT>(n, MassT(0)));
        std::vector<long long> pot_src(m, 0), pot_snk(n, 0);
        MassT total_cost(0);

        MassT remaining(0);
        for (const MassT& s : supply) remaining += s;

        int guard = 0;
        const int guard_cap = 4 * (m + n) * (m + n) + 64;
        while (!is_zero(remaining)) {
            if (++guard > guard_cap) throw Error("transport solver failed to converge");
            // Dijkstra over sources+sinks with reduced costs
            std::vector<long long> dist_src(m, kInf), dist_snk(n, kInf);
            std::vector<int> par_snk(n, -1);     // sink's parent source
            std::vector<int> par_src(m, -1);     // source's parent sink (backward arc)
            std::vector<bool> done_src(m, false), done_snk(n, false);
            for (int i = 0; i < m; ++i) {
                if (!is_zero(supply[i])) dist_src[i] = 0;
            }
            for (;;) {
                // pick the closest unfinished node on either side
                long long best = kInf;
                int side = -1, idx = -1;
                for (int i = 0; i < m; ++i) {
                    if (!done_src[i] && dist_src[i] < best) { best = dist_src[i]; side = 0; idx = i; }
                }
                for (int j = 0; j < n; ++j) {
                    if (!done_snk[j] && dist_snk[j] < best) { best = dist_snk[j]; side = 1; idx = j; }
                }
                if (side < 0) break;
                if (side == 0) {
                    done_src[idx] = true;
                    for (int j = 0; j < n; ++j) {
                        if (cost[idx][j] < 0) continue;
                        long long rc = cost[idx][j] + pot_src[idx] - pot_snk[j];
                        if (dist_src[idx] + rc < dist_snk[j]) {
                            dist_snk[j] = dist_src[idx] + rc;
                            par_snk[j] = idx;
                        }
                    }
                } else {
                    done_snk[idx] = true;
                    for (int i = 0; i < m; ++i) {
                        if (cost[i][idx] < 0 || is_zero(flow[i][idx])) continue;
                        long long rc = -cost[i][idx] - pot_src[i] + pot_snk[idx];
                        if (dist_snk[idx] + rc < dist_src[i]) {
                            dist_src[i] = dist_snk[idx] + rc;
                            par_src[i] = idx;
                        }
                    }
                }
            }
            // nearest sink with remaining demand
            int target = -1;
            long long best = kInf;
            for (int j = 0; j < n; ++j) {
                if (!is_zero(demand[j]) && dist_snk[j] < best) { best = dist_snk[j]; target = j; }
            }
            if (target < 0) throw InfeasibleError("supports are not mutually reachable");

            // bottleneck along the alternating path
            MassT push = demand[target];
            for (int j = target;;) {
                int i = par_snk[j];
                if (push > supply[i] && par_src[i] < 0) push = supply[i];
                if (par_src[i] < 0) break;
                j = par_src[i];
                if (push > flow[i][j]) push = flow[i][j];
            }
            for (int j = target;;) {
                int i = par_snk[j];
                flow[i][j] += push;
                if (par_src[i] < 0) {
                    supply[i] -= push;
                    break;
                }
                flow[i][par_src[i]] -= push;
                j = par_src[i];
            }
            demand[target] -= push;
            remaining -= push;

            // potential update
            for (int i = 0; i < m; ++i) {
                if (dist_src[i] < kInf) pot_src[i] += dist_src[i];
            }
            for (int j = 0; j < n; ++j) {
                if (dist_snk[j] < kInf) pot_snk[j] += dist_snk[j];
            }
        }
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < n; ++j) {
                if (!is_zero(flow[i][j])) total_cost += flow[i][j] * MassT(cost[i][j]);
            }
        }
        return total_cost;
    }
};

std::vector<std::vector<long long>> distance_matrix(const Hypergraph& h,
                                                    const std::vector<VertexId>& from,
                                                    const std::vector<VertexId>& to,
                                                    Metric metric) {
    std::vector<std::vector<long long>> d(from.size(), std::vector<long long>(to.size(), -1));
    for (std::size_t i = 0; i < from.size(); ++i) {
        auto dist = h.distances_from(from[i], metric == Metric::Directed);
        bool any = false;
        for (std::size_t j = 0; j < to.size(); ++j) {
            auto it = dist.find(to[j]);
            if (it != dist.end()) {
                d[i][j] = it->second;
                any = true;
            }
        }
        if (!any) throw InfeasibleError("support vertex cannot reach the target measure");
    }
    return d;
}

} // namespace

DiscreteMeasure DiscreteMeasure::point(VertexId v) { return {{v}, {Rational(1)}}; }

DiscreteMeasure DiscreteMeasure::uniform(const std::vector<VertexId>& support) {
    if (support.empty()) throw InputError("uniform measure needs non-empty support");
    DiscreteMeasure m;
    m.support = support;
    std::sort(m.support.begin(), m.support.end());
    m.support.erase(std::unique(m.support.begin(), m.support.end()), m.support.end());
    if (m.support.size() != support.size()) throw InputError("measure support must be distinct");
    m.mass.assign(m.support.size(), Rational(1) / Rational(static_cast<int>(m.support.size())));
    return m;
}

void DiscreteMeasure::validate() const {
    if (support.size() != mass.size()) throw InputError("measure support/mass length mismatch");
    Rational total(0);
    for (const Rational& q : mass) {
        if (q < 0) throw InputError("measure mass must be non-negative");
        total += q;
    }
    if (total != 1) throw InputError("measure masses must sum to 1, got " + rational_str(total));
    for (std::size_t i = 1; i < support.size(); ++i) {
        if (support[i - 1] >= support[i]) throw InputError("measure support must be sorted distinct");
    }
}

DiscreteMeasure uniform_ball_measure(const Hypergraph& h, VertexId x) {
    if (!h.has_vertex(x)) throw InputError("unknown vertex " + std::to_string(x));
    auto nbrs = h.neighbors(x);
    if (nbrs.empty()) return DiscreteMeasure::point(x);
    return DiscreteMeasure::uniform(nbrs);
}

TransportResult wasserstein1(const Hypergraph& h, const DiscreteMeasure& mu,
                             const DiscreteMeasure& nu, Metric metric) {
    mu.validate();
    nu.validate();
    auto costs = distance_matrix(h, mu.support, nu.support, metric);

    TransportResult result;
    if (mu.support.size() + nu.support.size() <= kFastPathThreshold) {
        Transportation<Rational> solver;
        solver.m = static_cast<int>(mu.support.size());
        solver.n = static_cast<int>(nu.support.size());
        solver.supply = mu.mass;
        solver.demand = nu.mass;
        solver.cost = costs;
        result.cost = solver.solve();
        result.exact = true;
        for (int i = 0; i < solver.m; ++i) {
            for (int j = 0; j < solver.n; ++j) {
                if (solver.flow[i][j] != 0) {
                    result.plan.entries[{mu.support[i], nu.support[j]}] = solver.flow[i][j];
                }
            }
        }
    } else {
        Transportation<double> solver;
        solver.m = static_cast<int>(mu.support.size());
        solver.n = static_cast<int>(nu.support.size());
        for (const Rational& q : mu.mass) solver.supply.push_back(to_double(q));
        for (const Rational& q : nu.mass) solver.demand.push_back(to_double(q));
        solver.cost = costs;
        double cost = solver.solve();
        result.cost = rational_from_double(cost);
        result.exact = false;
        for (int i = 0; i < solver.m; ++i) {
            for (int j = 0; j < solver.n; ++j) {
                if (std::abs(solver.flow[i][j]) > 1e-15) {
                    result.plan.entries[{mu.support[i], nu.support[j]}] =
                        rational_from_double(solver.flow[i][j]);
                }
            }
        }
    }
    return result;
}

Rational ollivier_ricci_pair(const Hypergraph& h, VertexId p, VertexId q) {
    if (p == q) throw DomainError("pair curvature needs distinct points");
    auto d = h.distance(p, q, /*directed=*/false);
    if (!d) throw InfeasibleError("vertices are not connected");
    auto w = wasserstein1(h, uniform_ball_measure(h, p), uniform_ball_measure(h, q));
    return 1 - w.cost / Rational(*d);
}

namespace {

bool in_head(const Hyperedge& e, VertexId v) {
    for (std::size_t i = 1; i < e.vertices.size(); ++i) {
        if (e.vertices[i] == v) return true;
    }
    return false;
}

bool in_tail(const Hyperedge& e, VertexId v) { return e.vertices.front() == v; }

DiscreteMeasure combine(std::map<VertexId, Rational>& acc) {
    DiscreteMeasure m;
    for (auto& [v, q] : acc) {
        if (q == 0) continue;
        m.support.push_back(v);
        m.mass.push_back(q);
    }
    m.validate();
    return m;
}

} // namespace

std::pair<DiscreteMeasure, DiscreteMeasure> hyperedge_measures(const Hypergraph& h, EdgeId id) {
    const Hyperedge* e = h.find_edge(id);
    if (e == nullptr) throw InputError("unknown edge " + std::to_string(id));
    if (e->vertices.size() < 2) throw DomainError("directed hyperedge needs a nonempty head");
    auto tail = edge_tail(*e);
    auto head = edge_head(*e);
    const Rational n(static_cast<int>(tail.size()));
    const Rational m(static_cast<int>(head.size()));

    std::map<VertexId, Rational> mu_in, mu_out;
    for (VertexId x : tail) {
        // incoming hyperedges: those whose head contains x
        std::vector<const Hyperedge*> incoming;
        for (EdgeId eid : h.edges_at(x)) {
            const Hyperedge* f = h.find_edge(eid);
            if (in_head(*f, x)) incoming.push_back(f);
        }
        if (incoming.empty()) {
            mu_in[x] += 1 / n;
            continue;
        }
        const Rational d_in(static_cast<int>(incoming.size()));
        for (const Hyperedge* f : incoming) {
            auto f_tail = edge_tail(*f);
            for (VertexId z : f_tail) {
                if (z == x) throw DomainError("degenerate hyperedge: vertex feeds itself");
                mu_in[z] += 1 / (n * d_in * Rational(static_cast<int>(f_tail.size())));
            }
        }
    }
    for (VertexId y : head) {
        // outgoing hyperedges: those whose tail contains y
        std::vector<const Hyperedge*> outgoing;
        for (EdgeId eid : h.edges_at(y)) {
            const Hyperedge* f = h.find_edge(eid);
            if (in_tail(*f, y)) outgoing.push_back(f);
        }
        if (outgoing.empty()) {
            mu_out[y] += 1 / m;
            continue;
        }
        const Rational d_out(static_cast<int>(outgoing.size()));
        for (const Hyperedge* f : outgoing) {
            auto f_head = edge_head(*f);
            for (VertexId z : f_head) {
                if (z == y) throw DomainError("degenerate hyperedge: vertex feeds itself");
                mu_out[z] += 1 / (m * d_out * Rational(static_cast<int>(f_head.size())));
            }
        }
    }
    return {combine(mu_in), combine(mu_out)};
}

Rational ollivier_ricci_hyperedge(const Hypergraph& h, EdgeId e) {
    auto [mu_in, mu_out] = hyperedge_measures(h, e);
    auto w = wasserstein1(h, mu_in, mu_out, Metric::Directed);
    return 1 - w.cost;
}

TransportMap parallel_transport(const Hypergraph& h, VertexId x, VertexId y) {
    if (!h.has_vertex(x) || !h.has_vertex(y)) throw InputError("unknown vertex");
    auto sx = h.neighbors(x);
    if (x == y) {
        TransportMap out;
        out.bijective = true;
        Rational share = sx.empty() ? Rational(1) : Rational(1) / Rational((int)sx.size());
        for (VertexId v : sx) {
            out.matching.emplace_back(v, v);
            out.plan.entries[{v, v}] = share;
        }
        return out;
    }
    auto sy = h.neighbors(y);
    if (sx.empty() || sy.empty()) throw DomainError("degenerate geometry: empty unit sphere");
    auto w = wasserstein1(h, DiscreteMeasure::uniform(sx), DiscreteMeasure::uniform(sy));

    TransportMap out;
    out.plan = w.plan;
    if (sx.size() == sy.size()) {
        const Rational share = Rational(1) / Rational(static_cast<int>(sx.size()));
        std::map<VertexId, std::vector<std::pair<VertexId, Rational>>> rows;
        for (const auto& [uv, q] : w.plan.entries) rows[uv.first].emplace_back(uv.second, q);
        bool permutation = rows.size() == sx.size();
        for (const auto& [u, row] : rows) {
            permutation &= row.size() == 1 && row[0].second == share;
        }
        if (permutation) {
            out.bijective = true;
            for (const auto& [u, row] : rows) out.matching.emplace_back(u, row[0].first);
        }
    }
    return out;
}

namespace {

// mass-weighted distance travelled by direction w under the sphere coupling;
// reduces to d(w, image(w)) whenever the coupling is a permutation
Rational direction_displacement(const Hypergraph& h, const Coupling& plan, VertexId w,
                                const Rational& row_mass) {
    Rational acc(0);
    for (const auto& [uv, q] : plan.entries) {
        if (uv.first != w || q == 0) continue;
        auto d = h.distance(w, uv.second, /*directed=*/false);
        if (!d) throw InfeasibleError("transported image unreachable");
        acc += q * Rational(*d);
    }
    return acc / row_mass;
}

} // namespace

Rational sectional_curvature(const Hypergraph& h, VertexId x, VertexId v_dir, VertexId w_dir) {
    if (v_dir == w_dir) throw DomainError("sectional curvature needs independent directions");
    auto sx = h.neighbors(x);
    auto is_dir = [&](VertexId d) { return std::binary_search(sx.begin(), sx.end(), d); };
    if (!is_dir(v_dir) || !is_dir(w_dir)) throw InputError("directions must be neighbors of x");
    auto transport = parallel_transport(h, x, v_dir);
    const Rational row_mass = Rational(1) / Rational(static_cast<int>(sx.size()));
    Rational dbar = direction_displacement(h, transport.plan, w_dir, row_mass);
    // delta = d(x, y) = 1 for a unit step
    return 2 * (1 - dbar);
}

Rational ricci_direction(const Hypergraph& h, VertexId x, VertexId v_dir) {
    auto sx = h.neighbors(x);
    if (sx.size() < 2) throw DomainError("ricci direction needs at least two directions");
    if (!std::binary_search(sx.begin(), sx.end(), v_dir)) {
        throw InputError("direction must be a neighbor of x");
    }
    auto transport = parallel_transport(h, x, v_dir);
    const Rational row_mass = Rational(1) / Rational(static_cast<int>(sx.size()));
    Rational acc(0);
    int count = 0;
    for (VertexId w : sx) {
        if (w == v_dir) continue;
        acc += 2 * (1 - direction_displacement(h, transport.plan, w, row_mass));
        ++count;
    }
    return acc / Rational(count);
}

} // namespace causalforge
