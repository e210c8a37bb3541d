#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "causalforge/canonical.hpp"
#include "causalforge/hypergraph.hpp"
#include "causalforge/rational.hpp"
#include "causalforge/rewrite.hpp"
#include "causalforge/strings.hpp"

namespace causalforge {

// Causal graphs over updating events, their order combinatorics (I/J cones,
// Cauchy developments), layered foliations, and discrete Lorentz boosts.

// engine-neutral event record: token ids are hyperedge ids or string token
// ids depending on the producing engine
struct EventRecord {
    EventId id = 0;
    int rule_index = 0;
    std::vector<std::uint32_t> consumed;
    std::vector<std::uint32_t> created;
    int step = 0;
};

std::vector<EventRecord> event_records(const EvolutionTrace& trace);
std::vector<EventRecord> event_records(const StringEvolution& evolution);

class CausalGraph {
public:
    // edge A -> B iff created(A) and consumed(B) overlap; optionally
    // transitively reduced. Throws ValidationError on corrupt records.
    static CausalGraph build(const std::vector<EventRecord>& records,
                             bool transitive_reduce = false);
    static CausalGraph from_edges(const std::vector<EventId>& events,
                                  const std::vector<std::pair<EventId, EventId>>& edges);

    const std::vector<EventId>& events() const { return events_; }
    const std::set<std::pair<EventId, EventId>>& edges() const { return edges_; }
    bool has_event(EventId x) const;
    std::size_t size() const { return events_.size(); }

    const std::vector<EventId>& successors(EventId x) const;
    const std::vector<EventId>& predecessors(EventId x) const;
    std::vector<EventId> sources() const;

    // strict forward/backward reachability (>= 1 edge)
    std::set<EventId> future(EventId x) const;
    std::set<EventId> past(EventId x) const;

    CanonicalKey canonical_key_dag() const;
    std::string to_dot(const struct EventCoordinates* coords = nullptr) const;

private:
    std::vector<EventId> events_;
    std::set<std::pair<EventId, EventId>> edges_;
    std::map<EventId, std::vector<EventId>> succ_, pred_;

    void index_edges();
};

// I+/I-: strictly reachable events; J+/J-: reflexive closures
struct LightCones {
    std::set<EventId> i_plus, i_minus, j_plus, j_minus;
};

LightCones futures_pasts(const CausalGraph& cg, EventId x);
std::set<EventId> chronological_future(const CausalGraph& cg, const std::set<EventId>& s);
std::set<EventId> chronological_past(const CausalGraph& cg, const std::set<EventId>& s);

// D+(S): events whose every maximal past-directed causal path meets S
struct CauchyDevelopment {
    std::set<EventId> future_dev, past_dev, full;
};

CauchyDevelopment cauchy_development(const CausalGraph& cg, const std::set<EventId>& s);
bool achronal(const CausalGraph& cg, const std::set<EventId>& s);
bool is_cauchy_surface(const CausalGraph& cg, const std::set<EventId>& s);

// layered embedding: t = longest path from sources, x = centered in-layer
// rank (doubled so coordinates stay integral)
struct EventPoint {
    std::int64_t t = 0;
    std::vector<std::int64_t> x;
};

struct EventCoordinates {
    std::map<EventId, EventPoint> points;
};

struct Foliation {
    std::vector<std::vector<EventId>> slices; // each sorted

    std::string to_json() const;
};

std::pair<Foliation, EventCoordinates> foliate_standard(const CausalGraph& cg);

// every causal edge inside one slice or pointing backwards is a violation
bool foliation_valid(const CausalGraph& cg, const Foliation& f,
                     std::pair<EventId, EventId>* violation = nullptr);

enum class IntervalClass { Timelike, Lightlike, Spacelike };
std::string interval_class_name(IntervalClass c);

// sign of ||p - q|| = |dx|^2 - dt^2
IntervalClass classify_interval(const EventPoint& p, const EventPoint& q);

// v = tanh(rho) in [0,1); u an integer unit direction vector
struct Rapidity {
    Rational v;
    std::vector<std::int64_t> u;
};

struct BoostedPointQ {
    Rational t;
    std::vector<Rational> x;
};

struct BoostedPointD {
    double t = 0;
    std::vector<double> x;
};

struct BoostedCoordinates {
    bool exact = true; // rationalized (Pythagorean v) or double fallback
    std::map<EventId, BoostedPointQ> exact_points;
    std::map<EventId, BoostedPointD> approx_points;
    static constexpr double kTieTolerance = 1e-9;
};

// t' = cosh(rho) t - sinh(rho) x.u, exact when v = a/c with c^2 - a^2 a
// perfect square; v >= 1 is a DomainError
BoostedCoordinates boost(const EventCoordinates& coords, const Rapidity& r);

struct RefoliationResult {
    bool accepted = false;
    Foliation foliation;
    std::vector<EventId> induced_order;
    std::optional<std::pair<EventId, EventId>> violation;
};

// groups events into slices of equal boosted time (floor-grouped after
// rescaling the minimum gap to 1); accepted iff slices are achronal and the
// slice order extends the causal order
RefoliationResult refoliate(const CausalGraph& cg, const BoostedCoordinates& boosted);

} // namespace causalforge
