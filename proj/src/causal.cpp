#include "causalforge/causal.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include <nlohmann/json.hpp>

#include "causalforge/errors.hpp"

namespace causalforge {

std::vector<EventRecord> event_records(const EvolutionTrace& trace) {
    std::vector<EventRecord> out;
    out.reserve(trace.events.size());
    for (const Event& ev : trace.events) {
        out.push_back({ev.id, ev.rule_index, ev.consumed, ev.created, ev.step});
    }
    return out;
}

std::vector<EventRecord> event_records(const StringEvolution& evolution) {
    std::vector<EventRecord> out;
    out.reserve(evolution.events.size());
    for (const StringEvent& ev : evolution.events) {
        out.push_back({ev.id, ev.rule_index, ev.consumed, ev.created, ev.step});
    }
    return out;
}

void CausalGraph::index_edges() {
    succ_.clear();
    pred_.clear();
    for (EventId e : events_) {
        succ_[e];
        pred_[e];
    }
    for (const auto& [a, b] : edges_) {
        succ_[a].push_back(b);
        pred_[b].push_back(a);
    }
    for (auto& [_, v] : succ_) std::sort(v.begin(), v.end());
    for (auto& [_, v] : pred_) std::sort(v.begin(), v.end());
}

CausalGraph CausalGraph::build(const std::vector<EventRecord>& records, bool transitive_reduce) {
    CausalGraph cg;
    std::map<std::uint32_t, EventId> creator;
    std::set<EventId> seen;
    for (const EventRecord& r : records) {
        if (!seen.insert(r.id).second) throw ValidationError("duplicate event id in trace");
        cg.events_.push_back(r.id);
        std::set<std::uint32_t> consumed(r.consumed.begin(), r.consumed.end());
        for (std::uint32_t t : r.created) {
            if (consumed.count(t)) throw ValidationError("event both consumes and creates a token");
            if (!creator.emplace(t, r.id).second) {
                throw ValidationError("token created twice in trace");
            }
        }
    }
    std::set<std::uint32_t> consumed_once;
    for (const EventRecord& r : records) {
        for (std::uint32_t t : r.consumed) {
            if (!consumed_once.insert(t).second) {
                throw ValidationError("token consumed twice in trace");
            }
            auto it = creator.find(t);
            if (it != creator.end()) {
                if (it->second == r.id) throw ValidationError("event consumes its own output");
                cg.edges_.emplace(it->second, r.id);
            }
        }
    }
    std::sort(cg.events_.begin(), cg.events_.end());
    cg.index_edges();

    if (transitive_reduce) {
        // (a,b) is redundant iff b is reachable from a through some other
        // successor; desk scale, so direct reachability checks are fine
        std::set<std::pair<EventId, EventId>> reduced;
        for (const auto& [a, b] : cg.edges_) {
            bool redundant = false;
            for (EventId c : cg.succ_.at(a)) {
                if (c == b) continue;
                auto fw = cg.future(c);
                if (c == b || fw.count(b)) {
                    redundant = true;
                    break;
                }
            }
            if (!redundant) reduced.emplace(a, b);
        }
        cg.edges_ = std::move(reduced);
        cg.index_edges();
    }
    return cg;
}

CausalGraph CausalGraph::from_edges(const std::vector<EventId>& events,
                                    const std::vector<std::pair<EventId, EventId>>& edges) {
    CausalGraph cg;
    cg.events_ = events;
    std::sort(cg.events_.begin(), cg.events_.end());
    cg.events_.erase(std::unique(cg.events_.begin(), cg.events_.end()), cg.events_.end());
    for (const auto& [a, b] : edges) {
        if (!cg.has_event(a) || !cg.has_event(b)) throw InputError("edge references unknown event");
        cg.edges_.emplace(a, b);
    }
    cg.index_edges();
    // reject cycles up front: every query assumes a DAG
    std::map<EventId, int> indegree;
    for (EventId e : cg.events_) indegree[e] = static_cast<int>(cg.pred_.at(e).size());
    std::deque<EventId> queue;
    for (auto& [e, d] : indegree) {
        if (d == 0) queue.push_back(e);
    }
    std::size_t seen = 0;
    while (!queue.empty()) {
        EventId e = queue.front();
        queue.pop_front();
        ++seen;
        for (EventId s : cg.succ_.at(e)) {
            if (--indegree[s] == 0) queue.push_back(s);
        }
    }
    if (seen != cg.events_.size()) throw ValidationError("causal graph has a cycle");
    return cg;
}

bool CausalGraph::has_event(EventId x) const {
    return std::binary_search(events_.begin(), events_.end(), x);
}

const std::vector<EventId>& CausalGraph::successors(EventId x) const {
    auto it = succ_.find(x);
    if (it == succ_.end()) throw InputError("unknown event " + std::to_string(x));
    return it->second;
}

const std::vector<EventId>& CausalGraph::predecessors(EventId x) const {
    auto it = pred_.find(x);
    if (it == pred_.end()) throw InputError("unknown event " + std::to_string(x));
    return it->second;
}

std::vector<EventId> CausalGraph::sources() const {
    std::vector<EventId> out;
    for (EventId e : events_) {
        if (pred_.at(e).empty()) out.push_back(e);
    }
    return out;
}

namespace {

std::set<EventId> closure(const CausalGraph& cg, EventId x, bool forward) {
    std::set<EventId> out;
    std::deque<EventId> queue{x};
    while (!queue.empty()) {
        EventId e = queue.front();
        queue.pop_front();
        for (EventId n : forward ? cg.successors(e) : cg.predecessors(e)) {
            if (out.insert(n).second) queue.push_back(n);
        }
    }
    return out;
}

} // namespace

std::set<EventId> CausalGraph::future(EventId x) const { return closure(*this, x, true); }
std::set<EventId> CausalGraph::past(EventId x) const { return closure(*this, x, false); }

CanonicalKey CausalGraph::canonical_key_dag() const {
    ColoredDigraph g;
    std::map<EventId, int> node;
    for (EventId e : events_) node[e] = g.add_vertex(0);
    for (const auto& [a, b] : edges_) g.add_edge(node[a], node[b], 0);
    return canonical_key(g);
}

std::string CausalGraph::to_dot(const EventCoordinates* coords) const {
    std::ostringstream out;
    out << "digraph causal {\n  rankdir=TB;\n";
    std::map<std::int64_t, std::vector<EventId>> layers;
    if (coords != nullptr) {
        for (const auto& [e, p] : coords->points) layers[p.t].push_back(e);
    }
    for (EventId e : events_) {
        out << "  e" << e << " [label=\"" << e << "\"];\n";
    }
    for (const auto& [t, evs] : layers) {
        out << "  { rank=same;";
        for (EventId e : evs) out << " e" << e << ";";
        out << " }\n";
    }
    for (const auto& [a, b] : edges_) out << "  e" << a << " -> e" << b << ";\n";
    out << "}\n";
    return out.str();
}

LightCones futures_pasts(const CausalGraph& cg, EventId x) {
    if (!cg.has_event(x)) throw InputError("unknown event " + std::to_string(x));
    LightCones c;
    c.i_plus = cg.future(x);
    c.i_minus = cg.past(x);
    c.j_plus = c.i_plus;
    c.j_plus.insert(x);
    c.j_minus = c.i_minus;
    c.j_minus.insert(x);
    return c;
}

std::set<EventId> chronological_future(const CausalGraph& cg, const std::set<EventId>& s) {
    std::set<EventId> out;
    for (EventId x : s) {
        auto f = cg.future(x);
        out.insert(f.begin(), f.end());
    }
    return out;
}

std::set<EventId> chronological_past(const CausalGraph& cg, const std::set<EventId>& s) {
    std::set<EventId> out;
    for (EventId x : s) {
        auto p = cg.past(x);
        out.insert(p.begin(), p.end());
    }
    return out;
}

namespace {

std::vector<EventId> topo_order(const CausalGraph& cg) {
    std::map<EventId, int> indegree;
    for (EventId e : cg.events()) indegree[e] = static_cast<int>(cg.predecessors(e).size());
    std::deque<EventId> queue;
    for (auto& [e, d] : indegree) {
        if (d == 0) queue.push_back(e);
    }
    std::vector<EventId> order;
    while (!queue.empty()) {
        EventId e = queue.front();
        queue.pop_front();
        order.push_back(e);
        for (EventId s : cg.successors(e)) {
            if (--indegree[s] == 0) queue.push_back(s);
        }
    }
    if (order.size() != cg.size()) throw ValidationError("causal graph has a cycle");
    return order;
}

} // namespace

CauchyDevelopment cauchy_development(const CausalGraph& cg, const std::set<EventId>& s) {
    for (EventId x : s) {
        if (!cg.has_event(x)) throw InputError("development set references unknown event");
    }
    CauchyDevelopment d;
    auto order = topo_order(cg);
    // x in D+(S) iff x in S, or x has predecessors and all lie in D+(S)
    for (EventId x : order) {
        if (s.count(x)) {
            d.future_dev.insert(x);
            continue;
        }
        const auto& preds = cg.predecessors(x);
        if (preds.empty()) continue;
        bool all = std::all_of(preds.begin(), preds.end(),
                               [&](EventId p) { return d.future_dev.count(p) > 0; });
        if (all) d.future_dev.insert(x);
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        EventId x = *it;
        if (s.count(x)) {
            d.past_dev.insert(x);
            continue;
        }
        const auto& succs = cg.successors(x);
        if (succs.empty()) continue;
        bool all = std::all_of(succs.begin(), succs.end(),
                               [&](EventId n) { return d.past_dev.count(n) > 0; });
        if (all) d.past_dev.insert(x);
    }
    d.full = d.future_dev;
    d.full.insert(d.past_dev.begin(), d.past_dev.end());
    return d;
}

bool achronal(const CausalGraph& cg, const std::set<EventId>& s) {
    auto future = chronological_future(cg, s);
    for (EventId x : s) {
        if (future.count(x)) return false;
    }
    return true;
}

bool is_cauchy_surface(const CausalGraph& cg, const std::set<EventId>& s) {
    if (!achronal(cg, s)) return false;
    return cauchy_development(cg, s).full.size() == cg.size();
}

std::pair<Foliation, EventCoordinates> foliate_standard(const CausalGraph& cg) {
    auto order = topo_order(cg); // throws on cycles
    std::map<EventId, std::int64_t> layer;
    std::int64_t max_layer = 0;
    for (EventId e : order) {
        std::int64_t t = 0;
        for (EventId p : cg.predecessors(e)) t = std::max(t, layer.at(p) + 1);
        layer[e] = t;
        max_layer = std::max(max_layer, t);
    }
    Foliation f;
    f.slices.assign(static_cast<std::size_t>(cg.size() ? max_layer + 1 : 0), {});
    for (EventId e : cg.events()) f.slices[static_cast<std::size_t>(layer[e])].push_back(e);
    EventCoordinates coords;
    for (auto& slice : f.slices) {
        std::sort(slice.begin(), slice.end());
        const std::int64_t k = static_cast<std::int64_t>(slice.size());
        for (std::int64_t i = 0; i < k; ++i) {
            // centered rank, doubled to stay integral: 2i - (k-1)
            coords.points[slice[static_cast<std::size_t>(i)]] =
                EventPoint{layer[slice[static_cast<std::size_t>(i)]], {2 * i - (k - 1)}};
        }
    }
    return {std::move(f), std::move(coords)};
}

bool foliation_valid(const CausalGraph& cg, const Foliation& f,
                     std::pair<EventId, EventId>* violation) {
    std::map<EventId, std::size_t> slice_of;
    for (std::size_t i = 0; i < f.slices.size(); ++i) {
        for (EventId e : f.slices[i]) slice_of[e] = i;
    }
    for (EventId e : cg.events()) {
        if (!slice_of.count(e)) {
            if (violation) *violation = {e, e};
            return false;
        }
    }
    for (const auto& [a, b] : cg.edges()) {
        if (slice_of[a] >= slice_of[b]) {
            if (violation) *violation = {a, b};
            return false;
        }
    }
    return true;
}

std::string Foliation::to_json() const {
    nlohmann::json j;
    j["slices"] = nlohmann::json::array();
    for (const auto& slice : slices) j["slices"].push_back(slice);
    return j.dump();
}

std::string interval_class_name(IntervalClass c) {
    switch (c) {
        case IntervalClass::Timelike: return "timelike";
        case IntervalClass::Lightlike: return "lightlike";
        case IntervalClass::Spacelike: return "spacelike";
    }
    return "?";
}

IntervalClass classify_interval(const EventPoint& p, const EventPoint& q) {
    if (p.x.size() != q.x.size()) throw InputError("coordinate dimensions differ");
    std::int64_t dt = p.t - q.t;
    std::int64_t norm = -dt * dt;
    for (std::size_t i = 0; i < p.x.size(); ++i) {
        std::int64_t dx = p.x[i] - q.x[i];
        norm += dx * dx;
    }
    if (norm < 0) return IntervalClass::Timelike;
    if (norm == 0) return IntervalClass::Lightlike;
    return IntervalClass::Spacelike;
}

BoostedCoordinates boost(const EventCoordinates& coords, const Rapidity& r) {
    if (r.v < 0 || r.v >= 1) {
        throw DomainError("boost velocity must satisfy 0 <= v < 1, got " + rational_str(r.v));
    }
    std::int64_t norm_u = 0;
    for (std::int64_t c : r.u) norm_u += c * c;
    if (norm_u != 1) throw DomainError("direction u must be an integer unit vector");

    // v = a/c; Pythagorean when c^2 - a^2 = b^2: cosh = c/b, sinh = a/b
    const BigInt a = numerator(r.v);
    const BigInt c = denominator(r.v);
    auto b = exact_isqrt(c * c - a * a);

    BoostedCoordinates out;
    if (b && *b != 0) {
        out.exact = true;
        Rational ch(c, *b), sh(a, *b);
        for (const auto& [e, p] : coords.points) {
            if (p.x.size() != r.u.size()) throw InputError("coordinate/direction dimensions differ");
            Rational xu = 0;
            for (std::size_t i = 0; i < p.x.size(); ++i) xu += Rational(p.x[i]) * r.u[i];
            BoostedPointQ bp;
            bp.t = ch * p.t - sh * xu;
            Rational shift = (ch - 1) * xu - sh * p.t;
            for (std::size_t i = 0; i < p.x.size(); ++i) {
                bp.x.push_back(Rational(p.x[i]) + shift * r.u[i]);
            }
            out.exact_points.emplace(e, std::move(bp));
        }
    } else {
        out.exact = false;
        const double vd = to_double(r.v);
        const double ch = 1.0 / std::sqrt(1.0 - vd * vd);
        const double sh = vd * ch;
        for (const auto& [e, p] : coords.points) {
            if (p.x.size() != r.u.size()) throw InputError("coordinate/direction dimensions differ");
            double xu = 0;
            for (std::size_t i = 0; i < p.x.size(); ++i) {
                xu += static_cast<double>(p.x[i]) * static_cast<double>(r.u[i]);
            }
            BoostedPointD bp;
            bp.t = ch * static_cast<double>(p.t) - sh * xu;
            double shift = (ch - 1.0) * xu - sh * static_cast<double>(p.t);
            for (std::size_t i = 0; i < p.x.size(); ++i) {
                bp.x.push_back(static_cast<double>(p.x[i]) + shift * static_cast<double>(r.u[i]));
            }
            out.approx_points.emplace(e, std::move(bp));
        }
    }
    return out;
}

RefoliationResult refoliate(const CausalGraph& cg, const BoostedCoordinates& boosted) {
    RefoliationResult result;
    std::vector<std::pair<EventId, Rational>> times; // exact or rationalized double
    if (boosted.exact) {
        for (EventId e : cg.events()) {
            auto it = boosted.exact_points.find(e);
            if (it == boosted.exact_points.end()) {
                throw InputError("boosted coordinates missing event " + std::to_string(e));
            }
            times.emplace_back(e, it->second.t);
        }
    } else {
        for (EventId e : cg.events()) {
            auto it = boosted.approx_points.find(e);
            if (it == boosted.approx_points.end()) {
                throw InputError("boosted coordinates missing event " + std::to_string(e));
            }
            // snap to the tie tolerance, then treat exactly
            double snapped = std::round(it->second.t / BoostedCoordinates::kTieTolerance);
            times.emplace_back(e, Rational(BigInt(static_cast<long long>(snapped))));
        }
    }
    if (times.empty()) {
        result.accepted = true;
        return result;
    }

    // rescale so the minimum positive gap maps to 1, then group by floor
    std::vector<Rational> values;
    for (const auto& [_, t] : times) values.push_back(t);
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    Rational min_gap = 0;
    for (std::size_t i = 1; i < values.size(); ++i) {
        Rational gap = values[i] - values[i - 1];
        if (min_gap == 0 || gap < min_gap) min_gap = gap;
    }
    if (min_gap == 0) min_gap = 1; // all events share one time

    std::map<BigInt, std::vector<EventId>> groups;
    for (const auto& [e, t] : times) {
        groups[rational_floor((t - values.front()) / min_gap)].push_back(e);
    }
    for (auto& [_, evs] : groups) {
        std::sort(evs.begin(), evs.end());
        result.foliation.slices.push_back(evs);
    }

    std::pair<EventId, EventId> violation;
    if (!foliation_valid(cg, result.foliation, &violation)) {
        result.accepted = false;
        result.violation = violation;
        return result;
    }
    result.accepted = true;
    for (const auto& slice : result.foliation.slices) {
        for (EventId e : slice) result.induced_order.push_back(e);
    }
    return result;
}

} // namespace causalforge
