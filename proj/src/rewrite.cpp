#include "causalforge/rewrite.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "causalforge/errors.hpp"

namespace causalforge {

std::vector<PatternVar> Pattern::variables() const {
    std::set<PatternVar> vars;
    for (const auto& ep : edge_patterns) vars.insert(ep.begin(), ep.end());
    return {vars.begin(), vars.end()};
}

Rule Rule::make(Pattern lhs, Pattern rhs, std::string text) {
    if (lhs.edge_patterns.empty()) throw InputError("rule lhs must be non-empty");
    Rule r{std::move(lhs), std::move(rhs), {}, std::move(text)};
    auto lhs_vars = r.lhs.variables();
    for (PatternVar v : r.rhs.variables()) {
        if (!std::binary_search(lhs_vars.begin(), lhs_vars.end(), v)) r.fresh_vars.push_back(v);
    }
    return r;
}

VertexId Match::bound(PatternVar var) const {
    for (const auto& [pv, vx] : binding) {
        if (pv == var) return vx;
    }
    throw InputError("unbound pattern variable");
}

std::vector<EdgeId> Match::sorted_edges() const {
    auto out = edge_ids;
    std::sort(out.begin(), out.end());
    return out;
}

UpdateScheme parse_scheme(const std::string& name) {
    if (name == "sequential") return UpdateScheme::Sequential;
    if (name == "parallel") return UpdateScheme::Parallel;
    if (name == "random") return UpdateScheme::Random;
    throw InputError("unknown update scheme: " + name);
}

std::string scheme_name(UpdateScheme s) {
    switch (s) {
        case UpdateScheme::Sequential: return "sequential";
        case UpdateScheme::Parallel: return "parallel";
        case UpdateScheme::Random: return "random";
    }
    return "?";
}

namespace {

struct Matcher {
    const Hypergraph& h;
    const Rule& rule;
    bool injective;
    std::map<PatternVar, VertexId> binding;
    std::map<VertexId, int> bound_count;
    std::vector<EdgeId> chosen;
    std::set<EdgeId> used;
    std::vector<Match> results;

    void run() { extend(0); }

    void extend(std::size_t k) {
        if (k == rule.lhs.edge_patterns.size()) {
            Match m;
            m.binding.assign(binding.begin(), binding.end());
            m.edge_ids = chosen;
            results.push_back(std::move(m));
            return;
        }
        const auto& pat = rule.lhs.edge_patterns[k];
        for (const Hyperedge& e : h.edges()) {
            if (used.count(e.id) || e.vertices.size() != pat.size()) continue;
            std::vector<PatternVar> newly;
            bool ok = true;
            for (std::size_t i = 0; i < pat.size() && ok; ++i) {
                PatternVar var = pat[i];
                VertexId vert = e.vertices[i];
                auto it = binding.find(var);
                if (it != binding.end()) {
                    ok = it->second == vert;
                } else if (injective && bound_count.count(vert)) {
                    ok = false;
                } else {
                    binding[var] = vert;
                    ++bound_count[vert];
                    newly.push_back(var);
                }
            }
            if (ok) {
                used.insert(e.id);
                chosen.push_back(e.id);
                extend(k + 1);
                chosen.pop_back();
                used.erase(e.id);
            }
            for (auto it = newly.rbegin(); it != newly.rend(); ++it) {
                VertexId vert = binding[*it];
                if (--bound_count[vert] == 0) bound_count.erase(vert);
                binding.erase(*it);
            }
        }
    }
};

std::vector<VertexId> binding_values(const Match& m) {
    std::vector<VertexId> vals;
    vals.reserve(m.binding.size());
    for (const auto& [_, v] : m.binding) vals.push_back(v);
    return vals;
}

} // namespace

std::vector<Match> find_matches(const Hypergraph& h, const Rule& rule, bool injective_vars) {
    Matcher m{h, rule, injective_vars};
    m.run();
    std::sort(m.results.begin(), m.results.end(), [](const Match& a, const Match& b) {
        if (a.edge_ids != b.edge_ids) return a.edge_ids < b.edge_ids;
        return binding_values(a) < binding_values(b);
    });
    return m.results;
}

std::vector<std::pair<int, Match>> find_all_matches(const Hypergraph& h,
                                                    const std::vector<Rule>& rules,
                                                    bool injective_vars) {
    std::vector<std::pair<int, Match>> all;
    for (int i = 0; i < static_cast<int>(rules.size()); ++i) {
        for (Match& m : find_matches(h, rules[i], injective_vars)) {
            all.emplace_back(i, std::move(m));
        }
    }
    std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
        auto ka = a.second.sorted_edges();
        auto kb = b.second.sorted_edges();
        if (ka != kb) return ka < kb;
        if (a.first != b.first) return a.first < b.first;
        return binding_values(a.second) < binding_values(b.second);
    });
    return all;
}

std::pair<Hypergraph, Event> apply_event(const Hypergraph& h, const Rule& rule, const Match& m,
                                         EventId event_id, int rule_index, int step) {
    if (m.edge_ids.size() != rule.lhs.edge_patterns.size()) {
        throw ConflictError("match does not cover the rule lhs");
    }
    for (std::size_t k = 0; k < m.edge_ids.size(); ++k) {
        const Hyperedge* e = h.find_edge(m.edge_ids[k]);
        if (e == nullptr) {
            throw ConflictError("stale match: edge " + std::to_string(m.edge_ids[k]) +
                                " no longer present");
        }
        const auto& pat = rule.lhs.edge_patterns[k];
        if (e->vertices.size() != pat.size()) throw ConflictError("match arity mismatch");
        for (std::size_t i = 0; i < pat.size(); ++i) {
            if (m.bound(pat[i]) != e->vertices[i]) {
                throw ConflictError("binding does not instantiate the lhs");
            }
        }
    }

    Hypergraph out = h;
    for (EdgeId id : m.edge_ids) out.remove_edge(id);

    std::map<PatternVar, VertexId> binding(m.binding.begin(), m.binding.end());
    Event ev;
    ev.id = event_id;
    ev.rule_index = rule_index;
    ev.step = step;
    ev.consumed = m.sorted_edges();
    for (const auto& ep : rule.rhs.edge_patterns) {
        std::vector<VertexId> vs;
        vs.reserve(ep.size());
        for (PatternVar var : ep) {
            auto it = binding.find(var);
            if (it == binding.end()) it = binding.emplace(var, out.fresh_vertex()).first;
            vs.push_back(it->second);
        }
        ev.created.push_back(out.add_edge(std::move(vs), event_id));
    }
    std::sort(ev.created.begin(), ev.created.end());
    return {std::move(out), std::move(ev)};
}

EvolutionTrace evolve(const Hypergraph& init, const std::vector<Rule>& rules, UpdateScheme scheme,
                      int steps, std::uint64_t seed) {
    if (steps < 0) throw InputError("steps must be >= 0");
    EvolutionTrace trace;
    trace.initial = init;
    trace.steps_requested = steps;
    trace.ledger = init.edges();

    Hypergraph h = init;
    std::mt19937_64 rng(seed);
    EventId next_id = 0;
    for (int step = 0; step < steps; ++step) {
        auto matches = find_all_matches(h, rules);
        if (matches.empty()) {
            trace.halted_early = true;
            break;
        }
        std::vector<std::pair<int, Match>> selected;
        if (scheme == UpdateScheme::Parallel) {
            std::set<EdgeId> taken;
            for (auto& rm : matches) {
                bool overlap = false;
                for (EdgeId id : rm.second.edge_ids) overlap |= taken.count(id) > 0;
                if (overlap) continue;
                taken.insert(rm.second.edge_ids.begin(), rm.second.edge_ids.end());
                selected.push_back(std::move(rm));
            }
        } else if (scheme == UpdateScheme::Random) {
            selected.push_back(matches[rng() % matches.size()]);
        } else {
            selected.push_back(matches.front());
        }
        for (const auto& [ri, m] : selected) {
            auto [next, ev] = apply_event(h, rules[ri], m, next_id++, ri, step);
            h = std::move(next);
            for (EdgeId id : ev.created) trace.ledger.push_back(*h.find_edge(id));
            trace.events.push_back(std::move(ev));
        }
    }
    trace.final_state = std::move(h);
    return trace;
}

Hypergraph replay(const EvolutionTrace& trace) {
    std::map<EdgeId, const Hyperedge*> ledger;
    for (const Hyperedge& e : trace.ledger) ledger[e.id] = &e;
    Hypergraph h = trace.initial;
    for (const Event& ev : trace.events) {
        for (EdgeId id : ev.consumed) h.remove_edge(id);
        for (EdgeId id : ev.created) {
            auto it = ledger.find(id);
            if (it == ledger.end()) throw ValidationError("trace ledger missing edge");
            // ids are allocated by a monotone counter, so re-adding in event
            // order must reproduce them exactly
            EdgeId got = h.add_edge(it->second->vertices, ev.id);
            if (got != id) throw ValidationError("trace events out of id order");
        }
    }
    return h;
}

} // namespace causalforge
