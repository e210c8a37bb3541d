#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "causalforge/hypergraph.hpp"

namespace causalforge {

using PatternVar = std::uint32_t;

// Left/right side of a rule: hyperedge shapes over integer-named variables.
struct Pattern {
    std::vector<std::vector<PatternVar>> edge_patterns;

    std::vector<PatternVar> variables() const; // sorted unique
};

struct Rule {
    Pattern lhs;
    Pattern rhs;
    std::vector<PatternVar> fresh_vars; // rhs-only variables, sorted
    std::string text;                   // printable form, used in descriptors

    static Rule make(Pattern lhs, Pattern rhs, std::string text = {});
};

// A binding of the lhs onto concrete hyperedges. edge_ids is aligned with
// lhs.edge_patterns; binding is sorted by variable.
struct Match {
    std::vector<std::pair<PatternVar, VertexId>> binding;
    std::vector<EdgeId> edge_ids;

    VertexId bound(PatternVar var) const;
    std::vector<EdgeId> sorted_edges() const;
};

struct Event {
    EventId id = 0;
    int rule_index = 0;
    std::vector<EdgeId> consumed; // sorted
    std::vector<EdgeId> created;  // sorted
    int step = 0;
};

struct EvolutionTrace {
    Hypergraph initial;
    std::vector<Event> events;
    Hypergraph final_state;
    // every edge that ever existed (initial + created), keyed by id; makes
    // traces replayable without re-running the matcher
    std::vector<Hyperedge> ledger;
    int steps_requested = 0;
    bool halted_early = false; // ran out of matches before steps_requested
};

enum class UpdateScheme { Sequential, Parallel, Random };

UpdateScheme parse_scheme(const std::string& name);
std::string scheme_name(UpdateScheme s);

// All bindings of rule.lhs onto distinct hyperedges of h, in canonical order
// (edge id sequence, then binding). Non-injective by default: distinct
// variables may share a vertex.
std::vector<Match> find_matches(const Hypergraph& h, const Rule& rule,
                                bool injective_vars = false);

// Matches across a rule set, ordered by (sorted consumed edges, rule index,
// binding); this is the engine's total "standard updating order".
std::vector<std::pair<int, Match>> find_all_matches(const Hypergraph& h,
                                                    const std::vector<Rule>& rules,
                                                    bool injective_vars = false);

// Applies one rewrite: consumed edges removed, rhs instantiated with the
// binding extended by fresh vertices. Throws ConflictError on a stale match.
std::pair<Hypergraph, Event> apply_event(const Hypergraph& h, const Rule& rule, const Match& m,
                                         EventId event_id = 0, int rule_index = 0, int step = 0);

// Deterministic evolution. Sequential: first match per step (seeded-random
// choice under Random). Parallel: greedy maximal set of consumed-edge
// disjoint matches per step.
EvolutionTrace evolve(const Hypergraph& init, const std::vector<Rule>& rules, UpdateScheme scheme,
                      int steps, std::uint64_t seed = 0);

// Re-applies the trace's events against the initial state; used to validate
// traces and by the replay-determinism tests.
Hypergraph replay(const EvolutionTrace& trace);

} // namespace causalforge
