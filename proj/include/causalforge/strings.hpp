#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "causalforge/hypergraph.hpp"
#include "causalforge/rewrite.hpp"

namespace causalforge {

// Substring rewriting, the paper-scale specialization of the hypergraph
// engine. Character occurrences carry token ids so that evolutions support
// the same causal bookkeeping as hyperedges.

struct StringRule {
    std::string lhs;
    std::string rhs;

    std::string text() const { return lhs + " -> " + rhs; }
};

struct StringMatch {
    int rule_index = 0;
    int pos = 0;
};

// all occurrences, ascending position then rule index
std::vector<StringMatch> string_matches(const std::string& state,
                                        const std::vector<StringRule>& rules);

using TokenId = std::uint32_t;

struct StringEvent {
    EventId id = 0;
    int rule_index = 0;
    int pos = 0; // position in the state the event fired on
    std::vector<TokenId> consumed;
    std::vector<TokenId> created;
    int step = 0;
};

struct StringEvolution {
    std::string initial;
    std::vector<StringEvent> events;
    std::string final_state;
    std::vector<TokenId> final_tokens; // ids parallel to final_state
    int steps_requested = 0;
    bool halted_early = false;
};

StringEvolution evolve_string(const std::string& init, const std::vector<StringRule>& rules,
                              UpdateScheme scheme, int steps, std::uint64_t seed = 0);

// Replays an evolution's events in a different order (given as indices into
// evolution.events). The order must be a linear extension of the causal
// order; each event must land on its corresponding tokens or ConflictError
// is thrown. Returns the replayed evolution with fresh event/token ids.
StringEvolution replay_string_order(const std::string& init, const std::vector<StringRule>& rules,
                                    const StringEvolution& evolution,
                                    const std::vector<std::size_t>& order);

// Encoding of strings as directed path hypergraphs, used by the equivalence
// oracle: symbol s at position i becomes a hyperedge of arity 2 + index(s)
// from path vertex i to i+1 (extra slots repeat the target vertex).
Hypergraph encode_string(const std::string& s, const std::string& alphabet);
Rule encode_string_rule(const StringRule& rule, const std::string& alphabet);

} // namespace causalforge
