#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "causalforge/canonical.hpp"
#include "causalforge/causal.hpp"
#include "causalforge/errors.hpp"
#include "causalforge/hypergraph.hpp"
#include "causalforge/multiway.hpp"

namespace causalforge {

// Causal-invariance checking: enumerate every maximal update order whose
// events stay within a causal depth bound, build the causal graph of each
// order, and compare canonical DAG forms.
//
// Orders are enumerated at the event level (state-level merging would hide
// distinct orders). The search is made tractable by memoizing on a full
// configuration signature: the canonical form of the past causal graph
// together with the current state, its tokens pointing at their creator
// events. Two configurations with equal signatures generate identical sets
// of final causal-graph keys, so the memoization is exact, not heuristic.

enum class Verdict { Yes, No, Unknown };
std::string verdict_name(Verdict v);

struct UpdateOrderStep {
    int rule_index = 0;
    std::string site; // "@3" for strings, "e2+e5" for hypergraphs
};

struct InvarianceLimits {
    std::size_t max_configurations = 2000000;
};

struct InvarianceReport {
    Verdict verdict = Verdict::Unknown;
    int depth = 0;
    std::vector<CanonicalKey> distinct_keys;
    std::size_t configurations = 0;
    std::size_t memo_hits = 0;
    bool budget_hit = false;
    // two orders with non-isomorphic causal graphs, when verdict == No
    std::optional<std::pair<std::vector<UpdateOrderStep>, std::vector<UpdateOrderStep>>> witness;
};

// "yes" is certified to the given event depth (depth = longest causal chain)
InvarianceReport causal_invariant(const StringSystem& system, const std::string& init, int depth,
                                  const InvarianceLimits& limits = {});
InvarianceReport causal_invariant(const HypergraphSystem& system, const Hypergraph& init,
                                  int depth, const InvarianceLimits& limits = {});

} // namespace causalforge
