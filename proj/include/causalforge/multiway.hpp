#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "causalforge/errors.hpp"
#include "causalforge/hypergraph.hpp"
#include "causalforge/rewrite.hpp"
#include "causalforge/strings.hpp"

namespace causalforge {

// State-level multiway exploration over canonicalized states, plus the
// abstract-rewriting analyses (closures, joinability, confluence variants).
// Systems are adapters exposing key(state) and successors(state); string
// states key to themselves, hypergraph states key to their canonical form.

struct StringSystem {
    using State = std::string;
    std::vector<StringRule> rules;

    std::string key(const State& s) const { return s; }
    std::string label(const State& s) const { return s.empty() ? "(empty)" : s; }
    std::vector<std::pair<std::string, State>> successors(const State& s) const;
};

struct HypergraphSystem {
    using State = Hypergraph;
    std::vector<Rule> rules;

    std::string key(const State& h) const;
    std::string label(const State& h) const;
    std::vector<std::pair<std::string, State>> successors(const State& h) const;
};

struct ExploreLimits {
    std::size_t max_states = 200000;
    std::size_t max_transitions = 2000000;
};

struct MultiwayGraph {
    struct StateInfo {
        int depth = 0;
        std::string label;
    };

    std::map<std::string, StateInfo> states;
    std::set<std::tuple<std::string, std::string, std::string>> transitions; // from, to, event
    std::string initial_key;
    int depth_explored = 0;
    bool truncated = false;

    bool has_state(const std::string& key) const { return states.count(key) > 0; }
    std::map<std::string, std::vector<std::string>> adjacency() const;

    // x ->* y within the explored graph; reflexive
    bool reachable(const std::string& x, const std::string& y) const;

    // common descendant of minimal combined path length (ties by key order),
    // searched within the explored graph only
    std::optional<std::string> joinable(const std::string& x, const std::string& y) const;

    std::string to_dot() const;
};

// Breadth-first closure of single-event successors up to `depth` generations,
// states merged by key. Hitting a limit sets `truncated` (never silent).
template <class System>
MultiwayGraph explore(const System& system, const typename System::State& init, int depth,
                      const ExploreLimits& limits = {});

// Exploration that also keeps one representative payload per state so
// analyses can extend the search beyond the horizon.
template <class System>
struct Exploration {
    MultiwayGraph graph;
    std::map<std::string, typename System::State> payload;
};

template <class System>
Exploration<System> explore_states(const System& system, const typename System::State& init,
                                   int depth, const ExploreLimits& limits = {});

enum class ConfluenceVariant { Local, Semi, Strong, Diamond, Global };
enum class Tristate { Yes, No, Unknown };

ConfluenceVariant parse_confluence_variant(const std::string& name);
std::string confluence_variant_name(ConfluenceVariant v);
std::string tristate_name(Tristate t);

struct ConfluenceReport {
    ConfluenceVariant variant = ConfluenceVariant::Global;
    Tristate holds = Tristate::Unknown;
    // present exactly when holds == No: a diverging pair with no join
    std::optional<std::pair<std::string, std::string>> witness;
    int depth = 0;
    int join_budget = 0;
    std::size_t pairs_checked = 0;
    std::size_t pairs_undecided = 0;
};

// Horizon-only check against an already-explored graph: joins that would
// need states beyond the horizon come back Unknown.
ConfluenceReport check_confluence(const MultiwayGraph& mw, ConfluenceVariant variant);

// System-aware check: explores to `depth`, then gives each join search its
// own forward budget (default 2*depth) so joins may pass beyond the horizon.
// "Yes" is still only horizon-certified.
template <class System>
ConfluenceReport analyze_confluence(const System& system, const typename System::State& init,
                                    int depth, ConfluenceVariant variant, int join_budget = -1,
                                    const ExploreLimits& limits = {});

} // namespace causalforge
