#include "causalforge/multiway.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace causalforge {

std::vector<std::pair<std::string, std::string>> StringSystem::successors(
    const State& s) const {
    std::vector<std::pair<std::string, State>> out;
    for (const StringMatch& m : string_matches(s, rules)) {
        const StringRule& r = rules[m.rule_index];
        std::string next = s.substr(0, m.pos) + r.rhs + s.substr(m.pos + r.lhs.size());
        out.emplace_back(r.text() + " @ " + std::to_string(m.pos), std::move(next));
    }
    return out;
}

std::string HypergraphSystem::key(const State& h) const {
    const auto& bytes = h.canonical_form().bytes;
    return std::string(bytes.begin(), bytes.end());
}

std::string HypergraphSystem::label(const State& h) const {
    return h.canonical_form().digest();
}

std::vector<std::pair<std::string, Hypergraph>> HypergraphSystem::successors(
    const State& h) const {
    std::vector<std::pair<std::string, State>> out;
    for (const auto& [ri, m] : find_all_matches(h, rules)) {
        auto [next, ev] = apply_event(h, rules[ri], m);
        std::ostringstream descr;
        descr << rules[ri].text << " @ e";
        for (std::size_t i = 0; i < ev.consumed.size(); ++i) {
            if (i) descr << "+e";
            descr << ev.consumed[i];
        }
        out.emplace_back(descr.str(), std::move(next));
    }
    return out;
}

std::map<std::string, std::vector<std::string>> MultiwayGraph::adjacency() const {
    std::map<std::string, std::vector<std::string>> adj;
    for (const auto& [from, to, _] : transitions) adj[from].push_back(to);
    return adj;
}

namespace {

std::map<std::string, int> bfs_distances(const std::map<std::string, std::vector<std::string>>& adj,
                                         const std::string& from) {
    std::map<std::string, int> dist;
    dist[from] = 0;
    std::deque<std::string> queue{from};
    while (!queue.empty()) {
        auto x = queue.front();
        queue.pop_front();
        auto it = adj.find(x);
        if (it == adj.end()) continue;
        for (const auto& y : it->second) {
            if (dist.emplace(y, dist[x] + 1).second) queue.push_back(y);
        }
    }
    return dist;
}

} // namespace

bool MultiwayGraph::reachable(const std::string& x, const std::string& y) const {
    if (!has_state(x) || !has_state(y)) throw InputError("unknown multiway state");
    if (x == y) return true;
    auto dist = bfs_distances(adjacency(), x);
    return dist.count(y) > 0;
}

std::optional<std::string> MultiwayGraph::joinable(const std::string& x,
                                                   const std::string& y) const {
    if (!has_state(x) || !has_state(y)) throw InputError("unknown multiway state");
    auto adj = adjacency();
    auto dx = bfs_distances(adj, x);
    auto dy = bfs_distances(adj, y);
    std::optional<std::string> best;
    long best_cost = -1;
    for (const auto& [z, cx] : dx) {
        auto it = dy.find(z);
        if (it == dy.end()) continue;
        long cost = cx + it->second;
        if (!best || cost < best_cost || (cost == best_cost && z < *best)) {
            best = z;
            best_cost = cost;
        }
    }
    return best;
}

std::string MultiwayGraph::to_dot() const {
    std::ostringstream out;
    out << "digraph multiway {\n  rankdir=TB;\n";
    std::map<std::string, int> index;
    for (const auto& [key, info] : states) {
        int id = static_cast<int>(index.size());
        index[key] = id;
        out << "  n" << id << " [label=\"" << info.label << "\"";
        if (key == initial_key) out << ", shape=doublecircle";
        out << "];\n";
    }
    for (const auto& [from, to, label] : transitions) {
        out << "  n" << index.at(from) << " -> n" << index.at(to) << " [label=\"" << label
            << "\"];\n";
    }
    out << "}\n";
    return out.str();
}

template <class System>
Exploration<System> explore_states(const System& system, const typename System::State& init,
                                   int depth, const ExploreLimits& limits) {
    if (depth < 0) throw InputError("depth must be >= 0");
    Exploration<System> result;
    MultiwayGraph& mw = result.graph;
    mw.depth_explored = depth;
    mw.initial_key = system.key(init);
    mw.states[mw.initial_key] = {0, system.label(init)};
    result.payload.emplace(mw.initial_key, init);

    std::vector<std::string> frontier{mw.initial_key};
    for (int gen = 1; gen <= depth && !frontier.empty(); ++gen) {
        std::vector<std::string> next_frontier;
        for (const auto& key : frontier) {
            for (auto& [descr, succ] : system.successors(result.payload.at(key))) {
                std::string skey = system.key(succ);
                if (mw.states.size() >= limits.max_states && !mw.has_state(skey)) {
                    mw.truncated = true;
                    continue;
                }
                if (mw.transitions.size() >= limits.max_transitions) {
                    mw.truncated = true;
                    continue;
                }
                if (!mw.has_state(skey)) {
                    mw.states[skey] = {gen, system.label(succ)};
                    result.payload.emplace(skey, std::move(succ));
                    next_frontier.push_back(skey);
                }
                mw.transitions.emplace(key, skey, descr);
            }
        }
        frontier = std::move(next_frontier);
    }
    return result;
}

template <class System>
MultiwayGraph explore(const System& system, const typename System::State& init, int depth,
                      const ExploreLimits& limits) {
    return explore_states(system, init, depth, limits).graph;
}

ConfluenceVariant parse_confluence_variant(const std::string& name) {
    if (name == "local") return ConfluenceVariant::Local;
    if (name == "semi") return ConfluenceVariant::Semi;
    if (name == "strong") return ConfluenceVariant::Strong;
    if (name == "diamond") return ConfluenceVariant::Diamond;
    if (name == "global") return ConfluenceVariant::Global;
    throw InputError("unknown confluence variant: " + name);
}

std::string confluence_variant_name(ConfluenceVariant v) {
    switch (v) {
        case ConfluenceVariant::Local: return "local";
        case ConfluenceVariant::Semi: return "semi";
        case ConfluenceVariant::Strong: return "strong";
        case ConfluenceVariant::Diamond: return "diamond";
        case ConfluenceVariant::Global: return "global";
    }
    return "?";
}

std::string tristate_name(Tristate t) {
    switch (t) {
        case Tristate::Yes: return "yes";
        case Tristate::No: return "no";
        case Tristate::Unknown: return "unknown-at-horizon";
    }
    return "?";
}

namespace {

// forward closure within the explored graph; notes whether it escaped
// through a horizon state (one at max depth, possibly unexplored further)
struct HorizonClosure {
    std::set<std::string> reached;
    bool complete = true;
};

HorizonClosure horizon_closure(const MultiwayGraph& mw,
                               const std::map<std::string, std::vector<std::string>>& adj,
                               const std::string& from) {
    HorizonClosure out;
    std::deque<std::string> queue{from};
    out.reached.insert(from);
    while (!queue.empty()) {
        auto x = queue.front();
        queue.pop_front();
        if (mw.states.at(x).depth >= mw.depth_explored) out.complete = false;
        auto it = adj.find(x);
        if (it == adj.end()) continue;
        for (const auto& y : it->second) {
            if (out.reached.insert(y).second) queue.push_back(y);
        }
    }
    if (mw.truncated) out.complete = false;
    return out;
}

struct PairOutcome {
    bool joined = false;
    bool definite_no = false;
};

PairOutcome judge(const HorizonClosure& a, const HorizonClosure& b) {
    for (const auto& z : a.reached) {
        if (b.reached.count(z)) return {true, false};
    }
    return {false, a.complete && b.complete};
}

void tally(ConfluenceReport& report, const PairOutcome& o, const std::string& b,
           const std::string& c) {
    ++report.pairs_checked;
    if (o.joined) return;
    if (o.definite_no) {
        report.holds = Tristate::No;
        if (!report.witness) report.witness = {{b, c}};
    } else {
        ++report.pairs_undecided;
    }
}

} // namespace

ConfluenceReport check_confluence(const MultiwayGraph& mw, ConfluenceVariant variant) {
    ConfluenceReport report;
    report.variant = variant;
    report.depth = mw.depth_explored;
    report.join_budget = 0;
    report.holds = Tristate::Yes;

    auto adj = mw.adjacency();
    std::map<std::string, HorizonClosure> closures;
    auto closure_of = [&](const std::string& key) -> const HorizonClosure& {
        auto it = closures.find(key);
        if (it == closures.end()) it = closures.emplace(key, horizon_closure(mw, adj, key)).first;
        return it->second;
    };

    auto single_steps = [&](const std::string& key) {
        std::vector<std::string> out;
        auto it = adj.find(key);
        if (it != adj.end()) {
            out = it->second;
            std::sort(out.begin(), out.end());
            out.erase(std::unique(out.begin(), out.end()), out.end());
        }
        return out;
    };

    for (const auto& [a, info] : mw.states) {
        bool a_at_horizon = info.depth >= mw.depth_explored || mw.truncated;
        auto succ = single_steps(a);
        switch (variant) {
            case ConfluenceVariant::Local:
            case ConfluenceVariant::Strong:
            case ConfluenceVariant::Diamond: {
                if (a_at_horizon && succ.empty()) {
                    // successors unknown beyond horizon
                    ++report.pairs_undecided;
                    break;
                }
                for (std::size_t i = 0; i < succ.size(); ++i) {
                    for (std::size_t j = 0; j < succ.size(); ++j) {
                        if (variant != ConfluenceVariant::Strong && j < i) continue;
                        if (i == j) continue;
                        const auto& b = succ[i];
                        const auto& c = succ[j];
                        if (variant == ConfluenceVariant::Local) {
                            tally(report, judge(closure_of(b), closure_of(c)), b, c);
                        } else if (variant == ConfluenceVariant::Diamond) {
                            auto sb = single_steps(b);
                            auto sc = single_steps(c);
                            bool met = false;
                            for (const auto& d : sb) {
                                met |= std::binary_search(sc.begin(), sc.end(), d);
                            }
                            PairOutcome o;
                            o.joined = met;
                            bool horizon_b = mw.states.at(b).depth >= mw.depth_explored;
                            bool horizon_c = mw.states.at(c).depth >= mw.depth_explored;
                            o.definite_no = !met && !horizon_b && !horizon_c && !mw.truncated;
                            tally(report, o, b, c);
                        } else { // Strong: b ->* d and (c -> d or c == d)
                            std::vector<std::string> candidates = single_steps(c);
                            candidates.push_back(c);
                            const auto& rb = closure_of(b);
                            bool met = false;
                            for (const auto& d : candidates) met |= rb.reached.count(d) > 0;
                            PairOutcome o;
                            o.joined = met;
                            bool horizon_c = mw.states.at(c).depth >= mw.depth_explored;
                            o.definite_no = !met && rb.complete && !horizon_c && !mw.truncated;
                            tally(report, o, b, c);
                        }
                    }
                }
                break;
            }
            case ConfluenceVariant::Semi: {
                const auto& from_a = closure_of(a);
                for (const auto& b : succ) {
                    for (const auto& c : from_a.reached) {
                        tally(report, judge(closure_of(b), closure_of(c)), b, c);
                    }
                }
                break;
            }
            case ConfluenceVariant::Global: {
                const auto& from_a = closure_of(a);
                for (const auto& b : from_a.reached) {
                    for (const auto& c : from_a.reached) {
                        if (c < b) continue;
                        tally(report, judge(closure_of(b), closure_of(c)), b, c);
                    }
                }
                break;
            }
        }
        if (report.holds == Tristate::No) return report;
    }
    if (report.pairs_undecided > 0) report.holds = Tristate::Unknown;
    return report;
}

namespace {

// forward closure by running the system `budget` generations from a state
template <class System>
HorizonClosure system_closure(const System& system, const typename System::State& start,
                              int budget, const ExploreLimits& limits) {
    auto sub = explore_states(system, start, budget, limits);
    HorizonClosure out;
    out.complete = !sub.graph.truncated;
    for (const auto& [key, info] : sub.graph.states) {
        out.reached.insert(key);
        if (info.depth >= budget) {
            // may have unexplored successors
            if (!system.successors(sub.payload.at(key)).empty()) out.complete = false;
        }
    }
    return out;
}

} // namespace

template <class System>
ConfluenceReport analyze_confluence(const System& system, const typename System::State& init,
                                    int depth, ConfluenceVariant variant, int join_budget,
                                    const ExploreLimits& limits) {
    if (join_budget < 0) join_budget = 2 * depth;
    auto ex = explore_states(system, init, depth, limits);
    const MultiwayGraph& mw = ex.graph;

    ConfluenceReport report;
    report.variant = variant;
    report.depth = depth;
    report.join_budget = join_budget;
    report.holds = Tristate::Yes;

    std::map<std::string, HorizonClosure> closures;
    auto closure_of = [&](const std::string& key) -> const HorizonClosure& {
        auto it = closures.find(key);
        if (it == closures.end()) {
            it = closures.emplace(key, system_closure(system, ex.payload.at(key), join_budget,
                                                      limits))
                     .first;
        }
        return it->second;
    };

    auto successors_of = [&](const std::string& key) {
        std::vector<std::pair<std::string, std::string>> out; // key, descr
        for (auto& [descr, succ] : system.successors(ex.payload.at(key))) {
            std::string skey = system.key(succ);
            // keep a payload so closures can start here
            ex.payload.emplace(skey, std::move(succ));
            out.emplace_back(skey, descr);
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    };

    for (const auto& [a, info] : mw.states) {
        auto succ = successors_of(a);
        switch (variant) {
            case ConfluenceVariant::Local:
            case ConfluenceVariant::Strong:
            case ConfluenceVariant::Diamond: {
                for (std::size_t i = 0; i < succ.size(); ++i) {
                    for (std::size_t j = 0; j < succ.size(); ++j) {
                        if (variant != ConfluenceVariant::Strong && j < i) continue;
                        if (i == j) continue;
                        const auto& b = succ[i].first;
                        const auto& c = succ[j].first;
                        if (variant == ConfluenceVariant::Local) {
                            tally(report, judge(closure_of(b), closure_of(c)), b, c);
                        } else if (variant == ConfluenceVariant::Diamond) {
                            auto sb = successors_of(b);
                            auto sc = successors_of(c);
                            bool met = false;
                            for (const auto& [d, _] : sb) {
                                for (const auto& [d2, _2] : sc) met |= d == d2;
                            }
                            PairOutcome o{met, !met};
                            tally(report, o, b, c);
                        } else {
                            const auto& rb = closure_of(b);
                            bool met = rb.reached.count(c) > 0;
                            for (const auto& [d, _] : successors_of(c)) {
                                met |= rb.reached.count(d) > 0;
                            }
                            PairOutcome o{met, !met && rb.complete};
                            tally(report, o, b, c);
                        }
                    }
                }
                break;
            }
            case ConfluenceVariant::Semi: {
                const auto& from_a = closure_of(a);
                for (const auto& [b, _] : succ) {
                    for (const auto& c : from_a.reached) {
                        if (!ex.payload.count(c)) continue;
                        tally(report, judge(closure_of(b), closure_of(c)), b, c);
                    }
                }
                break;
            }
            case ConfluenceVariant::Global: {
                for (auto itb = mw.states.begin(); itb != mw.states.end(); ++itb) {
                    for (auto itc = itb; itc != mw.states.end(); ++itc) {
                        tally(report, judge(closure_of(itb->first), closure_of(itc->first)),
                              itb->first, itc->first);
                    }
                }
                break;
            }
        }
        if (report.holds == Tristate::No) return report;
        if (variant == ConfluenceVariant::Global) break; // all pairs done in one sweep
    }
    if (report.pairs_undecided > 0) report.holds = Tristate::Unknown;
    return report;
}

template MultiwayGraph explore<StringSystem>(const StringSystem&, const std::string&, int,
                                             const ExploreLimits&);
template MultiwayGraph explore<HypergraphSystem>(const HypergraphSystem&, const Hypergraph&, int,
                                                 const ExploreLimits&);
template Exploration<StringSystem> explore_states<StringSystem>(const StringSystem&,
                                                                const std::string&, int,
                                                                const ExploreLimits&);
template Exploration<HypergraphSystem> explore_states<HypergraphSystem>(const HypergraphSystem&,
                                                                        const Hypergraph&, int,
                                                                        const ExploreLimits&);
template ConfluenceReport analyze_confluence<StringSystem>(const StringSystem&, const std::string&,
                                                           int, ConfluenceVariant, int,
                                                           const ExploreLimits&);
template ConfluenceReport analyze_confluence<HypergraphSystem>(const HypergraphSystem&,
                                                               const Hypergraph&, int,
                                                               ConfluenceVariant, int,
                                                               const ExploreLimits&);

} // namespace causalforge
