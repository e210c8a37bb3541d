#include "causalforge/invariance.hpp"

#include <algorithm>
#include <functional>

namespace causalforge {

std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Yes: return "yes";
        case Verdict::No: return "no";
        case Verdict::Unknown: return "unknown";
    }
    return "?";
}

namespace {

// signature graph colors/labels; chosen apart so roles never collide
constexpr int kEventColorBase = 2;     // + generation
constexpr int kVertexColor = 500000;   // hypergraph vertices
constexpr int kTokenColorBase = 1000000; // + symbol / edge marker
constexpr int kCausalLabel = 0;
constexpr int kCreationLabel = 1;
constexpr int kChainLabel = 2;
constexpr int kIncidenceLabelBase = 10; // + position

struct PastGraph {
    std::vector<int> event_gen;                    // by event index
    std::vector<std::pair<int, int>> causal_edges; // (creator, consumer) indices

    CanonicalKey final_key() const {
        ColoredDigraph g;
        for (std::size_t i = 0; i < event_gen.size(); ++i) g.add_vertex(0);
        for (const auto& [a, b] : causal_edges) g.add_edge(a, b, kCausalLabel);
        return canonical_key(g);
    }
};

struct BudgetSignal {};

// ---------------------------------------------------------------------------
// string engine

struct StringTokenEngine {
    const std::vector<StringRule>& rules;

    struct State {
        std::string symbols;
        std::vector<int> creator; // event index, -1 for initial tokens
    };

    struct Move {
        int rule_index;
        int pos;
    };

    State initial(const std::string& s) const {
        return {s, std::vector<int>(s.size(), -1)};
    }

    std::vector<Move> moves(const State& st) const {
        std::vector<Move> out;
        for (const StringMatch& m : string_matches(st.symbols, rules)) {
            out.push_back({m.rule_index, m.pos});
        }
        return out;
    }

    std::vector<int> consumed_creators(const State& st, const Move& mv) const {
        const auto len = rules[mv.rule_index].lhs.size();
        return {st.creator.begin() + mv.pos, st.creator.begin() + mv.pos + len};
    }

    State apply(const State& st, const Move& mv, int event_index) const {
        const StringRule& r = rules[mv.rule_index];
        State out;
        out.symbols = st.symbols.substr(0, mv.pos) + r.rhs +
                      st.symbols.substr(mv.pos + r.lhs.size());
        out.creator.assign(st.creator.begin(), st.creator.begin() + mv.pos);
        out.creator.insert(out.creator.end(), r.rhs.size(), event_index);
        out.creator.insert(out.creator.end(), st.creator.begin() + mv.pos + r.lhs.size(),
                           st.creator.end());
        return out;
    }

    std::string site(const Move& mv) const { return "@" + std::to_string(mv.pos); }

    void add_structure(ColoredDigraph& g, const State& st,
                       const std::vector<int>& event_nodes) const {
        std::vector<int> token_nodes(st.symbols.size());
        for (std::size_t i = 0; i < st.symbols.size(); ++i) {
            token_nodes[i] =
                g.add_vertex(kTokenColorBase + static_cast<unsigned char>(st.symbols[i]));
            if (st.creator[i] >= 0) {
                g.add_edge(event_nodes[static_cast<std::size_t>(st.creator[i])], token_nodes[i],
                           kCreationLabel);
            }
        }
        for (std::size_t i = 0; i + 1 < token_nodes.size(); ++i) {
            g.add_edge(token_nodes[i], token_nodes[i + 1], kChainLabel);
        }
    }
};

// ---------------------------------------------------------------------------
// hypergraph engine: states are hypergraphs whose edges carry the creating
// event index in their creator tag

struct HyperTokenEngine {
    const std::vector<Rule>& rules;

    using State = Hypergraph;

    struct Move {
        int rule_index;
        Match match;
    };

    State initial(const Hypergraph& h) const { return h; }

    std::vector<Move> moves(const State& st) const {
        std::vector<Move> out;
        for (auto& [ri, m] : find_all_matches(st, rules)) out.push_back({ri, std::move(m)});
        return out;
    }

    std::vector<int> consumed_creators(const State& st, const Move& mv) const {
        std::vector<int> out;
        for (EdgeId id : mv.match.edge_ids) {
            EventId c = st.find_edge(id)->creator;
            out.push_back(c == kNoEvent ? -1 : static_cast<int>(c));
        }
        return out;
    }

    State apply(const State& st, const Move& mv, int event_index) const {
        auto [next, ev] = apply_event(st, rules[mv.rule_index], mv.match,
                                      static_cast<EventId>(event_index), mv.rule_index, 0);
        return std::move(next);
    }

    std::string site(const Move& mv) const {
        std::string s;
        for (EdgeId id : mv.match.sorted_edges()) {
            if (!s.empty()) s += "+";
            s += "e" + std::to_string(id);
        }
        return s;
    }

    void add_structure(ColoredDigraph& g, const State& st,
                       const std::vector<int>& event_nodes) const {
        std::map<VertexId, int> vnode;
        for (VertexId v : st.vertices()) vnode[v] = g.add_vertex(kVertexColor);
        for (const Hyperedge& e : st.edges()) {
            int en = g.add_vertex(kTokenColorBase);
            if (e.creator != kNoEvent) {
                g.add_edge(event_nodes[e.creator], en, kCreationLabel);
            }
            for (std::size_t i = 0; i < e.vertices.size(); ++i) {
                g.add_edge(en, vnode[e.vertices[i]], kIncidenceLabelBase + static_cast<int>(i));
            }
        }
    }
};

// ---------------------------------------------------------------------------

template <class Engine>
class InvarianceSearch {
public:
    InvarianceSearch(const Engine& eng, int depth, const InvarianceLimits& limits)
        : eng_(eng), depth_(depth), limits_(limits) {}

    InvarianceReport run(const typename Engine::State& init) {
        InvarianceReport report;
        report.depth = depth_;
        std::set<std::vector<std::uint8_t>> keys;
        try {
            PastGraph past;
            keys = search(init, past);
        } catch (const BudgetSignal&) {
            report.budget_hit = true;
        }
        report.configurations = configurations_;
        report.memo_hits = memo_hits_;
        for (const auto& k : keys) report.distinct_keys.push_back(CanonicalKey{k});
        if (report.budget_hit) {
            report.verdict = Verdict::Unknown;
        } else if (keys.size() <= 1) {
            report.verdict = Verdict::Yes;
        } else {
            report.verdict = Verdict::No;
            report.witness = find_witness(init);
        }
        return report;
    }

private:
    using KeySet = std::set<std::vector<std::uint8_t>>;

    const Engine& eng_;
    int depth_;
    InvarianceLimits limits_;
    std::map<std::vector<std::uint8_t>, KeySet> memo_;
    std::size_t configurations_ = 0;
    std::size_t memo_hits_ = 0;

    int move_generation(const typename Engine::State& st, const typename Engine::Move& mv,
                        const PastGraph& past) const {
        int g = 0;
        for (int c : eng_.consumed_creators(st, mv)) {
            g = std::max(g, c < 0 ? 0 : past.event_gen[static_cast<std::size_t>(c)]);
        }
        return g + 1;
    }

    PastGraph extend(const typename Engine::State& st, const typename Engine::Move& mv,
                     const PastGraph& past, int gen) const {
        PastGraph out = past;
        int idx = static_cast<int>(out.event_gen.size());
        out.event_gen.push_back(gen);
        std::set<int> creators;
        for (int c : eng_.consumed_creators(st, mv)) {
            if (c >= 0) creators.insert(c);
        }
        for (int c : creators) out.causal_edges.emplace_back(c, idx);
        return out;
    }

    std::vector<std::uint8_t> signature(const typename Engine::State& st,
                                        const PastGraph& past) const {
        ColoredDigraph g;
        std::vector<int> event_nodes;
        event_nodes.reserve(past.event_gen.size());
        for (int gen : past.event_gen) event_nodes.push_back(g.add_vertex(kEventColorBase + gen));
        for (const auto& [a, b] : past.causal_edges) {
            g.add_edge(event_nodes[static_cast<std::size_t>(a)],
                       event_nodes[static_cast<std::size_t>(b)], kCausalLabel);
        }
        eng_.add_structure(g, st, event_nodes);
        return canonical_key(g).bytes;
    }

    KeySet search(const typename Engine::State& st, const PastGraph& past) {
        if (++configurations_ > limits_.max_configurations) throw BudgetSignal{};
        std::vector<std::pair<typename Engine::Move, int>> admissible;
        for (auto& mv : eng_.moves(st)) {
            int gen = move_generation(st, mv, past);
            if (gen <= depth_) admissible.emplace_back(std::move(mv), gen);
        }
        if (admissible.empty()) return {past.final_key().bytes};

        auto sig = signature(st, past);
        auto it = memo_.find(sig);
        if (it != memo_.end()) {
            ++memo_hits_;
            return it->second;
        }
        KeySet keys;
        for (const auto& [mv, gen] : admissible) {
            int idx = static_cast<int>(past.event_gen.size());
            auto next_past = extend(st, mv, past, gen);
            auto next_state = eng_.apply(st, mv, idx);
            auto sub = search(next_state, next_past);
            keys.insert(sub.begin(), sub.end());
        }
        memo_.emplace(std::move(sig), keys);
        return keys;
    }

    // two concrete orders realizing distinct keys: the leftmost maximal
    // order, then the first order whose key differs
    std::optional<std::pair<std::vector<UpdateOrderStep>, std::vector<UpdateOrderStep>>>
    find_witness(const typename Engine::State& init) {
        std::vector<UpdateOrderStep> first_order, second_order, current;
        std::vector<std::uint8_t> first_key;
        bool have_first = false, have_second = false;
        std::size_t visited = 0;

        std::function<void(const typename Engine::State&, const PastGraph&)> dfs =
            [&](const typename Engine::State& st, const PastGraph& past) {
                if (have_second || ++visited > limits_.max_configurations) return;
                std::vector<std::pair<typename Engine::Move, int>> admissible;
                for (auto& mv : eng_.moves(st)) {
                    int gen = move_generation(st, mv, past);
                    if (gen <= depth_) admissible.emplace_back(std::move(mv), gen);
                }
                if (admissible.empty()) {
                    auto key = past.final_key().bytes;
                    if (!have_first) {
                        have_first = true;
                        first_key = key;
                        first_order = current;
                    } else if (key != first_key) {
                        have_second = true;
                        second_order = current;
                    }
                    return;
                }
                for (const auto& [mv, gen] : admissible) {
                    if (have_second) return;
                    int idx = static_cast<int>(past.event_gen.size());
                    current.push_back({mv.rule_index, eng_.site(mv)});
                    dfs(eng_.apply(st, mv, idx), extend(st, mv, past, gen));
                    current.pop_back();
                }
            };
        PastGraph past;
        dfs(init, past);
        if (have_second) return {{first_order, second_order}};
        return std::nullopt;
    }
};

} // namespace

InvarianceReport causal_invariant(const StringSystem& system, const std::string& init, int depth,
                                  const InvarianceLimits& limits) {
    if (depth < 0) throw InputError("depth must be >= 0");
    StringTokenEngine eng{system.rules};
    InvarianceSearch<StringTokenEngine> search(eng, depth, limits);
    return search.run(eng.initial(init));
}

InvarianceReport causal_invariant(const HypergraphSystem& system, const Hypergraph& init,
                                  int depth, const InvarianceLimits& limits) {
    if (depth < 0) throw InputError("depth must be >= 0");
    HyperTokenEngine eng{system.rules};
    InvarianceSearch<HyperTokenEngine> search(eng, depth, limits);
    return search.run(eng.initial(init));
}

} // namespace causalforge
