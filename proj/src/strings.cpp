#include "causalforge/strings.hpp"

#include <algorithm>
#include <map>
#include <random>

#include "causalforge/errors.hpp"

namespace causalforge {

std::vector<StringMatch> string_matches(const std::string& state,
                                        const std::vector<StringRule>& rules) {
    std::vector<StringMatch> out;
    for (int pos = 0; pos < static_cast<int>(state.size()); ++pos) {
        for (int ri = 0; ri < static_cast<int>(rules.size()); ++ri) {
            const std::string& lhs = rules[ri].lhs;
            if (lhs.empty() || pos + lhs.size() > state.size()) continue;
            if (state.compare(pos, lhs.size(), lhs) == 0) out.push_back({ri, pos});
        }
    }
    return out;
}

namespace {

struct TokenState {
    std::string symbols;
    std::vector<TokenId> ids;
};

TokenState initial_tokens(const std::string& init, TokenId& next_token) {
    TokenState st;
    st.symbols = init;
    st.ids.resize(init.size());
    for (auto& id : st.ids) id = next_token++;
    return st;
}

StringEvent apply_string_match(TokenState& st, const StringRule& rule, int rule_index, int pos,
                               int step, EventId event_id, TokenId& next_token) {
    StringEvent ev;
    ev.id = event_id;
    ev.rule_index = rule_index;
    ev.pos = pos;
    ev.step = step;
    ev.consumed.assign(st.ids.begin() + pos, st.ids.begin() + pos + rule.lhs.size());
    std::vector<TokenId> created(rule.rhs.size());
    for (auto& id : created) id = next_token++;
    ev.created = created;
    st.symbols = st.symbols.substr(0, pos) + rule.rhs + st.symbols.substr(pos + rule.lhs.size());
    st.ids.erase(st.ids.begin() + pos, st.ids.begin() + pos + rule.lhs.size());
    st.ids.insert(st.ids.begin() + pos, created.begin(), created.end());
    return ev;
}

} // namespace

StringEvolution evolve_string(const std::string& init, const std::vector<StringRule>& rules,
                              UpdateScheme scheme, int steps, std::uint64_t seed) {
    if (steps < 0) throw InputError("steps must be >= 0");
    StringEvolution evo;
    evo.initial = init;
    evo.steps_requested = steps;

    TokenId next_token = 0;
    EventId next_event = 0;
    TokenState st = initial_tokens(init, next_token);
    std::mt19937_64 rng(seed);

    for (int step = 0; step < steps; ++step) {
        auto matches = string_matches(st.symbols, rules);
        if (matches.empty()) {
            evo.halted_early = true;
            break;
        }
        std::vector<StringMatch> selected;
        if (scheme == UpdateScheme::Parallel) {
            std::vector<bool> taken(st.symbols.size(), false);
            for (const auto& m : matches) {
                const auto len = rules[m.rule_index].lhs.size();
                bool overlap = false;
                for (std::size_t i = m.pos; i < m.pos + len; ++i) overlap |= taken[i];
                if (overlap) continue;
                for (std::size_t i = m.pos; i < m.pos + len; ++i) taken[i] = true;
                selected.push_back(m);
            }
        } else if (scheme == UpdateScheme::Random) {
            selected.push_back(matches[rng() % matches.size()]);
        } else {
            selected.push_back(matches.front());
        }
        // ids follow canonical (ascending position) order; application runs
        // right-to-left so earlier positions stay valid within the step
        std::vector<StringEvent> batch(selected.size());
        EventId base = next_event;
        next_event += static_cast<EventId>(selected.size());
        for (std::size_t k = selected.size(); k-- > 0;) {
            const auto& m = selected[k];
            batch[k] = apply_string_match(st, rules[m.rule_index], m.rule_index, m.pos, step,
                                          base + static_cast<EventId>(k), next_token);
        }
        for (auto& ev : batch) evo.events.push_back(std::move(ev));
    }
    evo.final_state = st.symbols;
    evo.final_tokens = st.ids;
    return evo;
}

StringEvolution replay_string_order(const std::string& init, const std::vector<StringRule>& rules,
                                    const StringEvolution& evolution,
                                    const std::vector<std::size_t>& order) {
    StringEvolution out;
    out.initial = init;
    out.steps_requested = static_cast<int>(order.size());

    TokenId next_token = 0;
    EventId next_event = 0;
    TokenState st = initial_tokens(init, next_token);

    // original token id -> replayed token id
    std::map<TokenId, TokenId> phi;
    for (std::size_t i = 0; i < st.ids.size(); ++i) phi[static_cast<TokenId>(i)] = st.ids[i];

    for (std::size_t oi : order) {
        if (oi >= evolution.events.size()) throw InputError("order references unknown event");
        const StringEvent& orig = evolution.events[oi];
        const StringRule& rule = rules[orig.rule_index];
        // locate the corresponding tokens in the current state
        std::vector<TokenId> want;
        want.reserve(orig.consumed.size());
        for (TokenId t : orig.consumed) {
            auto it = phi.find(t);
            if (it == phi.end()) throw ConflictError("order is not a causal linear extension");
            want.push_back(it->second);
        }
        auto first = std::find(st.ids.begin(), st.ids.end(), want.front());
        if (first == st.ids.end()) throw ConflictError("consumed token already rewritten");
        int pos = static_cast<int>(first - st.ids.begin());
        for (std::size_t k = 0; k < want.size(); ++k) {
            if (pos + k >= st.ids.size() || st.ids[pos + k] != want[k]) {
                throw ConflictError("consumed tokens are not contiguous at replay time");
            }
        }
        if (st.symbols.compare(pos, rule.lhs.size(), rule.lhs) != 0) {
            throw ConflictError("replayed state does not match the rule lhs");
        }
        StringEvent ev = apply_string_match(st, rule, orig.rule_index, pos,
                                            static_cast<int>(out.events.size()), next_event++,
                                            next_token);
        for (std::size_t k = 0; k < orig.created.size(); ++k) phi[orig.created[k]] = ev.created[k];
        out.events.push_back(std::move(ev));
    }
    out.final_state = st.symbols;
    out.final_tokens = st.ids;
    return out;
}

Hypergraph encode_string(const std::string& s, const std::string& alphabet) {
    Hypergraph h;
    for (std::size_t i = 0; i < s.size(); ++i) {
        auto idx = alphabet.find(s[i]);
        if (idx == std::string::npos) throw InputError("symbol outside alphabet");
        std::vector<VertexId> vs{static_cast<VertexId>(i)};
        for (std::size_t k = 0; k <= idx; ++k) vs.push_back(static_cast<VertexId>(i + 1));
        h.add_edge(std::move(vs));
    }
    return h;
}

Rule encode_string_rule(const StringRule& rule, const std::string& alphabet) {
    if (rule.rhs.empty()) throw InputError("empty rhs is not path-encodable");
    const auto L = rule.lhs.size();
    auto edge_for = [&](char c, PatternVar from, PatternVar to) {
        auto idx = alphabet.find(c);
        if (idx == std::string::npos) throw InputError("symbol outside alphabet");
        std::vector<PatternVar> vars{from};
        for (std::size_t k = 0; k <= idx; ++k) vars.push_back(to);
        return vars;
    };
    Pattern lhs, rhs;
    for (std::size_t j = 0; j < L; ++j) {
        lhs.edge_patterns.push_back(
            edge_for(rule.lhs[j], static_cast<PatternVar>(j), static_cast<PatternVar>(j + 1)));
    }
    for (std::size_t j = 0; j < rule.rhs.size(); ++j) {
        PatternVar from = j == 0 ? 0 : static_cast<PatternVar>(L + j);
        PatternVar to = j + 1 == rule.rhs.size() ? static_cast<PatternVar>(L)
                                                 : static_cast<PatternVar>(L + j + 1);
        rhs.edge_patterns.push_back(edge_for(rule.rhs[j], from, to));
    }
    return Rule::make(std::move(lhs), std::move(rhs), rule.text());
}

} // namespace causalforge
