#include "causalforge/ruleparse.hpp"

#include <cctype>
#include <map>
#include <sstream>

#include "causalforge/errors.hpp"

namespace causalforge {

namespace {

struct Cursor {
    const std::string& text;
    std::size_t pos = 0;
    int line = 1, col = 1;

    [[noreturn]] void fail(const std::string& what) const {
        std::ostringstream out;
        out << "syntax error at " << line << ":" << col << ": " << what;
        throw InputError(out.str());
    }

    bool done() const { return pos >= text.size(); }
    char peek() const { return done() ? '\0' : text[pos]; }

    char advance() {
        char c = text[pos++];
        if (c == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
        return c;
    }

    void skip_spaces() {
        while (!done() && (peek() == ' ' || peek() == '\t' || peek() == '\r')) advance();
    }

    bool eat(char c) {
        skip_spaces();
        if (peek() != c) return false;
        advance();
        return true;
    }

    void expect(char c) {
        skip_spaces();
        if (peek() != c) fail(std::string("expected '") + c + "'");
        advance();
    }

    std::string identifier() {
        skip_spaces();
        std::string out;
        while (!done() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) {
            out.push_back(advance());
        }
        if (out.empty()) fail("expected identifier");
        return out;
    }

    bool arrow() {
        skip_spaces();
        if (pos + 1 < text.size() && text[pos] == '-' && text[pos + 1] == '>') {
            advance();
            advance();
            return true;
        }
        return false;
    }
};

// {{x,y},{y,z}} with a shared variable-name table
Pattern parse_pattern(Cursor& cur, std::map<std::string, PatternVar>& vars) {
    Pattern p;
    cur.expect('{');
    cur.skip_spaces();
    if (cur.eat('}')) return p; // {} = empty pattern
    for (;;) {
        cur.expect('{');
        std::vector<PatternVar> edge;
        for (;;) {
            std::string name = cur.identifier();
            auto it = vars.find(name);
            if (it == vars.end()) {
                it = vars.emplace(name, static_cast<PatternVar>(vars.size())).first;
            }
            edge.push_back(it->second);
            if (!cur.eat(',')) break;
        }
        cur.expect('}');
        if (edge.empty()) cur.fail("hyperedge pattern needs at least one variable");
        p.edge_patterns.push_back(std::move(edge));
        if (!cur.eat(',')) break;
    }
    cur.expect('}');
    return p;
}

std::string parse_word(Cursor& cur) {
    cur.skip_spaces();
    std::string out;
    while (!cur.done() && std::isupper(static_cast<unsigned char>(cur.peek()))) {
        out.push_back(cur.advance());
    }
    return out;
}

} // namespace

RuleSet parse_rules(const std::string& text) {
    RuleSet rules;
    Cursor cur{text};
    for (;;) {
        cur.skip_spaces();
        while (!cur.done() && (cur.peek() == '\n' || cur.peek() == ';')) {
            cur.advance();
            cur.skip_spaces();
        }
        if (cur.done()) break;

        if (cur.peek() == '{') {
            std::map<std::string, PatternVar> vars;
            Pattern lhs = parse_pattern(cur, vars);
            if (lhs.edge_patterns.empty()) cur.fail("rule lhs must be non-empty");
            if (!cur.arrow()) cur.fail("expected '->'");
            Pattern rhs = parse_pattern(cur, vars);
            Rule r = Rule::make(std::move(lhs), std::move(rhs));
            r.text = print_rule(r);
            rules.hypergraph_rules.push_back(std::move(r));
        } else {
            std::string lhs = parse_word(cur);
            if (lhs.empty()) cur.fail("expected rule");
            if (!cur.arrow()) cur.fail("expected '->'");
            std::string rhs = parse_word(cur); // may be empty (deletion)
            rules.string_rules.push_back({lhs, rhs});
        }
        cur.skip_spaces();
        if (cur.done()) break;
        if (cur.peek() == ';' || cur.peek() == '\n') continue;
        cur.fail("expected ';' or newline between rules");
    }
    if (rules.hypergraph_rules.empty() && rules.string_rules.empty()) {
        throw InputError("no rules given");
    }
    if (!rules.hypergraph_rules.empty() && !rules.string_rules.empty()) {
        throw InputError("cannot mix hypergraph and string rules in one set");
    }
    return rules;
}

namespace {

std::string print_pattern(const Pattern& p) {
    std::ostringstream out;
    out << "{";
    for (std::size_t i = 0; i < p.edge_patterns.size(); ++i) {
        if (i) out << ",";
        out << "{";
        for (std::size_t j = 0; j < p.edge_patterns[i].size(); ++j) {
            if (j) out << ",";
            out << "x" << p.edge_patterns[i][j];
        }
        out << "}";
    }
    out << "}";
    return out.str();
}

} // namespace

std::string print_rule(const Rule& rule) {
    return print_pattern(rule.lhs) + " -> " + print_pattern(rule.rhs);
}

std::string print_rule(const StringRule& rule) { return rule.lhs + " -> " + rule.rhs; }

Hypergraph parse_hypergraph_literal(const std::string& text) {
    Cursor cur{text};
    cur.expect('{');
    std::vector<std::vector<VertexId>> edges;
    cur.skip_spaces();
    if (!cur.eat('}')) {
        for (;;) {
            cur.expect('{');
            std::vector<VertexId> edge;
            for (;;) {
                std::string tok = cur.identifier();
                for (char c : tok) {
                    if (!std::isdigit(static_cast<unsigned char>(c))) {
                        cur.fail("state vertices must be non-negative integers");
                    }
                }
                edge.push_back(static_cast<VertexId>(std::stoul(tok)));
                if (!cur.eat(',')) break;
            }
            cur.expect('}');
            edges.push_back(std::move(edge));
            if (!cur.eat(',')) break;
        }
        cur.expect('}');
    }
    cur.skip_spaces();
    if (!cur.done()) cur.fail("trailing input after state literal");
    return Hypergraph::from_edge_lists(edges);
}

std::string print_hypergraph_literal(const Hypergraph& h) {
    std::ostringstream out;
    out << "{";
    bool first_edge = true;
    for (const Hyperedge& e : h.edges()) {
        if (!first_edge) out << ",";
        first_edge = false;
        out << "{";
        for (std::size_t i = 0; i < e.vertices.size(); ++i) {
            if (i) out << ",";
            out << e.vertices[i];
        }
        out << "}";
    }
    out << "}";
    return out.str();
}

} // namespace causalforge
