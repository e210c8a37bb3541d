#pragma once

#include <string>
#include <vector>

#include "causalforge/hypergraph.hpp"
#include "causalforge/rewrite.hpp"
#include "causalforge/strings.hpp"

namespace causalforge {

// Rule grammar: hypergraph rules `{{x,y},{y,z}} -> {{x,z},{z,w}}` (identifier
// variables, rhs-only identifiers become fresh), string rules `AB -> A`.
// Multiple rules separate with ';' or newlines. Errors carry line:column.

struct RuleSet {
    std::vector<Rule> hypergraph_rules;
    std::vector<StringRule> string_rules;

    bool is_string_system() const { return !string_rules.empty(); }
};

RuleSet parse_rules(const std::string& text);

std::string print_rule(const Rule& rule);
std::string print_rule(const StringRule& rule);

// state literal: `{{0,0},{0,1}}` with non-negative integer vertices
Hypergraph parse_hypergraph_literal(const std::string& text);
std::string print_hypergraph_literal(const Hypergraph& h);

} // namespace causalforge
