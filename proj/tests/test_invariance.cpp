#include <doctest.h>

#include "causalforge/invariance.hpp"
#include "causalforge/ruleparse.hpp"

using namespace causalforge;

TEST_CASE("single-rule growth is causal invariant at horizon") {
    StringSystem sys{{{"A", "AA"}}};
    auto report = causal_invariant(sys, "A", 3);
    CHECK(report.verdict == Verdict::Yes);
    CHECK(report.distinct_keys.size() == 1);
    CHECK_FALSE(report.witness.has_value());
}

TEST_CASE("two-rule growth is causal invariant at horizon") {
    StringSystem sys{{{"A", "AB"}, {"B", "A"}}};
    auto report = causal_invariant(sys, "A", 4);
    CHECK(report.verdict == Verdict::Yes);
    CHECK(report.distinct_keys.size() == 1);
}

TEST_CASE("the Fig 3 system is not causal invariant") {
    StringSystem sys{{{"AA", "BA"}, {"BBB", "A"}, {"A", "AB"}}};
    auto report = causal_invariant(sys, "AA", 3);
    CHECK(report.verdict == Verdict::No);
    CHECK(report.distinct_keys.size() >= 2);
    REQUIRE(report.witness.has_value());
    CHECK_FALSE(report.witness->first.empty());
    CHECK_FALSE(report.witness->second.empty());
    // witness orders use the declared sites format
    for (const auto& step : report.witness->first) {
        CHECK(step.site.front() == '@');
        CHECK(step.rule_index >= 0);
        CHECK(step.rule_index < 3);
    }
}

TEST_CASE("depth 0 is trivially invariant") {
    StringSystem sys{{{"A", "AA"}}};
    auto report = causal_invariant(sys, "AAA", 0);
    CHECK(report.verdict == Verdict::Yes);
    CHECK(report.distinct_keys.size() == 1); // the empty causal graph
}

TEST_CASE("budget produces an explicit unknown") {
    StringSystem sys{{{"A", "AA"}}};
    InvarianceLimits limits;
    limits.max_configurations = 3;
    auto report = causal_invariant(sys, "A", 4, limits);
    CHECK(report.verdict == Verdict::Unknown);
    CHECK(report.budget_hit);
}

TEST_CASE("hypergraph engine: self-loop doubling is invariant at small depth") {
    auto rules = parse_rules("{{x,x}} -> {{x,x},{x,x}}");
    HypergraphSystem sys{rules.hypergraph_rules};
    auto init = Hypergraph::from_edge_lists({{0, 0}});
    auto report = causal_invariant(sys, init, 2);
    CHECK(report.verdict == Verdict::Yes);
}

TEST_CASE("hypergraph engine: order-dependent consumption is caught") {
    // two rules compete for the same edge with structurally different output
    auto rules = parse_rules("{{x,y},{y,z}} -> {{x,z}}; {{x,y}} -> {{x,y},{y,w}}");
    HypergraphSystem sys{rules.hypergraph_rules};
    auto init = Hypergraph::from_edge_lists({{0, 1}, {1, 2}});
    auto report = causal_invariant(sys, init, 2);
    CHECK(report.verdict == Verdict::No);
    CHECK(report.witness.has_value());
}
