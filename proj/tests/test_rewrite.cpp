#include <doctest.h>

#include <random>

#include "causalforge/errors.hpp"
#include "causalforge/rewrite.hpp"
#include "causalforge/ruleparse.hpp"
#include "oracles.hpp"

using namespace causalforge;

namespace {

Rule rule_of(const std::string& text) {
    auto rules = parse_rules(text);
    REQUIRE(rules.hypergraph_rules.size() == 1);
    return rules.hypergraph_rules[0];
}

} // namespace

TEST_CASE("find_matches basics") {
    auto h = Hypergraph::from_edge_lists({{0, 1}, {2, 3}});
    auto r = rule_of("{{x,y}} -> {{x,y},{y,x}}");
    CHECK(find_matches(h, r).size() == 2);

    auto loop_rule = rule_of("{{x,x}} -> {{x}}");
    auto single = Hypergraph::from_edge_lists({{0, 1}});
    CHECK(find_matches(single, loop_rule).empty());
}

TEST_CASE("matches agree with the exhaustive oracle") {
    auto triangle = Hypergraph::from_edge_lists({{0, 1}, {1, 2}, {2, 0}});
    auto r = rule_of("{{x,y},{y,z}} -> {{x,z}}");
    auto got = find_matches(triangle, r);
    CHECK(got.size() == 3);
    auto expect = oracle::enumerate_matches(triangle, r, false);
    CHECK(got.size() == expect.size());
    for (const auto& m : got) {
        oracle::OracleMatch om;
        om.edge_ids = m.edge_ids;
        for (const auto& [var, v] : m.binding) om.binding[var] = v;
        CHECK(expect.count(om) == 1);
    }

    std::mt19937_64 rng(17);
    for (int iter = 0; iter < 40; ++iter) {
        std::vector<std::vector<VertexId>> edges;
        int m = 2 + static_cast<int>(rng() % 5);
        for (int e = 0; e < m; ++e) {
            edges.push_back({static_cast<VertexId>(rng() % 4), static_cast<VertexId>(rng() % 4)});
        }
        auto h = Hypergraph::from_edge_lists(edges);
        for (bool injective : {false, true}) {
            auto mine = find_matches(h, r, injective);
            auto ref = oracle::enumerate_matches(h, r, injective);
            CHECK(mine.size() == ref.size());
        }
    }
}

TEST_CASE("injective flag forces distinct vertices") {
    auto h = Hypergraph::from_edge_lists({{0, 1}, {1, 0}});
    auto r = rule_of("{{x,y},{y,z}} -> {{x,z}}");
    auto all = find_matches(h, r, false);
    auto inj = find_matches(h, r, true);
    CHECK(all.size() > inj.size()); // x = z matches drop out
    for (const auto& m : inj) {
        std::set<VertexId> seen;
        for (const auto& [_, v] : m.binding) CHECK(seen.insert(v).second);
    }
}

TEST_CASE("apply_event instantiates the rhs with fresh vertices") {
    auto h = Hypergraph::from_edge_lists({{0, 0}});
    auto r = rule_of("{{x,x}} -> {{x,y},{y,x}}");
    auto matches = find_matches(h, r);
    REQUIRE(matches.size() == 1);
    auto [next, ev] = apply_event(h, r, matches[0], 7);
    CHECK(next.same_edge_multiset(Hypergraph::from_edge_lists({{0, 1}, {1, 0}})));
    CHECK(ev.id == 7);
    CHECK(ev.consumed == std::vector<EdgeId>{0});
    CHECK(ev.created.size() == 2);
    for (EdgeId id : ev.created) CHECK(next.find_edge(id)->creator == 7);

    // the same match is stale against the new state
    CHECK_THROWS_AS(apply_event(next, r, matches[0]), ConflictError);
}

TEST_CASE("pure deletion empties the hypergraph") {
    auto h = Hypergraph::from_edge_lists({{0, 1}});
    auto r = rule_of("{{x,y}} -> {}");
    auto [next, ev] = apply_event(h, r, find_matches(h, r)[0]);
    CHECK(next.edge_count() == 0);
    CHECK(ev.created.empty());
}

TEST_CASE("evolve honors steps and halts when no matches remain") {
    auto h = Hypergraph::from_edge_lists({{0, 1}});
    auto grow = rule_of("{{x,y}} -> {{x,z},{z,y}}");

    auto zero = evolve(h, {grow}, UpdateScheme::Sequential, 0);
    CHECK(zero.events.empty());
    CHECK(zero.final_state.same_edge_multiset(h));

    auto shrink = rule_of("{{x,y}} -> {}");
    auto t = evolve(h, {shrink}, UpdateScheme::Sequential, 5);
    CHECK(t.events.size() == 1);
    CHECK(t.halted_early);
}

TEST_CASE("replay reproduces the final state") {
    auto h = Hypergraph::from_edge_lists({{0, 1}, {1, 2}});
    auto r = rule_of("{{x,y}} -> {{x,z},{z,y}}");
    for (auto scheme : {UpdateScheme::Sequential, UpdateScheme::Parallel, UpdateScheme::Random}) {
        auto t = evolve(h, {r}, scheme, 4, 99);
        CHECK(replay(t).same_edge_multiset(t.final_state));
    }
}

TEST_CASE("replay determinism: same seed, same trace") {
    auto h = Hypergraph::from_edge_lists({{0, 1}, {1, 2}, {2, 0}});
    auto r = rule_of("{{x,y}} -> {{x,z},{z,y}}");
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto a = evolve(h, {r}, UpdateScheme::Random, 6, seed);
        auto b = evolve(h, {r}, UpdateScheme::Random, 6, seed);
        REQUIRE(a.events.size() == b.events.size());
        for (std::size_t i = 0; i < a.events.size(); ++i) {
            CHECK(a.events[i].consumed == b.events[i].consumed);
            CHECK(a.events[i].created == b.events[i].created);
        }
        CHECK(a.final_state.same_edge_multiset(b.final_state));
    }
}

TEST_CASE("parallel scheme applies disjoint events only") {
    auto h = Hypergraph::from_edge_lists({{0, 1}, {1, 2}, {3, 4}});
    auto r = rule_of("{{x,y},{y,z}} -> {{x,z}}");
    auto t = evolve(h, {r}, UpdateScheme::Parallel, 1);
    std::set<EdgeId> consumed;
    for (const auto& ev : t.events) {
        for (EdgeId id : ev.consumed) CHECK(consumed.insert(id).second);
    }
}

TEST_CASE("interface-preserving rules keep outside degrees intact") {
    // rewriting one edge into a path keeps every vertex outside the match at
    // the same skeleton degree
    auto h = Hypergraph::from_edge_lists({{0, 1}, {1, 2}, {2, 3}, {3, 0}});
    auto r = rule_of("{{x,y}} -> {{x,w},{w,y}}");
    auto matches = find_matches(h, r);
    for (const auto& m : matches) {
        auto [next, ev] = apply_event(h, r, m);
        std::set<VertexId> touched;
        for (EdgeId id : m.edge_ids) {
            for (VertexId v : h.find_edge(id)->vertices) touched.insert(v);
        }
        for (VertexId v : h.vertices()) {
            if (touched.count(v)) continue;
            CHECK(h.degree(v) == next.degree(v));
        }
    }
}
