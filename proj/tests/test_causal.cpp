#include <doctest.h>

#include <random>

#include "causalforge/causal.hpp"
#include "causalforge/strings.hpp"
#include "oracles.hpp"

using namespace causalforge;

namespace {

CausalGraph random_dag(std::mt19937_64& rng, int n, double p) {
    std::vector<EventId> events;
    for (int i = 0; i < n; ++i) events.push_back(static_cast<EventId>(i));
    std::vector<std::pair<EventId, EventId>> edges;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (static_cast<double>(rng() % 1000) / 1000.0 < p) {
                edges.emplace_back(static_cast<EventId>(i), static_cast<EventId>(j));
            }
        }
    }
    return CausalGraph::from_edges(events, edges);
}

} // namespace

TEST_CASE("causal edges come from created/consumed overlap") {
    // two events on disjoint edges: no causal edge
    std::vector<EventRecord> disjoint{{0, 0, {0}, {10}, 0}, {1, 0, {1}, {11}, 0}};
    CHECK(CausalGraph::build(disjoint).edges().empty());

    // chain: each event consumes the previous event's output
    std::vector<EventRecord> chain{{0, 0, {0}, {1}, 0}, {1, 0, {1}, {2}, 1}, {2, 0, {2}, {3}, 2}};
    auto cg = CausalGraph::build(chain);
    CHECK(cg.edges() == std::set<std::pair<EventId, EventId>>{{0, 1}, {1, 2}});
}

TEST_CASE("Fig 1 system causal graph matches the overlap oracle") {
    std::vector<StringRule> rules{{"BB", "A"}, {"AAB", "BAAB"}};
    auto evo = evolve_string("ABAAB", rules, UpdateScheme::Sequential, 10);
    CHECK(evo.events.size() == 10);
    auto records = event_records(evo);
    auto cg = CausalGraph::build(records);
    CHECK(cg.edges() == oracle::causal_edges(records));
    CHECK(cg.size() == 10);
}

TEST_CASE("corrupt traces are rejected") {
    std::vector<EventRecord> self_feed{{0, 0, {0}, {0}, 0}};
    CHECK_THROWS_AS(CausalGraph::build(self_feed), ValidationError);
    std::vector<EventRecord> dup{{0, 0, {0}, {1}, 0}, {1, 0, {2}, {1}, 0}};
    CHECK_THROWS_AS(CausalGraph::build(dup), ValidationError);
}

TEST_CASE("transitive reduction drops implied edges") {
    // events 0 -> 1 -> 2 with a direct 0 -> 2 dependency as well
    std::vector<EventRecord> records{
        {0, 0, {0}, {1, 10}, 0}, {1, 0, {1}, {2}, 1}, {2, 0, {2, 10}, {3}, 2}};
    auto full = CausalGraph::build(records, false);
    CHECK(full.edges().size() == 3);
    auto reduced = CausalGraph::build(records, true);
    CHECK(reduced.edges() == std::set<std::pair<EventId, EventId>>{{0, 1}, {1, 2}});
}

TEST_CASE("light cone sets") {
    auto path = CausalGraph::from_edges({0, 1, 2}, {{0, 1}, {1, 2}});
    auto cones = futures_pasts(path, 0);
    CHECK(cones.i_plus == std::set<EventId>{1, 2});
    CHECK(cones.j_plus == std::set<EventId>{0, 1, 2});
    CHECK(cones.i_minus.empty());
    CHECK(cones.j_minus == std::set<EventId>{0});

    auto anti = CausalGraph::from_edges({0, 1, 2}, {});
    CHECK(futures_pasts(anti, 1).i_plus.empty());
    CHECK_THROWS_AS(futures_pasts(anti, 9), InputError);
}

TEST_CASE("cone algebra identities on random DAGs") {
    std::mt19937_64 rng(23);
    for (int iter = 0; iter < 60; ++iter) {
        auto cg = random_dag(rng, 3 + static_cast<int>(rng() % 10), 0.3);
        const auto& events = cg.events();
        std::set<EventId> s;
        for (EventId e : events) {
            if (rng() % 3 == 0) s.insert(e);
        }
        auto i_plus = chronological_future(cg, s);
        // idempotence I+(I+(S)) = I+(S) ... strict reachability is transitive
        CHECK(chronological_future(cg, i_plus) ==
              std::set<EventId>([&] {
                  std::set<EventId> strict;
                  for (EventId x : i_plus) {
                      auto f = cg.future(x);
                      strict.insert(f.begin(), f.end());
                  }
                  return strict;
              }()));
        // I+(S) subset of J+(S)
        std::set<EventId> j_plus = i_plus;
        j_plus.insert(s.begin(), s.end());
        for (EventId x : i_plus) CHECK(j_plus.count(x));

        // transitivity spot checks
        for (int t = 0; t < 10; ++t) {
            EventId a = events[rng() % events.size()];
            auto fa = cg.future(a);
            if (fa.empty()) continue;
            auto it = fa.begin();
            std::advance(it, static_cast<long>(rng() % fa.size()));
            EventId b = *it;
            for (EventId c : cg.future(b)) CHECK(fa.count(c));
        }
    }
}

TEST_CASE("cauchy developments") {
    auto diamond = CausalGraph::from_edges({0, 1, 2, 3}, {{0, 1}, {0, 2}, {1, 3}, {2, 3}});

    auto all_sources = cauchy_development(diamond, {0});
    CHECK(all_sources.future_dev == std::set<EventId>{0, 1, 2, 3});

    CHECK(cauchy_development(diamond, {}).full.empty());

    auto partial = cauchy_development(diamond, {1});
    CHECK(partial.future_dev == std::set<EventId>{1}); // paths through 2 avoid S

    CHECK(is_cauchy_surface(diamond, {0}));
    CHECK_FALSE(is_cauchy_surface(diamond, {1}));
    CHECK_FALSE(is_cauchy_surface(diamond, {0, 3})); // causal pair: not achronal
    CHECK(is_cauchy_surface(diamond, {1, 2}));
    CHECK(achronal(diamond, {1, 2}));
    CHECK_FALSE(achronal(diamond, {0, 1}));
}

TEST_CASE("standard foliation layering") {
    auto path = CausalGraph::from_edges({0, 1, 2}, {{0, 1}, {1, 2}});
    auto [pf, pc] = foliate_standard(path);
    CHECK(pf.slices.size() == 3);
    for (const auto& slice : pf.slices) CHECK(slice.size() == 1);

    auto anti = CausalGraph::from_edges({0, 1, 2, 3}, {});
    auto [af, ac] = foliate_standard(anti);
    CHECK(af.slices.size() == 1);
    CHECK(af.slices[0].size() == 4);

    auto diamond = CausalGraph::from_edges({0, 1, 2, 3}, {{0, 1}, {0, 2}, {1, 3}, {2, 3}});
    auto [df, dc] = foliate_standard(diamond);
    REQUIRE(df.slices.size() == 3);
    CHECK(df.slices[0].size() == 1);
    CHECK(df.slices[1].size() == 2);
    CHECK(df.slices[2].size() == 1);
    CHECK(foliation_valid(diamond, df));

    // every slice of a valid foliation is achronal
    for (const auto& slice : df.slices) {
        CHECK(achronal(diamond, std::set<EventId>(slice.begin(), slice.end())));
    }
}

TEST_CASE("interval classification") {
    EventPoint origin{0, {0}};
    CHECK(classify_interval(origin, origin) == IntervalClass::Lightlike);
    CHECK(classify_interval(EventPoint{2, {1}}, origin) == IntervalClass::Timelike);
    CHECK(classify_interval(EventPoint{0, {3, 4}}, EventPoint{0, {0, 0}}) ==
          IntervalClass::Spacelike);
    CHECK(classify_interval(EventPoint{1, {1}}, origin) == IntervalClass::Lightlike);
}

TEST_CASE("boost arithmetic") {
    EventCoordinates coords;
    coords.points[0] = {12, {12}};
    coords.points[1] = {0, {0}};

    Rapidity r{parse_rational("5/13"), {1}};
    auto boosted = boost(coords, r);
    REQUIRE(boosted.exact);
    CHECK(boosted.exact_points.at(0).t == Rational(8)); // 13 - 5
    CHECK(boosted.exact_points.at(1).t == Rational(0));

    Rapidity zero{Rational(0), {1}};
    auto id = boost(coords, zero);
    REQUIRE(id.exact);
    CHECK(id.exact_points.at(0).t == Rational(12));
    CHECK(id.exact_points.at(0).x[0] == Rational(12));

    CHECK_THROWS_AS(boost(coords, Rapidity{Rational(1), {1}}), DomainError);
    CHECK_THROWS_AS(boost(coords, Rapidity{Rational(3), {1}}), DomainError);

    Rapidity nonpyth{parse_rational("1/2"), {1}};
    auto approx = boost(coords, nonpyth);
    CHECK_FALSE(approx.exact);
    CHECK(approx.approx_points.at(0).t ==
          doctest::Approx(12.0 / std::sqrt(0.75) - 0.5 / std::sqrt(0.75) * 12.0));
}

TEST_CASE("refoliation at v=0 reproduces the standard foliation") {
    auto evo = evolve_string("ABABABAB", {{"AB", "BA"}}, UpdateScheme::Parallel, 3);
    auto cg = CausalGraph::build(event_records(evo));
    auto [foliation, coords] = foliate_standard(cg);

    auto boosted = boost(coords, Rapidity{Rational(0), {1}});
    auto result = refoliate(cg, boosted);
    REQUIRE(result.accepted);
    CHECK(result.foliation.slices == foliation.slices);
}

TEST_CASE("refoliation rejects spacelike-tilted coordinates") {
    auto cg = CausalGraph::from_edges({0, 1}, {{0, 1}});
    BoostedCoordinates bad;
    bad.exact = true;
    bad.exact_points[0] = {Rational(1), {Rational(0)}};
    bad.exact_points[1] = {Rational(0), {Rational(0)}}; // successor placed earlier
    auto result = refoliate(cg, bad);
    CHECK_FALSE(result.accepted);
    REQUIRE(result.violation.has_value());
    CHECK(*result.violation == std::pair<EventId, EventId>{0, 1});
}
