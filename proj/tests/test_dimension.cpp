#include <doctest.h>

#include <cmath>

#include "causalforge/dimension.hpp"
#include "causalforge/meshes.hpp"
#include "causalforge/strings.hpp"

using namespace causalforge;

namespace {

GrowthSeries synthetic_power(double a, double n, int r_max) {
    GrowthSeries s;
    for (int r = 1; r <= r_max; ++r) {
        s.radii.push_back(r);
        s.counts.push_back(static_cast<std::int64_t>(
            std::llround(a * std::pow(static_cast<double>(r), n))));
    }
    return s;
}

} // namespace

TEST_CASE("log dimension recovers exact power laws") {
    GrowthSeries s;
    for (int r = 1; r <= 20; ++r) {
        s.radii.push_back(r);
        s.counts.push_back(3 * static_cast<std::int64_t>(r) * r);
    }
    auto ld = log_dimension(s, Window{2, 20});
    CHECK(std::abs(ld.aggregate_slope - 2.0) < 1e-9);
    for (const auto& [r, n_hat] : ld.pairwise) CHECK(std::abs(n_hat - 2.0) < 1e-9);
}

TEST_CASE("path growth reads as one-dimensional") {
    auto path = path_graph(201);
    auto s = ball_series(path, 100, 95);
    auto ld = log_dimension(s, Window{30, 90});
    CHECK(ld.aggregate_slope == doctest::Approx(1.0).epsilon(0.02));
    CHECK(shell_dimension(s, Window{30, 90}) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("constant counts read as zero-dimensional") {
    GrowthSeries s;
    for (int r = 1; r <= 8; ++r) {
        s.radii.push_back(r);
        s.counts.push_back(7);
    }
    CHECK(std::abs(log_dimension(s, Window{1, 8}).aggregate_slope) < 1e-12);
}

TEST_CASE("torus windows read as two-dimensional") {
    auto torus = grid2d(50, 50, true);
    auto s = ball_series(torus, 0, 12);
    CHECK(shell_dimension(s, Window{4, 12}) == doctest::Approx(2.0).epsilon(1e-9));
    auto ld = log_dimension(s, Window{4, 12});
    CHECK(std::abs(ld.aggregate_slope - 2.0) < 0.15);
}

TEST_CASE("degenerate series raise fit errors") {
    GrowthSeries s;
    s.radii = {1};
    s.counts = {5};
    CHECK_THROWS_AS(log_dimension(s, Window{1, 1}), FitError);
    GrowthSeries bad;
    bad.radii = {0, 1};
    bad.counts = {1, 0};
    CHECK_THROWS_AS(bad.validate(), InputError);
}

TEST_CASE("curvature fit reduces to the slope when R = 0") {
    auto s = synthetic_power(2.0, 2.0, 12);
    auto fit = fit_curvature_correction(s, Window{2, 12});
    CHECK(fit.n_hat == doctest::Approx(2.0).epsilon(0.02));
    CHECK(std::abs(*fit.r_hat) < 0.02);
}

TEST_CASE("flat torus fits near-zero curvature") {
    auto torus = grid2d(50, 50, true);
    auto s = ball_series(torus, 0, 10);
    auto fit = fit_curvature_correction(s, Window{3, 10});
    CHECK(std::abs(*fit.r_hat) < 0.05);
}

TEST_CASE("sphere-like mesh fits positive curvature") {
    auto sphere = icosahedron_subdivision(3); // 642 vertices
    auto s = ball_series(sphere, 20, 8);
    auto fit = fit_curvature_correction(s, Window{2, 8});
    CHECK(*fit.r_hat > 0);
}

TEST_CASE("hyperbolic patch fits negative curvature") {
    auto patch = hyperbolic37_patch(6);
    auto s = ball_series(patch, 0, 5);
    auto fit = fit_curvature_correction(s, Window{1, 5});
    CHECK(*fit.r_hat < 0);
}

TEST_CASE("cone counts") {
    auto evo = evolve_string("ABABABAB", {{"AB", "BA"}}, UpdateScheme::Parallel, 4);
    auto cg = CausalGraph::build(event_records(evo));
    auto s = cone_counts(cg, 0, 3);
    CHECK(s.counts[0] == 1);
    for (std::size_t i = 1; i < s.counts.size(); ++i) CHECK(s.counts[i] >= s.counts[i - 1]);

    // path causal graph: C(t) = t + 1
    std::vector<EventRecord> chain{{0, 0, {0}, {1}, 0}, {1, 0, {1}, {2}, 1}, {2, 0, {2}, {3}, 2}};
    auto path_cg = CausalGraph::build(chain);
    auto ps = cone_counts(path_cg, 0, 2);
    CHECK(ps.counts == std::vector<std::int64_t>{1, 2, 3});

    CHECK_THROWS_AS(cone_counts(path_cg, 99, 2), InputError);
}

TEST_CASE("anomaly statistic") {
    auto torus = grid2d(12, 12, true);
    std::vector<VertexId> sample;
    for (int i = 0; i < 24; ++i) sample.push_back(static_cast<VertexId>(i * 6 % 144));
    std::sort(sample.begin(), sample.end());
    sample.erase(std::unique(sample.begin(), sample.end()), sample.end());
    auto report = dimension_anomaly(torus, sample);
    CHECK(std::abs(report.total) / static_cast<double>(sample.size()) < 0.05);

    auto sphere = icosahedron_subdivision(2);
    std::vector<VertexId> sverts = sphere.vertices();
    std::vector<VertexId> ssample(sverts.begin(), sverts.begin() + 30);
    CHECK(dimension_anomaly(sphere, ssample).total > 0);

    CHECK_THROWS_AS(dimension_anomaly(torus, {}), InputError);

    auto lonely = Hypergraph::from_edge_lists({{0}, {1, 2}});
    auto flagged = dimension_anomaly(lonely, {0});
    CHECK(std::get<2>(flagged.per_vertex[0]));
    CHECK(flagged.total == 0.0);
}

TEST_CASE("anomaly is relabeling invariant") {
    auto a = Hypergraph::from_edge_lists({{0, 1}, {1, 2}, {2, 0}, {2, 3}});
    auto b = Hypergraph::from_edge_lists({{10, 11}, {11, 12}, {12, 10}, {12, 13}});
    auto ra = dimension_anomaly(a, {0, 1, 2, 3});
    auto rb = dimension_anomaly(b, {10, 11, 12, 13});
    CHECK(ra.total == doctest::Approx(rb.total).epsilon(1e-12));
}
