#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "causalforge/causal.hpp"
#include "causalforge/errors.hpp"
#include "causalforge/hypergraph.hpp"

namespace causalforge {

// Dimension and curvature estimation from ball growth N(r) and causal cone
// growth C(t), and the volume-summed curvature anomaly statistic.

enum class SeriesKind { Spatial, Causal };

struct GrowthSeries {
    std::vector<int> radii;          // ascending, starting at 0 or 1
    std::vector<std::int64_t> counts; // positive, nondecreasing
    SeriesKind kind = SeriesKind::Spatial;

    void validate() const;
    std::string to_csv() const;
};

GrowthSeries ball_series(const Hypergraph& h, VertexId center, int r_max);

// C(t): events within <= t causal hops of apex (future cone)
GrowthSeries cone_counts(const CausalGraph& cg, EventId apex, int t_max);

using Window = std::pair<int, int>; // inclusive radius range

// window heuristic: drop r <= 1 and radii past boundary saturation
Window default_window(const GrowthSeries& series);

struct LogDimension {
    std::vector<std::pair<int, double>> pairwise; // n-hat between consecutive radii
    double aggregate_slope = 0;                   // LS slope of log N vs log r
    Window window;
};

// n-hat(r) = log(N(r2)/N(r1)) / log(r2/r1) plus the aggregate LS slope
LogDimension log_dimension(const GrowthSeries& series, std::optional<Window> window = {});

// growth-rate estimator: 1 + LS slope of log shell sizes (N(r) - N(r-1));
// insensitive to the sub-leading terms that bias the cumulative slope at
// desk-scale radii
double shell_dimension(const GrowthSeries& series, std::optional<Window> window = {});

struct DimensionFit {
    double n_hat = 0;
    double a_hat = 0;
    std::optional<double> r_hat; // curvature coefficient
    double residual = 0;         // RMS
    Window window;
    int iterations = 0;
    std::string to_json() const;
};

// Levenberg-Marquardt fit of N(r) = a r^n (1 - R r^2 / (6(n+2))); throws
// FitError carrying the best iterate on non-convergence
DimensionFit fit_curvature_correction(const GrowthSeries& series,
                                      std::optional<Window> window = {});

struct FitError : Error {
    DimensionFit best;
    FitError(const std::string& what, DimensionFit best_so_far)
        : Error(what), best(std::move(best_so_far)) {}
};

struct AnomalyReport {
    double total = 0;
    // vertex, mean neighbor curvature, flagged (no neighbors)
    std::vector<std::tuple<VertexId, double, bool>> per_vertex;
    std::string to_csv() const;
};

// S = sum over sampled vertices of the mean Ollivier-Ricci curvature toward
// their neighbors; isolated vertices contribute 0 and are flagged
AnomalyReport dimension_anomaly(const Hypergraph& h, const std::vector<VertexId>& sample);

} // namespace causalforge
