#include "causalforge/dimension.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

#include <nlohmann/json.hpp>

#include "causalforge/transport.hpp"
#include "causalforge/util.hpp"

namespace causalforge {

void GrowthSeries::validate() const {
    if (radii.size() != counts.size() || radii.empty()) throw InputError("bad growth series");
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (counts[i] <= 0) throw InputError("growth counts must be positive");
        if (i > 0 && (radii[i] <= radii[i - 1] || counts[i] < counts[i - 1])) {
            throw InputError("growth series must be ascending and nondecreasing");
        }
    }
}

std::string GrowthSeries::to_csv() const {
    std::ostringstream out;
    out << (kind == SeriesKind::Spatial ? "r,N\n" : "t,C\n");
    for (std::size_t i = 0; i < radii.size(); ++i) out << radii[i] << "," << counts[i] << "\n";
    return out.str();
}

GrowthSeries ball_series(const Hypergraph& h, VertexId center, int r_max) {
    GrowthSeries s;
    s.kind = SeriesKind::Spatial;
    auto counts = h.ball_counts(center, r_max);
    for (int r = 0; r <= r_max; ++r) {
        s.radii.push_back(r);
        s.counts.push_back(counts[static_cast<std::size_t>(r)]);
    }
    return s;
}

GrowthSeries cone_counts(const CausalGraph& cg, EventId apex, int t_max) {
    if (!cg.has_event(apex)) throw InputError("unknown apex event");
    if (t_max < 0) throw InputError("t_max must be >= 0");
    std::map<EventId, int> depth;
    depth[apex] = 0;
    std::deque<EventId> queue{apex};
    while (!queue.empty()) {
        EventId e = queue.front();
        queue.pop_front();
        if (depth[e] >= t_max) continue;
        for (EventId s : cg.successors(e)) {
            if (depth.emplace(s, depth[e] + 1).second) queue.push_back(s);
        }
    }
    GrowthSeries s;
    s.kind = SeriesKind::Causal;
    std::vector<std::int64_t> shell(static_cast<std::size_t>(t_max) + 1, 0);
    for (const auto& [_, d] : depth) ++shell[static_cast<std::size_t>(d)];
    std::int64_t acc = 0;
    for (int t = 0; t <= t_max; ++t) {
        acc += shell[static_cast<std::size_t>(t)];
        s.radii.push_back(t);
        s.counts.push_back(acc);
    }
    return s;
}

namespace {

std::vector<std::size_t> window_indices(const GrowthSeries& s, const Window& w) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < s.radii.size(); ++i) {
        if (s.radii[i] >= w.first && s.radii[i] <= w.second) idx.push_back(i);
    }
    return idx;
}

double ls_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    const std::size_t n = xs.size();
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    if (sxx == 0) throw FitError("degenerate window: single radius", {});
    return sxy / sxx;
}

} // namespace

Window default_window(const GrowthSeries& series) {
    series.validate();
    // skip r = 0, 1 (lattice artifacts); stop once the ball saturates
    int lo = std::max(2, series.radii.front());
    int hi = series.radii.back();
    for (std::size_t i = 1; i < series.counts.size(); ++i) {
        if (series.counts[i] == series.counts[i - 1]) {
            hi = std::min(hi, series.radii[i - 1]);
            break;
        }
    }
    if (hi < lo) { lo = series.radii.front(); hi = series.radii.back(); }
    return {lo, hi};
}

LogDimension log_dimension(const GrowthSeries& series, std::optional<Window> window) {
    series.validate();
    Window w = window ? *window : default_window(series);
    auto idx = window_indices(series, w);
    if (idx.size() < 2) throw FitError("window too narrow for a slope", {});

    LogDimension out;
    out.window = w;
    std::vector<double> xs, ys;
    for (std::size_t k : idx) {
        if (series.radii[k] < 1) throw FitError("log dimension needs radii >= 1", {});
        xs.push_back(std::log(static_cast<double>(series.radii[k])));
        ys.push_back(std::log(static_cast<double>(series.counts[k])));
    }
    for (std::size_t i = 1; i < idx.size(); ++i) {
        double n_hat = (ys[i] - ys[i - 1]) / (xs[i] - xs[i - 1]);
        out.pairwise.emplace_back(series.radii[idx[i]], n_hat);
    }
    out.aggregate_slope = ls_slope(xs, ys);
    return out;
}

double shell_dimension(const GrowthSeries& series, std::optional<Window> window) {
    series.validate();
    Window w = window ? *window : default_window(series);
    std::vector<double> xs, ys;
    for (std::size_t i = 1; i < series.radii.size(); ++i) {
        int r = series.radii[i];
        if (r < w.first || r > w.second || r < 1) continue;
        std::int64_t shell = series.counts[i] - series.counts[i - 1];
        if (shell <= 0) continue; // saturated; boundary reached
        xs.push_back(std::log(static_cast<double>(r)));
        ys.push_back(std::log(static_cast<double>(shell)));
    }
    if (xs.size() < 2) throw FitError("window too narrow for shell slope", {});
    return 1.0 + ls_slope(xs, ys);
}

namespace {

// model and analytic Jacobian for N(r) = a r^n (1 - R r^2 / (6(n+2)))
struct CorrectionModel {
    double r, count;

    double value(double a, double n, double R) const {
        double c = R / (6.0 * (n + 2.0));
        return a * std::pow(r, n) * (1.0 - c * r * r);
    }
    void jacobian(double a, double n, double R, double* row) const {
        double c = R / (6.0 * (n + 2.0));
        double rn = std::pow(r, n);
        double base = 1.0 - c * r * r;
        row[0] = rn * base;
        double dc_dn = -R / (6.0 * (n + 2.0) * (n + 2.0));
        row[1] = a * rn * std::log(r) * base - a * rn * dc_dn * r * r;
        row[2] = -a * rn * r * r / (6.0 * (n + 2.0));
    }
};

bool solve3(double m[3][3], double b[3], double x[3]) {
    int piv[3] = {0, 1, 2};
    for (int k = 0; k < 3; ++k) {
        int best = k;
        for (int i = k + 1; i < 3; ++i) {
            if (std::abs(m[piv[i]][k]) > std::abs(m[piv[best]][k])) best = i;
        }
        std::swap(piv[k], piv[best]);
        if (std::abs(m[piv[k]][k]) < 1e-300) return false;
        for (int i = k + 1; i < 3; ++i) {
            double f = m[piv[i]][k] / m[piv[k]][k];
            for (int j = k; j < 3; ++j) m[piv[i]][j] -= f * m[piv[k]][j];
            b[piv[i]] -= f * b[piv[k]];
        }
    }
    for (int k = 2; k >= 0; --k) {
        double acc = b[piv[k]];
        for (int j = k + 1; j < 3; ++j) acc -= m[piv[k]][j] * x[j];
        x[k] = acc / m[piv[k]][k];
    }
    return true;
}

} // namespace

DimensionFit fit_curvature_correction(const GrowthSeries& series, std::optional<Window> window) {
    series.validate();
    Window w = window ? *window : default_window(series);
    auto idx = window_indices(series, w);
    if (idx.size() < 4) throw FitError("curvature fit needs at least 4 usable radii", {});

    std::vector<CorrectionModel> pts;
    for (std::size_t k : idx) {
        if (series.radii[k] < 1) continue;
        pts.push_back({static_cast<double>(series.radii[k]),
                       static_cast<double>(series.counts[k])});
    }
    if (pts.size() < 4) throw FitError("curvature fit needs at least 4 usable radii", {});

    // deterministic initialization from the aggregate log slope
    double n = log_dimension(series, w).aggregate_slope;
    double a = pts.front().count / std::pow(pts.front().r, n);
    double R = 0;

    auto rms = [&](double a_, double n_, double R_) {
        double acc = 0;
        for (const auto& p : pts) {
            double e = p.value(a_, n_, R_) - p.count;
            acc += e * e;
        }
        return std::sqrt(acc / static_cast<double>(pts.size()));
    };

    const int max_iterations = 200;
    const double gradient_tolerance = 1e-10;
    double lambda = 1e-3;
    double err = rms(a, n, R);
    int iter = 0;
    bool converged = false;
    for (; iter < max_iterations; ++iter) {
        // normal equations with LM damping
        double jtj[3][3] = {{0}};
        double jtr[3] = {0, 0, 0};
        for (const auto& p : pts) {
            double row[3];
            p.jacobian(a, n, R, row);
            double resid = p.count - p.value(a, n, R);
            for (int i = 0; i < 3; ++i) {
                jtr[i] += row[i] * resid;
                for (int j = 0; j < 3; ++j) jtj[i][j] += row[i] * row[j];
            }
        }
        double gnorm = std::sqrt(jtr[0] * jtr[0] + jtr[1] * jtr[1] + jtr[2] * jtr[2]);
        if (gnorm < gradient_tolerance) {
            converged = true;
            break;
        }
        double m[3][3];
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) m[i][j] = jtj[i][j];
            m[i][i] *= 1.0 + lambda;
        }
        double b[3] = {jtr[0], jtr[1], jtr[2]};
        double step[3];
        if (!solve3(m, b, step)) {
            lambda *= 10;
            continue;
        }
        double a2 = a + step[0], n2 = n + step[1], R2 = R + step[2];
        double err2 = rms(a2, n2, R2);
        if (std::isfinite(err2) && err2 <= err) {
            a = a2;
            n = n2;
            R = R2;
            if (err - err2 < 1e-14 * (1.0 + err)) {
                err = err2;
                converged = true;
                break;
            }
            err = err2;
            lambda = std::max(lambda * 0.3, 1e-12);
        } else {
            lambda *= 10;
            if (lambda > 1e12) break;
        }
    }

    DimensionFit fit;
    fit.n_hat = n;
    fit.a_hat = a;
    fit.r_hat = R;
    fit.residual = err;
    fit.window = w;
    fit.iterations = iter;
    if (!converged) throw FitError("curvature fit did not converge", fit);
    return fit;
}

std::string DimensionFit::to_json() const {
    nlohmann::json j;
    j["n_hat"] = n_hat;
    j["a_hat"] = a_hat;
    if (r_hat) j["r_hat"] = *r_hat;
    j["residual"] = residual;
    j["window"] = {window.first, window.second};
    j["iterations"] = iterations;
    return j.dump();
}

AnomalyReport dimension_anomaly(const Hypergraph& h, const std::vector<VertexId>& sample) {
    if (sample.empty()) throw InputError("anomaly sample must be non-empty");
    AnomalyReport report;
    report.per_vertex = parallel_map<std::tuple<VertexId, double, bool>>(
        sample.size(), [&](std::size_t i) -> std::tuple<VertexId, double, bool> {
            VertexId v = sample[i];
            auto nbrs = h.neighbors(v);
            if (nbrs.empty()) return {v, 0.0, true};
            double acc = 0;
            for (VertexId u : nbrs) acc += to_double(ollivier_ricci_pair(h, v, u));
            return {v, acc / static_cast<double>(nbrs.size()), false};
        });
    for (const auto& [v, kappa, flagged] : report.per_vertex) report.total += kappa;
    return report;
}

std::string AnomalyReport::to_csv() const {
    std::ostringstream out;
    out << "vertex,kappa_mean,flagged\n";
    for (const auto& [v, k, f] : per_vertex) {
        out << v << "," << k << "," << (f ? 1 : 0) << "\n";
    }
    return out.str();
}

} // namespace causalforge
