#include "causalforge/canonical.hpp"

#include <algorithm>
#include <map>
#include <utility>

namespace causalforge {
namespace {

struct Adjacency {
    // per vertex: (label, other-endpoint) with multiplicity
    std::vector<std::vector<std::pair<int, int>>> out, in;

    explicit Adjacency(const ColoredDigraph& g)
        : out(g.size()), in(g.size()) {
        for (const auto& [u, v, l] : g.edges) {
            out[u].emplace_back(l, v);
            in[v].emplace_back(l, u);
        }
    }
};

using Signature = std::tuple<int, std::vector<std::pair<int, int>>, std::vector<std::pair<int, int>>>;

// One refinement pass: split classes by the multiset of (label, neighbor
// color) on both sides. New color ids follow signature order, which keeps
// them isomorphism-invariant.
std::vector<int> refine_once(const Adjacency& adj, const std::vector<int>& colors) {
    const int n = static_cast<int>(colors.size());
    std::vector<Signature> sigs(n);
    for (int v = 0; v < n; ++v) {
        std::vector<std::pair<int, int>> o, i;
        o.reserve(adj.out[v].size());
        i.reserve(adj.in[v].size());
        for (const auto& [l, w] : adj.out[v]) o.emplace_back(l, colors[w]);
        for (const auto& [l, w] : adj.in[v]) i.emplace_back(l, colors[w]);
        std::sort(o.begin(), o.end());
        std::sort(i.begin(), i.end());
        sigs[v] = {colors[v], std::move(o), std::move(i)};
    }
    std::map<Signature, int> ids;
    for (const auto& s : sigs) ids.emplace(s, 0);
    int next = 0;
    for (auto& [sig, id] : ids) id = next++;
    std::vector<int> result(n);
    for (int v = 0; v < n; ++v) result[v] = ids[sigs[v]];
    return result;
}

int class_count(const std::vector<int>& colors) {
    if (colors.empty()) return 0;
    return *std::max_element(colors.begin(), colors.end()) + 1;
}

std::vector<int> refine(const Adjacency& adj, std::vector<int> colors) {
    int classes = class_count(colors);
    for (;;) {
        auto next = refine_once(adj, colors);
        int next_classes = class_count(next);
        if (next_classes == classes) return next;
        classes = next_classes;
        colors = std::move(next);
    }
}

void append_u32(std::vector<std::uint8_t>& out, std::uint32_t x) {
    out.push_back(static_cast<std::uint8_t>(x));
    out.push_back(static_cast<std::uint8_t>(x >> 8));
    out.push_back(static_cast<std::uint8_t>(x >> 16));
    out.push_back(static_cast<std::uint8_t>(x >> 24));
}

// Serialize under a discrete coloring: vertices ranked by color.
std::vector<std::uint8_t> serialize(const ColoredDigraph& g, const std::vector<int>& colors) {
    const int n = g.size();
    std::vector<int> rank(n);
    for (int v = 0; v < n; ++v) rank[v] = colors[v];
    std::vector<std::uint8_t> out;
    append_u32(out, static_cast<std::uint32_t>(n));
    append_u32(out, static_cast<std::uint32_t>(g.edges.size()));
    std::vector<int> orig_by_rank(n);
    for (int v = 0; v < n; ++v) orig_by_rank[rank[v]] = g.colors[v];
    for (int c : orig_by_rank) append_u32(out, static_cast<std::uint32_t>(c));
    std::vector<std::tuple<int, int, int>> edges;
    edges.reserve(g.edges.size());
    for (const auto& [u, v, l] : g.edges) edges.emplace_back(rank[u], rank[v], l);
    std::sort(edges.begin(), edges.end());
    for (const auto& [u, v, l] : edges) {
        append_u32(out, static_cast<std::uint32_t>(u));
        append_u32(out, static_cast<std::uint32_t>(v));
        append_u32(out, static_cast<std::uint32_t>(l));
    }
    return out;
}

struct Search {
    const ColoredDigraph& g;
    const Adjacency& adj;
    std::vector<std::uint8_t> best = {};
    std::vector<int> best_order = {};
    bool have_best = false;

    void visit(const std::vector<int>& colors) {
        const int n = g.size();
        // first non-singleton class, by color id
        std::vector<int> count(class_count(colors), 0);
        for (int c : colors) ++count[c];
        int target = -1;
        for (int c = 0; c < static_cast<int>(count.size()); ++c) {
            if (count[c] > 1) { target = c; break; }
        }
        if (target < 0) {
            auto bytes = serialize(g, colors);
            if (!have_best || bytes < best) {
                best = std::move(bytes);
                best_order.assign(n, 0);
                for (int v = 0; v < n; ++v) best_order[colors[v]] = v;
                have_best = true;
            }
            return;
        }
        const int fresh = class_count(colors);
        for (int v = 0; v < n; ++v) {
            if (colors[v] != target) continue;
            auto branched = colors;
            branched[v] = fresh;
            visit(refine(adj, std::move(branched)));
        }
    }
};

std::pair<std::vector<std::uint8_t>, std::vector<int>> canonicalize(const ColoredDigraph& g) {
    if (g.size() == 0) {
        std::vector<std::uint8_t> empty;
        append_u32(empty, 0);
        append_u32(empty, 0);
        return {empty, {}};
    }
    // normalize caller colors to dense ids, preserving their order
    std::map<int, int> dense;
    for (int c : g.colors) dense.emplace(c, 0);
    int next = 0;
    for (auto& [c, id] : dense) id = next++;
    std::vector<int> colors(g.size());
    for (int v = 0; v < g.size(); ++v) colors[v] = dense[g.colors[v]];

    Adjacency adj(g);
    Search search{g, adj};
    search.visit(refine(adj, std::move(colors)));
    return {std::move(search.best), std::move(search.best_order)};
}

} // namespace

CanonicalKey canonical_key(const ColoredDigraph& g) {
    return CanonicalKey{canonicalize(g).first};
}

std::vector<int> canonical_order(const ColoredDigraph& g) {
    return canonicalize(g).second;
}

std::string CanonicalKey::digest(std::size_t hex_chars) const {
    // FNV-1a over the key bytes, rendered as hex
    std::uint64_t h = 1469598103934665603ull;
    for (std::uint8_t b : bytes) {
        h ^= b;
        h *= 1099511628211ull;
    }
    static const char* hex = "0123456789abcdef";
    std::string s;
    for (std::size_t i = 0; i < hex_chars && i < 16; ++i) {
        s.push_back(hex[(h >> (60 - 4 * i)) & 0xf]);
    }
    return s;
}

} // namespace causalforge
