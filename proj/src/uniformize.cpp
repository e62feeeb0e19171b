#include "hypfill/uniformize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace hypfill {

double EpsilonWeighting::beta() const { return -epsilon / std::log(a); }

bool EpsilonWeighting::beyond_bilip() const { return epsilon > -std::log(a); }

double EpsilonWeighting::density(double height) const {
    return std::exp(-epsilon * height);
}

double EpsilonWeighting::edge_length(int level_u, int level_v) const {
    const int k = std::min(level_u, level_v);
    if (level_u == level_v) return density(k);
    return (1.0 - std::exp(-epsilon)) / epsilon * density(k);
}

double EpsilonWeighting::tail(int n) const { return density(n) / epsilon; }

double EpsilonWeighting::truncated_tail(int n, int n_top) const {
    return (density(n) - density(n_top)) / epsilon;
}

void EpsilonWeighting::validate() const {
    if (!(epsilon > 0.0)) throw InputError("epsilon must be positive");
    if (!(a > 0.0 && a < 1.0)) throw InputError("a must lie in (0, 1)");
}

WeightedPaths compute_weighted_paths(const FillingGraph& G,
                                     const EpsilonWeighting& w) {
    w.validate();
    const int n = G.size();
    if (n > 5000)
        throw InputError("all-pairs weighted table refused above 5000 vertices");
    WeightedPaths wp;
    const double inf = std::numeric_limits<double>::infinity();
    wp.dist.setConstant(n, n, inf);
    wp.pred.setConstant(n, n, -1);
    using Item = std::pair<double, int>;
    for (int src = 0; src < n; ++src) {
        auto dist = wp.dist.row(src);
        std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
        dist(src) = 0.0;
        pq.emplace(0.0, src);
        while (!pq.empty()) {
            const auto [du, u] = pq.top();
            pq.pop();
            if (du > dist(u)) continue;
            for (int v : G.adjacency[u]) {
                const double cand =
                    du + w.edge_length(G.level_of(u), G.level_of(v));
                if (cand < dist(v)) {
                    dist(v) = cand;
                    pq.emplace(cand, v);
                }
            }
        }
        // Deterministic witness: smallest-id neighbor that realizes the
        // final distance bit-exactly (the relaxation that set it is among
        // the candidates, so one always matches).
        for (int v = 0; v < n; ++v) {
            if (v == src || dist(v) == inf) continue;
            for (int u : G.adjacency[v])
                if (dist(u) + w.edge_length(G.level_of(u), G.level_of(v)) ==
                    dist(v)) {
                    wp.pred(src, v) = u;
                    break;
                }
        }
    }
    return wp;
}

GeodesicPath weighted_path(const WeightedPaths& wp, int u, int v) {
    if (!std::isfinite(wp.dist(u, v)))
        throw InputError("no path between the requested vertices");
    GeodesicPath rev{v};
    while (rev.back() != u) {
        const int p = wp.pred(u, rev.back());
        check(p >= 0, "broken predecessor chain in weighted table");
        rev.push_back(p);
    }
    return {rev.rbegin(), rev.rend()};
}

double path_length_eps(const FillingGraph& G, const EpsilonWeighting& w,
                       const GeodesicPath& path) {
    double len = 0.0;
    for (size_t i = 0; i + 1 < path.size(); ++i)
        len += w.edge_length(G.level_of(path[i]), G.level_of(path[i + 1]));
    return len;
}

namespace {

// The anchored pick of z at one level: nearest net center, ties by id.
int level_pick(const FillingGraph& G, int z, int level) {
    const auto& Z = G.space_ref();
    int best = -1;
    double best_d = 0.0;
    for (int u : G.level_vertices(level)) {
        const double d = Z.dist(z, G.center_of(u));
        if (best < 0 || d < best_d || (d == best_d && u < best)) {
            best = u;
            best_d = d;
        }
    }
    check(best >= 0, "empty net level");
    return best;
}

}  // namespace

BoundaryDistanceInterval boundary_distance(const FillingGraph& G,
                                           const WeightedPaths& wp,
                                           const EpsilonWeighting& w, int z1,
                                           int z2) {
    BoundaryDistanceInterval r;
    r.level_used = G.params.n_max;
    if (z1 == z2) {
        // Same anchor, same ray, same boundary point: exactly zero.
        r.via_u = r.via_v = level_pick(G, z1, r.level_used);
        return r;
    }
    r.via_u = level_pick(G, z1, r.level_used);
    r.via_v = level_pick(G, z2, r.level_used);
    r.center = wp(r.via_u, r.via_v);
    r.tail_bound = 2.0 * w.tail(r.level_used);
    r.lower = r.center - r.tail_bound;
    r.upper = r.center + r.tail_bound;
    return r;
}

BoundaryGauge boundary_gauge(const FillingGraph& G, const WeightedPaths& wp,
                             const EpsilonWeighting& w) {
    const auto& Z = G.space_ref();
    BoundaryGauge g;
    const int n_top = G.params.n_max;
    g.top_vertex.resize(Z.size());
    for (int z = 0; z < Z.size(); ++z) g.top_vertex[z] = level_pick(G, z, n_top);
    const double tail_top = w.tail(n_top);
    g.proxy.resize(G.size());
    g.empirical.resize(G.size());
    for (int x = 0; x < G.size(); ++x) {
        g.proxy[x] = w.tail(G.level_of(x));
        double best = std::numeric_limits<double>::infinity();
        for (int t : g.top_vertex) best = std::min(best, wp(x, t));
        g.empirical[x] = best + tail_top;
    }
    return g;
}

UniformCurveStats check_uniform_curve(const FillingGraph& G,
                                      const EpsilonWeighting& w,
                                      const WeightedPaths& wp,
                                      const BoundaryGauge& gauge,
                                      const GeodesicPath& path) {
    UniformCurveStats s;
    if (path.size() < 2) return s;
    std::vector<double> prefix(path.size(), 0.0);
    for (size_t i = 0; i + 1 < path.size(); ++i)
        prefix[i + 1] =
            prefix[i] + w.edge_length(G.level_of(path[i]), G.level_of(path[i + 1]));
    const double total = prefix.back();
    const double endpoint = wp(path.front(), path.back());
    s.length_ratio = endpoint > 0.0 ? total / endpoint : 1.0;
    for (size_t i = 1; i + 1 < path.size(); ++i) {
        const double sub = std::min(prefix[i], total - prefix[i]);
        s.cigar_ratio = std::max(s.cigar_ratio, sub / gauge.empirical[path[i]]);
    }
    return s;
}

AdmissibilityResult measure_admissibility(const FillingGraph& G,
                                          const EpsilonWeighting& w,
                                          const ShortestPaths& sp,
                                          const WeightedPaths& wp) {
    AdmissibilityResult r;
    for (int u = 0; u < G.size(); ++u)
        for (int v = u + 1; v < G.size(); ++v) {
            const double len = path_length_eps(G, w, geodesic_path(sp, u, v));
            const double ratio = len / wp(u, v);
            ++r.pairs;
            if (ratio > r.M) {
                r.M = ratio;
                r.worst_u = u;
                r.worst_v = v;
            }
        }
    return r;
}

}  // namespace hypfill
