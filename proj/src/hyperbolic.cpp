#include "hypfill/hyperbolic.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <random>

namespace hypfill {

ShortestPaths compute_shortest_paths(const FillingGraph& G) {
    const int n = G.size();
    ShortestPaths sp;
    sp.dist.setConstant(n, n, ShortestPaths::kInf);
    sp.pred.setConstant(n, n, -1);
    std::vector<int> q;
    q.reserve(n);
    for (int src = 0; src < n; ++src) {
        auto dist = sp.dist.row(src);
        dist(src) = 0;
        q.assign(1, src);
        for (size_t head = 0; head < q.size(); ++head) {
            const int u = q[head];
            for (int w : G.adjacency[u])
                if (dist(w) == ShortestPaths::kInf) {
                    dist(w) = dist(u) + 1;
                    q.push_back(w);
                }
        }
        // Deterministic witness: predecessor = smallest-id neighbor one
        // layer closer to the source.
        for (int v : q) {
            if (v == src) continue;
            for (int w : G.adjacency[v])
                if (dist(w) == dist(v) - 1) {
                    sp.pred(src, v) = w;
                    break;  // adjacency is sorted ascending
                }
        }
    }
    return sp;
}

GeodesicPath geodesic_path(const ShortestPaths& sp, int u, int v) {
    if (sp.dist(u, v) >= ShortestPaths::kInf)
        throw InputError("no path between the requested vertices");
    GeodesicPath rev{v};
    while (rev.back() != u) rev.push_back(sp.pred(u, rev.back()));
    return {rev.rbegin(), rev.rend()};
}

double gromov_product_base(const ShortestPaths& sp, int x, int y, int p) {
    return 0.5 * (sp(x, p) + sp(y, p) - sp(x, y));
}

double gromov_product_height(const FillingGraph& G, const ShortestPaths& sp,
                             int x, int y) {
    return 0.5 * (G.level_of(x) + G.level_of(y) - sp(x, y));
}

namespace {

double quad_defect(const Eigen::MatrixXi& D, int p, int x, int y, int z) {
    const double pxy = 0.5 * (D(x, p) + D(y, p) - D(x, y));
    const double pyz = 0.5 * (D(y, p) + D(z, p) - D(y, z));
    const double pxz = 0.5 * (D(x, p) + D(z, p) - D(x, z));
    return std::min(pxy, pyz) - pxz;
}

}  // namespace

DeltaResult delta_four_point(const ShortestPaths& sp, const DeltaOptions& opt) {
    const int n = static_cast<int>(sp.dist.rows());
    if (!sp.connected())
        throw InputError("four-point delta needs a connected graph");
    DeltaResult r;
    if (opt.exact) {
        // Per base point, materialize the product matrix once, then sweep
        // all (x, y, z).  O(n^4) total but cache-friendly.
        Eigen::MatrixXd P(n, n);
        double worst = 0.0;
        for (int p = 0; p < n; ++p) {
            for (int x = 0; x < n; ++x) {
                const double dxp = sp.dist(x, p);
                for (int y = 0; y < n; ++y)
                    P(x, y) = 0.5 * (dxp + sp.dist(y, p) - sp.dist(x, y));
            }
            for (int x = 0; x < n; ++x) {
                const double* Px = P.data() + static_cast<std::ptrdiff_t>(x) * n;
                for (int y = 0; y < n; ++y) {
                    const double* Py = P.data() + static_cast<std::ptrdiff_t>(y) * n;
                    const double pxy = Px[y];
                    for (int z = 0; z < n; ++z) {
                        const double defect = std::min(pxy, Py[z]) - Px[z];
                        if (defect > worst) worst = defect;
                    }
                }
            }
            r.quadruples += static_cast<std::uint64_t>(n) * n * n;
        }
        r.delta = worst;
    } else {
        std::mt19937_64 rng(opt.seed);
        std::uniform_int_distribution<int> pick(0, n - 1);
        double worst = 0.0;
        for (std::uint64_t i = 0; i < opt.count; ++i) {
            const int p = pick(rng), x = pick(rng), y = pick(rng), z = pick(rng);
            worst = std::max(worst, quad_defect(sp.dist, p, x, y, z));
        }
        r.delta = worst;
        r.quadruples = opt.count;
    }
    return r;
}

double height_product_defect(const FillingGraph& G, const ShortestPaths& sp) {
    const int n = G.size();
    Eigen::MatrixXd P(n, n);
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v)
            P(u, v) = 0.5 * (G.level_of(u) + G.level_of(v) - sp.dist(u, v));
    double worst = 0.0;
    for (int u = 0; u < n; ++u) {
        const double* Pu = P.data() + static_cast<std::ptrdiff_t>(u) * n;
        for (int v = 0; v < n; ++v) {
            const double* Pv = P.data() + static_cast<std::ptrdiff_t>(v) * n;
            const double puv = Pu[v];
            for (int w = 0; w < n; ++w)
                worst = std::max(worst, std::min(puv, Pv[w]) - Pu[w]);
        }
    }
    return worst;
}

bool is_delta_triple(double a, double b, double c, double delta) {
    std::array<double, 3> t{a, b, c};
    std::sort(t.begin(), t.end());
    return t[1] - t[0] <= delta;
}

TetrahedronCheck tetrahedron_check(const std::array<double, 6>& d, double delta) {
    const double d12 = d[0], d13 = d[1], d14 = d[2], d23 = d[3], d24 = d[4],
                 d34 = d[5];
    TetrahedronCheck r;
    r.hypotheses = is_delta_triple(d23, d24, d34, delta) &&
                   is_delta_triple(d13, d14, d34, delta) &&
                   is_delta_triple(d12, d14, d24, delta) &&
                   is_delta_triple(d12, d13, d23, delta);
    r.conclusion =
        is_delta_triple(d12 + d34, d13 + d24, d14 + d23, 2.0 * delta);
    return r;
}

EquiradialTriple canonical_equiradial(const ShortestPaths& sp,
                                      const GeodesicPath& xy,
                                      const GeodesicPath& xz,
                                      const GeodesicPath& yz) {
    const int x = xy.front(), y = xy.back(), z = xz.back();
    if (xz.front() != x || yz.front() != y || yz.back() != z)
        throw InputError("geodesic endpoints do not form a consistent triangle");
    EquiradialTriple e;
    e.r_x = gromov_product_base(sp, y, z, x);
    e.r_y = gromov_product_base(sp, x, z, y);
    e.r_z = gromov_product_base(sp, x, y, z);
    const int sx = static_cast<int>(std::floor(e.r_x));  // distance from x
    const int sy = static_cast<int>(std::floor(e.r_y));  // distance from y
    e.on_xy = xy[sx];
    e.on_xz = xz[sx];
    e.on_yz = yz[sy];
    e.diameter = std::max({sp(e.on_xy, e.on_xz), sp(e.on_xy, e.on_yz),
                           sp(e.on_xz, e.on_yz)});
    return e;
}

namespace {

struct TripodPoint {
    int leg;    // 0 = toward x, 1 = toward y, 2 = toward z
    int coord;  // distance from the center along that leg
};

double tripod_dist(TripodPoint p, TripodPoint q) {
    return p.leg == q.leg ? std::abs(p.coord - q.coord) : p.coord + q.coord;
}

}  // namespace

TripodDefect tripod_defect(const ShortestPaths& sp, const GeodesicPath& xy,
                           const GeodesicPath& xz, const GeodesicPath& yz) {
    const EquiradialTriple e = canonical_equiradial(sp, xy, xz, yz);
    const int sx = static_cast<int>(std::floor(e.r_x));
    const int sy = static_cast<int>(std::floor(e.r_y));
    // Fold each side onto two legs at its split point.  Corner images from
    // the two incident sides can disagree by 1 (the rounding bound).
    auto map_side = [](const GeodesicPath& side, int split, int leg_lo,
                       int leg_hi, std::vector<TripodPoint>& out) {
        for (int i = 0; i < static_cast<int>(side.size()); ++i)
            out.push_back(i <= split ? TripodPoint{leg_lo, split - i}
                                     : TripodPoint{leg_hi, i - split});
    };
    std::array<const GeodesicPath*, 3> sides{&xy, &xz, &yz};
    std::array<std::vector<TripodPoint>, 3> images;
    map_side(xy, sx, 0, 1, images[0]);
    map_side(xz, sx, 0, 2, images[1]);
    map_side(yz, sy, 1, 2, images[2]);

    TripodDefect r;
    for (int s = 0; s < 3; ++s)
        for (int t = s + 1; t < 3; ++t) {
            const auto& A = *sides[s];
            const auto& B = *sides[t];
            for (size_t i = 0; i < A.size(); ++i)
                for (size_t j = 0; j < B.size(); ++j) {
                    const double gap = std::abs(
                        tripod_dist(images[s][i], images[t][j]) - sp(A[i], B[j]));
                    r.defect = std::max(r.defect, gap);
                    ++r.pairs;
                }
        }
    return r;
}

BusemannField busemann_field(const FillingGraph& G, const ShortestPaths& sp,
                             const std::vector<int>& ray) {
    if (ray.empty()) throw InputError("empty ray");
    const int n = G.size();
    BusemannField f;
    f.ray = ray;
    f.start_level = G.level_of(ray.front());
    f.value.assign(n, 0.0);
    f.zero_run.assign(n, 0);
    for (int x = 0; x < n; ++x) {
        double prev = 0.0;
        for (int t = 0; t < static_cast<int>(ray.size()); ++t) {
            if (sp.dist(ray[t], x) >= ShortestPaths::kInf)
                throw InputError("ray vertex disconnected from the graph");
            const double bt = sp.dist(ray[t], x) - t;
            if (t > 0) {
                check(bt <= prev + 1e-12,
                      "busemann maximand failed to be nonincreasing");
                f.zero_run[x] = bt == prev ? f.zero_run[x] + 1 : 0;
            }
            prev = bt;
        }
        f.value[x] = prev;
    }
    return f;
}

bool BusemannField::all_stabilized(int runs) const {
    for (int z : zero_run)
        if (z < runs) return false;
    return true;
}

BusemannEstimate busemann_estimate(const FillingGraph& G, const ShortestPaths& sp,
                                   const std::vector<int>& ray, int x) {
    const BusemannField f = busemann_field(G, sp, ray);
    return {f.value[x], f.stabilized(x), static_cast<int>(ray.size())};
}

double gromov_product_busemann(const BusemannField& b, const ShortestPaths& sp,
                               int x, int y) {
    return 0.5 * (b.value[x] + b.value[y] - sp(x, y));
}

double adapted_defect(const GeodesicPath& path, const std::vector<double>& f) {
    if (path.empty()) throw InputError("empty path");
    const int L = static_cast<int>(path.size()) - 1;
    const double product = 0.5 * (f[path.front()] + f[path.back()] - L);
    int i0 = 0;
    for (int i = 1; i <= L; ++i)
        if (f[path[i]] < f[path[i0]]) i0 = i;
    double worst = 0.0;
    for (int i = 0; i <= L; ++i)
        worst = std::max(worst,
                         std::abs(f[path[i]] - std::abs(i - i0) - product));
    return worst;
}

}  // namespace hypfill
