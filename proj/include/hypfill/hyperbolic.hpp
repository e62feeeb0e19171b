#ifndef HYPFILL_HYPERBOLIC_HPP
#define HYPFILL_HYPERBOLIC_HPP

#include <array>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "hypfill/filling.hpp"

namespace hypfill {

/// Unit geodesics: a path realizing the hop distance.
using GeodesicPath = std::vector<int>;

/// All-pairs BFS over the unweighted graph, materialized (fine up to a few
/// thousand vertices).  pred(u, v) is the predecessor of v on the canonical
/// geodesic from u, chosen as the smallest-id neighbor of v one BFS layer
/// closer to u — fully deterministic, but path(u,v) need not be the
/// reverse of path(v,u).
struct ShortestPaths {
    static constexpr int kInf = std::numeric_limits<int>::max() / 4;
    Eigen::MatrixXi dist;
    Eigen::MatrixXi pred;  // -1 at the source / unreachable
    bool connected() const { return dist.maxCoeff() < kInf; }
    int operator()(int u, int v) const { return dist(u, v); }
};

ShortestPaths compute_shortest_paths(const FillingGraph& G);

/// Canonical geodesic from u to v (inclusive).  Throws InputError if the
/// pair is disconnected.
GeodesicPath geodesic_path(const ShortestPaths& sp, int u, int v);

/// Gromov product (x|y)_p = (|xp| + |yp| - |xy|) / 2, a half-integer.
double gromov_product_base(const ShortestPaths& sp, int x, int y, int p);

/// Height-based product (x|y)_h = (h(x) + h(y) - |xy|) / 2.  Because h is
/// 1-Lipschitz along edges this never exceeds min{h(x), h(y)}.
double gromov_product_height(const FillingGraph& G, const ShortestPaths& sp,
                             int x, int y);

struct DeltaOptions {
    bool exact = true;
    std::uint64_t seed = 0;       // sampled mode only
    std::uint64_t count = 100000; // sampled mode only
};

struct DeltaResult {
    double delta = 0.0;
    std::uint64_t quadruples = 0;  // how many (p,x,y,z) were inspected
};

/// Smallest delta' with (x|z)_p >= min{(x|y)_p, (y|z)_p} - delta' over the
/// inspected quadruples.  Exact mode enumerates all of them (O(n^4): keep
/// the graph small); sampled mode draws them from a seeded PRNG and is a
/// lower bound for the exact value.
DeltaResult delta_four_point(const ShortestPaths& sp, const DeltaOptions& opt);

/// Max over all vertex triples of min{(u|v)_h, (v|w)_h} - (u|w)_h: the
/// additive defect of the height product's ultrametric-style inequality.
double height_product_defect(const FillingGraph& G, const ShortestPaths& sp);

/// A triple is a delta-triple when its two smallest entries differ by at
/// most delta.
bool is_delta_triple(double a, double b, double c, double delta);

struct TetrahedronCheck {
    bool hypotheses = false;  // all four face triples are delta-triples
    bool conclusion = false;  // the three pair sums form a 2*delta-triple
};

/// Six pairwise values among four items, ordered d12, d13, d14, d23, d24,
/// d34.  Faces are the four triples omitting one item; the conclusion
/// triple is (d12+d34, d13+d24, d14+d23).
TetrahedronCheck tetrahedron_check(const std::array<double, 6>& d, double delta);

/// Equiradial points of the triangle on the given unit geodesics: on side
/// xy the point at arclength (y|z)_x from x, etc.  Arclengths are
/// half-integers; each is rounded down toward its measuring corner, which
/// keeps the two splits at distance floor((y|z)_x) from x consistent and
/// costs at most +1 in the diameter.
struct EquiradialTriple {
    int on_yz = -1, on_xz = -1, on_xy = -1;  // opposite x, y, z respectively
    double r_x = 0, r_y = 0, r_z = 0;        // exact products (y|z)_x, ...
    double diameter = 0;                     // max pairwise hop distance
};

EquiradialTriple canonical_equiradial(const ShortestPaths& sp,
                                      const GeodesicPath& xy,
                                      const GeodesicPath& xz,
                                      const GeodesicPath& yz);

/// Defect of the tripod map determined by the equiradial splits: each side
/// folds isometrically onto two legs of a metric tripod; the defect is the
/// max over cross-side vertex pairs of |tripod distance - hop distance|.
/// Same-side pairs cancel exactly and are skipped.
struct TripodDefect {
    double defect = 0.0;
    std::uint64_t pairs = 0;
};

TripodDefect tripod_defect(const ShortestPaths& sp, const GeodesicPath& xy,
                           const GeodesicPath& xz, const GeodesicPath& yz);

/// Busemann estimate along an anchored descending ray, evaluated on every
/// vertex at once.  With t the arclength index from the ray's start, the
/// sequence d(ray[t], x) - t is nonincreasing in t (triangle inequality
/// against the geodesic ray) and integer-valued, hence eventually constant;
/// the estimate takes the deepest value, a certified upper bound for the
/// limit.  Monotonicity is asserted exactly.
struct BusemannField {
    std::vector<int> ray;
    int start_level = 0;
    std::vector<double> value;   // per vertex
    std::vector<int> zero_run;   // trailing count of zero increments
    bool stabilized(int x, int runs = 3) const { return zero_run[x] >= runs; }
    bool all_stabilized(int runs = 3) const;
};

BusemannField busemann_field(const FillingGraph& G, const ShortestPaths& sp,
                             const std::vector<int>& ray);

struct BusemannEstimate {
    double value = 0.0;
    bool stabilized = false;
    int levels_used = 0;
};

BusemannEstimate busemann_estimate(const FillingGraph& G, const ShortestPaths& sp,
                                   const std::vector<int>& ray, int x);

/// Product with the Busemann field in place of distance to a base point:
/// (x|y)_b = (b(x) + b(y) - |xy|) / 2.
double gromov_product_busemann(const BusemannField& b, const ShortestPaths& sp,
                               int x, int y);

/// Adapted-parametrization defect of a geodesic against a height-like
/// function f: re-index the path so t = 0 at its f-minimum; the defect is
/// max over path vertices of |f(v_t) - |t| - (x|y)_f| with
/// (x|y)_f = (f(first) + f(last) - length) / 2.
double adapted_defect(const GeodesicPath& path, const std::vector<double>& f);

}  // namespace hypfill

#endif
