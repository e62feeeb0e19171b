#ifndef HYPFILL_UNIFORMIZE_HPP
#define HYPFILL_UNIFORMIZE_HPP

#include <vector>

#include <Eigen/Dense>

#include "hypfill/filling.hpp"
#include "hypfill/hyperbolic.hpp"

namespace hypfill {

/// Exponential density rho_eps = e^{-eps*h} turned into edge lengths:
///   horizontal edge at height k:            e^{-eps*k}
///   vertical edge between k and k+1:        (1/eps)(1 - e^{-eps}) e^{-eps*k}
/// The vertical weight is the exact integral of the density across one
/// level, so vertical sums telescope; the horizontal weight is the density
/// at constant height.  beta = -eps / log a lies in (0,1] exactly when
/// eps <= -log a (the boundary-identification point is eps = -log a).
struct EpsilonWeighting {
    double epsilon = 1.0;
    double a = 0.5;

    double beta() const;
    bool beyond_bilip() const;  // eps > -log a: warn, don't reject
    double density(double height) const;        // e^{-eps*h}
    double edge_length(int level_u, int level_v) const;
    double tail(int n) const;                   // (1/eps) e^{-eps*n}
    double truncated_tail(int n, int n_top) const;
    void validate() const;                      // eps > 0
};

/// All-pairs weighted shortest paths (Dijkstra per source, nonnegative
/// weights, materialized; refuses > 5000 vertices).  pred(u, v) is the
/// smallest-id neighbor of v realizing dist(v) exactly.
struct WeightedPaths {
    Eigen::MatrixXd dist;
    Eigen::MatrixXi pred;
    double operator()(int u, int v) const { return dist(u, v); }
};

WeightedPaths compute_weighted_paths(const FillingGraph& G,
                                     const EpsilonWeighting& w);

GeodesicPath weighted_path(const WeightedPaths& wp, int u, int v);

/// Sum of edge lengths along an explicit vertex path.
double path_length_eps(const FillingGraph& G, const EpsilonWeighting& w,
                       const GeodesicPath& path);

/// Distance between the boundary points of two sample points, certified:
/// the centers of the level-n_top anchored picks are connected in the
/// truncated graph; each boundary point sits at most one infinite ray tail
/// (1/eps) e^{-eps*n_top} beyond its pick, so
///   interval = center -+ 2 (1/eps) e^{-eps*n_top}.
/// tail_bound stores that two-ray correction (upper - lower = 2*tail_bound).
/// Identical anchors short-circuit to the exact [0, 0].
struct BoundaryDistanceInterval {
    double center = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    double tail_bound = 0.0;
    int level_used = 0;
    int via_u = -1, via_v = -1;  // the level-n_top picks
};

BoundaryDistanceInterval boundary_distance(const FillingGraph& G,
                                           const WeightedPaths& wp,
                                           const EpsilonWeighting& w, int z1,
                                           int z2);

/// Distance-to-boundary at a vertex, both ways: the closed-form proxy
/// (1/eps) e^{-eps*h(x)} and the empirical minimum over sample points of
/// d_eps(x, top pick of z) + ray tail.  At vertices the empirical value
/// never exceeds the proxy (the vertex's own anchored ray realizes it).
struct BoundaryGauge {
    std::vector<double> proxy;
    std::vector<double> empirical;
    std::vector<int> top_vertex;  // per sample point, its level-n_top pick
};

BoundaryGauge boundary_gauge(const FillingGraph& G, const WeightedPaths& wp,
                             const EpsilonWeighting& w);

/// Both uniformity conditions for one curve: length vs endpoint distance,
/// and the cigar condition min(sublength either side) vs distance to the
/// boundary at each interior vertex.
struct UniformCurveStats {
    double length_ratio = 1.0;  // len / d_eps(endpoints)
    double cigar_ratio = 0.0;   // max_t min(pre, suf) / empirical boundary dist
    double A() const { return std::max(length_ratio, cigar_ratio); }
};

UniformCurveStats check_uniform_curve(const FillingGraph& G,
                                      const EpsilonWeighting& w,
                                      const WeightedPaths& wp,
                                      const BoundaryGauge& gauge,
                                      const GeodesicPath& path);

/// Admissibility of unit geodesics under the weighting: the max over pairs
/// of (eps-length of the canonical hop geodesic) / d_eps.
struct AdmissibilityResult {
    double M = 1.0;
    int worst_u = -1, worst_v = -1;
    std::uint64_t pairs = 0;
};

AdmissibilityResult measure_admissibility(const FillingGraph& G,
                                          const EpsilonWeighting& w,
                                          const ShortestPaths& sp,
                                          const WeightedPaths& wp);

}  // namespace hypfill

#endif
