#ifndef HYPFILL_METRIC_SPACE_HPP
#define HYPFILL_METRIC_SPACE_HPP

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "hypfill/errors.hpp"

namespace hypfill {

/// A finite metric space: opaque point ids plus a dense symmetric distance
/// matrix.  Point-cloud constructors keep the coordinates around for export;
/// everything downstream goes through dist().
///
/// Validation is tolerance-aware: violations within tol (relative to the
/// diameter) are warnings, anything beyond is a hard error.  The default
/// tolerance is 1e-9 * diameter.
class FiniteMetricSpace {
  public:
    FiniteMetricSpace() = default;

    /// Build from an explicit matrix.  Throws InputError on violations
    /// beyond tolerance (symmetry, zero diagonal, positivity, triangle
    /// inequality), naming the offending pair/triple.
    static FiniteMetricSpace from_matrix(std::vector<std::string> ids,
                                         Eigen::MatrixXd d,
                                         double rel_tol = 1e-9);

    enum class PointMetric { Euclidean, Chebyshev };

    /// Build from a point cloud (rows of `coords` are points).  `theta` in
    /// (0,1] snowflakes the base metric: d_theta = d^theta.  theta = 1 is
    /// the plain metric.
    static FiniteMetricSpace from_points(std::vector<std::string> ids,
                                         Eigen::MatrixXd coords,
                                         PointMetric metric = PointMetric::Euclidean,
                                         double theta = 1.0);

    int size() const { return static_cast<int>(ids_.size()); }
    const std::string& id(int i) const { return ids_[i]; }
    const std::vector<std::string>& ids() const { return ids_; }
    double dist(int i, int j) const { return d_(i, j); }
    const Eigen::MatrixXd& matrix() const { return d_; }
    const std::optional<Eigen::MatrixXd>& coords() const { return coords_; }

    double diameter() const;
    /// Smallest nonzero pairwise distance; +inf for a one-point space.
    double min_positive_distance() const;

    /// Same points, all distances multiplied by s > 0.  Coordinates are
    /// dropped (the scaling is on the metric, not on any embedding).
    FiniteMetricSpace scaled(double s) const;
    /// Entrywise d^theta, theta in (0,1].  Preserves the triangle
    /// inequality, so the result validates cleanly.
    FiniteMetricSpace snowflaked(double theta) const;

    int index_of(const std::string& id) const;  // -1 if absent

  private:
    std::vector<std::string> ids_;
    Eigen::MatrixXd d_;
    std::optional<Eigen::MatrixXd> coords_;
};

struct MetricViolation {
    enum class Kind { Symmetry, Diagonal, Positivity, Triangle } kind;
    int i = -1, j = -1, k = -1;  // offending indices (k only for Triangle)
    double magnitude = 0.0;      // how far past exact the violation is
    std::string describe(const FiniteMetricSpace& M) const;
};

struct ValidationReport {
    std::vector<MetricViolation> errors;    // beyond tolerance
    std::vector<MetricViolation> warnings;  // within tolerance
    double tol_abs = 0.0;
    bool ok() const { return errors.empty(); }
};

/// Report-only validation of a raw matrix (exhaustive O(n^3) triangle scan).
ValidationReport validate_metric(const Eigen::MatrixXd& d, double rel_tol = 1e-9);

/// Greedy maximal r-separated subset: walk the points in `order` (a
/// permutation of 0..n-1; empty means input order) and keep a point iff it
/// is at distance >= r from everything kept so far.  The result is
/// r-separated and maximal: every rejected point is within < r of a kept
/// one.  Returned in acceptance order.
std::vector<int> maximal_separated_net(const FiniteMetricSpace& M, double r,
                                       const std::vector<int>& order = {});

/// Deterministic point ordering for net construction: identity for seed 0,
/// otherwise a seeded shuffle.  One seed drives every level of a filling.
std::vector<int> net_order(int n, std::uint64_t seed);

struct ScaleStats {
    double diameter = 0.0;
    double min_positive = 0.0;
    // Smallest window such that a^n_min > diameter (level-n_min net is a
    // single point) and a^n_max < min positive distance (level-n_max net is
    // all of Z).
    int suggested_n_min = 0;
    int suggested_n_max = 0;
    bool degenerate = false;  // one-point space: window is a free choice
    bool clamped = false;     // window hit the max_levels cap
};

ScaleStats scale_stats(const FiniteMetricSpace& M, double a, int max_levels = 64);

/// File loading.  CSV distance matrix: a header row of point ids, then
/// n rows of n comma-separated distances (an optional leading row label is
/// accepted and must match the header ids).  Point-cloud JSON: an array of
/// {"id": str, "coords": [x, ...]} objects.
FiniteMetricSpace load_metric_csv(const std::string& path, double rel_tol = 1e-9);
FiniteMetricSpace load_metric_points(const std::string& path,
                                     FiniteMetricSpace::PointMetric metric =
                                         FiniteMetricSpace::PointMetric::Euclidean,
                                     double theta = 1.0);

}  // namespace hypfill

#endif
