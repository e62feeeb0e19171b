#ifndef HYPFILL_FILLING_HPP
#define HYPFILL_FILLING_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "hypfill/metric_space.hpp"

namespace hypfill {

// How two dilated balls B(v) = B(center, tau * a^level) are tested for
// intersection inside the finite space:
//   WitnessScan — some sample point lies strictly inside both balls
//                 (the default; matches the open-ball reading literally),
//   CenterSum   — d(centers) < tau * (a^h(v) + a^h(w)) (the relaxation that
//                 treats Z as if it were dense).
// WitnessScan implies CenterSum, never the other way around.  Knife-edge
// configurations (a witness exactly on a ball boundary) flip under 1e-12
// perturbations of tau; ties are broken by the strict inequality.
enum class IntersectionMode { WitnessScan, CenterSum };

struct FillingParams {
    double a = 0.5;    // level scale, in (0,1)
    double tau = 4.0;  // ball dilation; must satisfy tau > max{3, 1/(1-a)}
    int n_min = 0;     // coarsest level (most negative = coarsest)
    int n_max = 0;     // finest level
    IntersectionMode mode = IntersectionMode::WitnessScan;
    std::uint64_t order_seed = 0;  // net ordering: 0 = input order, else shuffle

    double radius(int level) const;  // tau * a^level
    void validate() const;           // throws InputError on bad a/tau/window
};

struct Vertex {
    int id = -1;      // dense, level-major from n_min upward
    int level = 0;    // height h(v)
    int center = -1;  // index into the underlying space
};

/// The level-graph built over maximal a^n-separated nets S_n of a finite
/// space Z: one vertex per net point per level n in [n_min, n_max], an edge
/// between distinct vertices whose levels differ by at most 1 and whose
/// dilated balls intersect.  Height h = level.  Because greedy nets at
/// distinct levels are independent, growing n_max extends the graph without
/// disturbing existing levels or ids.
class FillingGraph {
  public:
    FillingParams params;
    std::vector<Vertex> vertices;
    std::vector<std::vector<int>> adjacency;  // sorted neighbor ids
    // space is absent for graphs re-imported from JSON; operations that
    // need the underlying metric check for it.
    std::optional<FiniteMetricSpace> space;

    int size() const { return static_cast<int>(vertices.size()); }
    int level_of(int v) const { return vertices[v].level; }
    int center_of(int v) const { return vertices[v].center; }
    bool has_edge(int v, int w) const;
    bool is_horizontal(int v, int w) const { return level_of(v) == level_of(w); }
    std::size_t edge_count() const;

    /// Vertex ids of level n, in net acceptance order.
    const std::vector<int>& level_vertices(int n) const;
    /// Vertex at (level, center); -1 if that point is not a net point there.
    int vertex_at(int level, int center) const;

    const FiniteMetricSpace& space_ref() const;

    // internal, kept public for the builder/importer
    std::vector<std::vector<int>> levels_;  // [n - n_min] -> vertex ids
    std::vector<std::vector<int>> center_to_vertex_;  // [n - n_min][center] -> id
};

/// Build the filling.  Nets are greedy in the seeded order (net_order), one
/// independent pass per level, so rebuilding with a larger n_max reproduces
/// all shared levels verbatim.
FillingGraph build_filling(const FiniteMetricSpace& Z, const FillingParams& p);

/// The edge predicate, re-evaluable for audit: do the dilated balls of v
/// and w intersect under the graph's mode?  (Level gap is not checked
/// here.)  Returns the witness index in witness mode, -1 otherwise.
bool balls_intersect(const FillingGraph& G, int v, int w, int* witness = nullptr);

/// All vertices reachable from v by strictly descending vertical edge paths
/// (one level down per step).  Includes v.  Sorted by id.
std::vector<int> descending_closure(const FillingGraph& G, int v);

struct BranchPointResult {
    int vertex = -1;              // the branch point: max height, ties by min id
    std::vector<int> cone_points; // every common descending vertex, sorted
};

/// Branch point of {v, w}: the highest vertex joined to both by descending
/// vertical paths.  Throws InputError if the truncated window admits none
/// (n_min too high); with a^n_min > diam Z the bottom level is a single
/// vertex, so one always exists.
BranchPointResult branch_point(const FillingGraph& G, int v, int w);

/// The descending ray anchored at sample point z: at each level from n_top
/// down to n_min pick the net vertex whose center is nearest to z (ties by
/// smaller id).  Maximality puts the nearest center within a^n < (tau/3)a^n
/// of z, and z itself witnesses the ball intersection of consecutive picks,
/// so the ray is a vertical path; both facts are asserted.
std::vector<int> anchored_descending_ray(const FillingGraph& G, int z, int n_top);

nlohmann::json graph_to_json(const FillingGraph& G);
FillingGraph graph_from_json(const nlohmann::json& j,
                             std::optional<FiniteMetricSpace> space = {});
/// DOT rendering, levels as ranks.  Refuses graphs with >= 2000 vertices.
std::string graph_to_dot(const FillingGraph& G);

/// Assemble a graph from explicit parts (tests, synthetic gadgets, import).
/// Vertices must be grouped by level in id order; edges are (u, v) pairs.
FillingGraph graph_from_parts(const FillingParams& p,
                              const std::vector<std::pair<int, int>>& level_center,
                              const std::vector<std::pair<int, int>>& edges,
                              std::optional<FiniteMetricSpace> space = {});

}  // namespace hypfill

#endif
