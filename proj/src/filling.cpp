#include "hypfill/filling.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

namespace hypfill {

double FillingParams::radius(int level) const { return tau * std::pow(a, level); }

void FillingParams::validate() const {
    if (!(a > 0.0 && a < 1.0))
        throw InputError("filling parameter a must lie in (0, 1)");
    const double tau_floor = std::max(3.0, 1.0 / (1.0 - a));
    if (!(tau > tau_floor)) {
        std::ostringstream os;
        os << "tau = " << tau << " violates tau > max{3, 1/(1-a)} = " << tau_floor;
        throw InputError(os.str());
    }
    if (n_min > n_max) throw InputError("n_min must not exceed n_max");
}

bool FillingGraph::has_edge(int v, int w) const {
    const auto& nb = adjacency[v];
    return std::binary_search(nb.begin(), nb.end(), w);
}

std::size_t FillingGraph::edge_count() const {
    std::size_t twice = 0;
    for (const auto& nb : adjacency) twice += nb.size();
    return twice / 2;
}

const std::vector<int>& FillingGraph::level_vertices(int n) const {
    static const std::vector<int> empty;
    const int idx = n - params.n_min;
    if (idx < 0 || idx >= static_cast<int>(levels_.size())) return empty;
    return levels_[idx];
}

int FillingGraph::vertex_at(int level, int center) const {
    const int idx = level - params.n_min;
    if (idx < 0 || idx >= static_cast<int>(center_to_vertex_.size())) return -1;
    return center_to_vertex_[idx][center];
}

const FiniteMetricSpace& FillingGraph::space_ref() const {
    if (!space) throw InputError("operation requires the underlying metric space "
                                 "(graph was imported without one)");
    return *space;
}

namespace {

// Ball-intersection test on raw data; witness mode scans the sample points
// for one strictly inside both open balls.  The center-sum test is a
// necessary condition either way (triangle inequality), so it serves as a
// prefilter in witness mode.
bool balls_intersect_impl(const FiniteMetricSpace& Z, const FillingParams& p,
                          int center_v, int level_v, int center_w, int level_w,
                          IntersectionMode mode, int* witness) {
    if (witness) *witness = -1;
    const double rv = p.radius(level_v), rw = p.radius(level_w);
    if (!(Z.dist(center_v, center_w) < rv + rw)) return false;
    if (mode == IntersectionMode::CenterSum) return true;
    for (int z = 0; z < Z.size(); ++z)
        if (Z.dist(z, center_v) < rv && Z.dist(z, center_w) < rw) {
            if (witness) *witness = z;
            return true;
        }
    return false;
}

}  // namespace

bool balls_intersect(const FillingGraph& G, int v, int w, int* witness) {
    const auto& Z = G.space_ref();
    return balls_intersect_impl(Z, G.params, G.center_of(v), G.level_of(v),
                                G.center_of(w), G.level_of(w), G.params.mode,
                                witness);
}

FillingGraph build_filling(const FiniteMetricSpace& Z, const FillingParams& p) {
    p.validate();
    if (Z.size() == 0) throw InputError("cannot fill an empty space");
    FillingGraph G;
    G.params = p;
    G.space = Z;

    const std::vector<int> order = net_order(Z.size(), p.order_seed);
    for (int n = p.n_min; n <= p.n_max; ++n) {
        std::vector<int> net = maximal_separated_net(Z, std::pow(p.a, n), order);
        std::vector<int> ids;
        std::vector<int> lookup(Z.size(), -1);
        for (int c : net) {
            Vertex v;
            v.id = static_cast<int>(G.vertices.size());
            v.level = n;
            v.center = c;
            lookup[c] = v.id;
            ids.push_back(v.id);
            G.vertices.push_back(v);
        }
        G.levels_.push_back(std::move(ids));
        G.center_to_vertex_.push_back(std::move(lookup));
    }

    G.adjacency.assign(G.vertices.size(), {});
    auto link = [&](int u, int v) {
        G.adjacency[u].push_back(v);
        G.adjacency[v].push_back(u);
    };
    const int n_levels = static_cast<int>(G.levels_.size());
    for (int li = 0; li < n_levels; ++li) {
        const auto& here = G.levels_[li];
        for (size_t i = 0; i < here.size(); ++i)
            for (size_t j = i + 1; j < here.size(); ++j)
                if (balls_intersect_impl(Z, p, G.center_of(here[i]), G.level_of(here[i]),
                                         G.center_of(here[j]), G.level_of(here[j]),
                                         p.mode, nullptr))
                    link(here[i], here[j]);
        if (li + 1 < n_levels)
            for (int u : here)
                for (int v : G.levels_[li + 1])
                    if (balls_intersect_impl(Z, p, G.center_of(u), G.level_of(u),
                                             G.center_of(v), G.level_of(v), p.mode,
                                             nullptr))
                        link(u, v);
    }
    for (auto& nb : G.adjacency) std::sort(nb.begin(), nb.end());
    return G;
}

std::vector<int> descending_closure(const FillingGraph& G, int v) {
    std::vector<char> seen(G.size(), 0);
    std::vector<int> stack{v}, out;
    seen[v] = 1;
    while (!stack.empty()) {
        const int u = stack.back();
        stack.pop_back();
        out.push_back(u);
        for (int w : G.adjacency[u])
            if (G.level_of(w) == G.level_of(u) - 1 && !seen[w]) {
                seen[w] = 1;
                stack.push_back(w);
            }
    }
    std::sort(out.begin(), out.end());
    return out;
}

BranchPointResult branch_point(const FillingGraph& G, int v, int w) {
    const std::vector<int> cv = descending_closure(G, v);
    const std::vector<int> cw = descending_closure(G, w);
    BranchPointResult r;
    std::set_intersection(cv.begin(), cv.end(), cw.begin(), cw.end(),
                          std::back_inserter(r.cone_points));
    if (r.cone_points.empty())
        throw InputError("no common descending vertex for the pair; the window is "
                         "truncated too high (lower n_min)");
    // Max height wins; among those the smallest id.  cone_points is sorted by
    // id and ids are level-major, so the first vertex of the best level wins.
    int best = r.cone_points.front();
    for (int u : r.cone_points)
        if (G.level_of(u) > G.level_of(best)) best = u;
    for (int u : r.cone_points)
        if (G.level_of(u) == G.level_of(best) && u < best) best = u;
    r.vertex = best;
    return r;
}

std::vector<int> anchored_descending_ray(const FillingGraph& G, int z, int n_top) {
    const auto& Z = G.space_ref();
    if (z < 0 || z >= Z.size()) throw InputError("anchor index out of range");
    if (n_top < G.params.n_min || n_top > G.params.n_max)
        throw InputError("ray top level outside the window");
    std::vector<int> ray;
    for (int n = n_top; n >= G.params.n_min; --n) {
        const auto& ids = G.level_vertices(n);
        check(!ids.empty(), "empty net level");
        int best = -1;
        double best_d = 0.0;
        for (int u : ids) {
            const double d = Z.dist(z, G.center_of(u));
            if (best < 0 || d < best_d || (d == best_d && u < best)) {
                best = u;
                best_d = d;
            }
        }
        // Maximality of the net guarantees a center within a^n; tau/3 > 1.
        check(best_d < (G.params.tau / 3.0) * std::pow(G.params.a, n),
              "anchored ray: no net center within (tau/3) a^n of the anchor");
        if (!ray.empty())
            check(G.has_edge(ray.back(), best),
                  "anchored ray: consecutive picks are not adjacent");
        ray.push_back(best);
    }
    return ray;
}

nlohmann::json graph_to_json(const FillingGraph& G) {
    nlohmann::json j;
    j["params"] = {
        {"a", G.params.a},
        {"tau", G.params.tau},
        {"n_min", G.params.n_min},
        {"n_max", G.params.n_max},
        {"intersection_mode",
         G.params.mode == IntersectionMode::WitnessScan ? "witness_scan"
                                                        : "center_sum"},
        {"order_seed", G.params.order_seed},
    };
    j["levels"] = nlohmann::json::array();
    for (int n = G.params.n_min; n <= G.params.n_max; ++n) {
        nlohmann::json lj;
        lj["n"] = n;
        lj["vertices"] = nlohmann::json::array();
        for (int v : G.level_vertices(n)) {
            const int c = G.center_of(v);
            lj["vertices"].push_back(
                {{"id", v},
                 {"center", G.space ? G.space->id(c) : std::to_string(c)}});
        }
        j["levels"].push_back(std::move(lj));
    }
    j["edges"] = nlohmann::json::array();
    for (int v = 0; v < G.size(); ++v)
        for (int w : G.adjacency[v])
            if (v < w)
                j["edges"].push_back(
                    {{"u", v},
                     {"v", w},
                     {"label", G.is_horizontal(v, w) ? "horizontal" : "vertical"}});
    return j;
}

FillingGraph graph_from_parts(const FillingParams& p,
                              const std::vector<std::pair<int, int>>& level_center,
                              const std::vector<std::pair<int, int>>& edges,
                              std::optional<FiniteMetricSpace> space) {
    FillingGraph G;
    G.params = p;
    G.space = std::move(space);
    int n_centers = 0;
    for (auto [lvl, c] : level_center) n_centers = std::max(n_centers, c + 1);
    if (G.space) n_centers = std::max(n_centers, G.space->size());
    G.levels_.assign(p.n_max - p.n_min + 1, {});
    G.center_to_vertex_.assign(p.n_max - p.n_min + 1,
                               std::vector<int>(n_centers, -1));
    for (auto [lvl, c] : level_center) {
        if (lvl < p.n_min || lvl > p.n_max)
            throw InputError("vertex level outside the window");
        Vertex v;
        v.id = static_cast<int>(G.vertices.size());
        v.level = lvl;
        v.center = c;
        G.levels_[lvl - p.n_min].push_back(v.id);
        G.center_to_vertex_[lvl - p.n_min][c] = v.id;
        G.vertices.push_back(v);
    }
    G.adjacency.assign(G.vertices.size(), {});
    for (auto [u, v] : edges) {
        if (u == v) throw InputError("self-loop in edge list");
        if (std::abs(G.level_of(u) - G.level_of(v)) > 1)
            throw InputError("edge spans more than one level");
        G.adjacency[u].push_back(v);
        G.adjacency[v].push_back(u);
    }
    for (auto& nb : G.adjacency) {
        std::sort(nb.begin(), nb.end());
        nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
    }
    return G;
}

FillingGraph graph_from_json(const nlohmann::json& j,
                             std::optional<FiniteMetricSpace> space) {
    FillingParams p;
    const auto& pj = j.at("params");
    p.a = pj.at("a").get<double>();
    p.tau = pj.at("tau").get<double>();
    p.n_min = pj.at("n_min").get<int>();
    p.n_max = pj.at("n_max").get<int>();
    p.mode = pj.at("intersection_mode").get<std::string>() == "center_sum"
                 ? IntersectionMode::CenterSum
                 : IntersectionMode::WitnessScan;
    p.order_seed = pj.value("order_seed", std::uint64_t{0});

    std::vector<std::pair<int, int>> level_center;
    std::vector<std::string> centers_seen;
    auto center_index = [&](const std::string& cid) {
        if (space) {
            const int i = space->index_of(cid);
            if (i < 0) throw InputError("unknown center id '" + cid + "'");
            return i;
        }
        for (size_t i = 0; i < centers_seen.size(); ++i)
            if (centers_seen[i] == cid) return static_cast<int>(i);
        centers_seen.push_back(cid);
        return static_cast<int>(centers_seen.size() - 1);
    };
    int expected_id = 0;
    for (const auto& lj : j.at("levels")) {
        const int n = lj.at("n").get<int>();
        for (const auto& vj : lj.at("vertices")) {
            if (vj.at("id").get<int>() != expected_id++)
                throw InputError("vertex ids must be dense and level-major");
            level_center.emplace_back(n, center_index(vj.at("center").get<std::string>()));
        }
    }
    std::vector<std::pair<int, int>> edges;
    for (const auto& ej : j.at("edges"))
        edges.emplace_back(ej.at("u").get<int>(), ej.at("v").get<int>());
    return graph_from_parts(p, level_center, edges, std::move(space));
}

std::string graph_to_dot(const FillingGraph& G) {
    if (G.size() >= 2000)
        throw InputError("DOT export refused for graphs with >= 2000 vertices");
    std::ostringstream os;
    os << "graph filling {\n  rankdir=BT;\n";
    for (int n = G.params.n_min; n <= G.params.n_max; ++n) {
        os << "  { rank=same;";
        for (int v : G.level_vertices(n)) os << " v" << v << ";";
        os << " }\n";
    }
    for (int v = 0; v < G.size(); ++v) {
        const int c = G.center_of(v);
        os << "  v" << v << " [label=\""
           << (G.space ? G.space->id(c) : std::to_string(c)) << "@"
           << G.level_of(v) << "\"];\n";
    }
    for (int v = 0; v < G.size(); ++v)
        for (int w : G.adjacency[v])
            if (v < w)
                os << "  v" << v << " -- v" << w
                   << (G.is_horizontal(v, w) ? ";\n" : " [style=bold];\n");
    os << "}\n";
    return os.str();
}

}  // namespace hypfill
