#include "hypfill/verify.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

namespace hypfill {

// ======================================================================
// config plumbing
// ======================================================================

IntersectionMode RunConfig::mode() const {
    if (intersection_mode == "witness_scan") return IntersectionMode::WitnessScan;
    if (intersection_mode == "center_sum") return IntersectionMode::CenterSum;
    throw InputError("unknown intersection mode '" + intersection_mode + "'");
}

std::vector<double> RunConfig::effective_epsilons() const {
    if (!epsilons.empty()) return epsilons;
    const double star = -std::log(a);
    return {star, star / 2.0};
}

nlohmann::json RunConfig::to_json() const {
    nlohmann::json j;
    j["input"] = {{"path", input_path},
                  {"format", format},
                  {"metric", metric},
                  {"theta", theta},
                  {"rel_tol", rel_tol}};
    j["a"] = a;
    j["tau"] = tau;
    j["n_min"] = n_min ? nlohmann::json(*n_min) : nlohmann::json();
    j["n_max"] = n_max ? nlohmann::json(*n_max) : nlohmann::json();
    j["max_levels"] = max_levels;
    j["bottom_margin_levels"] = bottom_margin_levels;
    j["boundary_margin_levels"] = boundary_margin_levels;
    j["intersection_mode"] = intersection_mode;
    j["order_seed"] = order_seed;
    j["epsilons"] = effective_epsilons();
    j["seed"] = seed;
    j["budgets"] = {{"quadruples", quadruple_budget},
                    {"triangles", triangle_budget},
                    {"pairs", pair_budget},
                    {"csv_rows", csv_rows}};
    j["output_dir"] = output_dir;
    return j;
}

RunConfig RunConfig::from_json(const nlohmann::json& j) {
    RunConfig c;
    if (j.contains("input")) {
        const auto& i = j["input"];
        c.input_path = i.value("path", c.input_path);
        c.format = i.value("format", c.format);
        c.metric = i.value("metric", c.metric);
        c.theta = i.value("theta", c.theta);
        c.rel_tol = i.value("rel_tol", c.rel_tol);
    }
    c.a = j.value("a", c.a);
    c.tau = j.value("tau", c.tau);
    if (j.contains("n_min") && !j["n_min"].is_null()) c.n_min = j["n_min"].get<int>();
    if (j.contains("n_max") && !j["n_max"].is_null()) c.n_max = j["n_max"].get<int>();
    c.max_levels = j.value("max_levels", c.max_levels);
    c.bottom_margin_levels = j.value("bottom_margin_levels", c.bottom_margin_levels);
    c.boundary_margin_levels =
        j.value("boundary_margin_levels", c.boundary_margin_levels);
    c.intersection_mode = j.value("intersection_mode", c.intersection_mode);
    c.order_seed = j.value("order_seed", c.order_seed);
    if (j.contains("epsilons") && !j["epsilons"].is_null())
        c.epsilons = j["epsilons"].get<std::vector<double>>();
    c.seed = j.value("seed", c.seed);
    if (j.contains("budgets")) {
        const auto& b = j["budgets"];
        c.quadruple_budget = b.value("quadruples", c.quadruple_budget);
        c.triangle_budget = b.value("triangles", c.triangle_budget);
        c.pair_budget = b.value("pairs", c.pair_budget);
        c.csv_rows = b.value("csv_rows", c.csv_rows);
    }
    c.output_dir = j.value("output_dir", c.output_dir);
    return c;
}

std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t salt) {
    // splitmix64 step; good enough to decorrelate per-suite streams.
    std::uint64_t z = seed + salt * 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// ======================================================================
// report plumbing
// ======================================================================

nlohmann::json LemmaRecord::to_json() const {
    nlohmann::json j;
    j["lemma_id"] = lemma_id;
    j["kind"] = kind;
    j["regime"] = regime.empty() ? nlohmann::json() : nlohmann::json(regime);
    j["epsilon"] = std::isnan(epsilon) ? nlohmann::json() : nlohmann::json(epsilon);
    j["n_window"] = {n_window[0], n_window[1]};
    j["ratio_min"] =
        std::isnan(ratio_min) ? nlohmann::json() : nlohmann::json(ratio_min);
    j["ratio_max"] =
        std::isnan(ratio_max) ? nlohmann::json() : nlohmann::json(ratio_max);
    j["additive_defect_max"] = std::isnan(additive_defect_max)
                                   ? nlohmann::json()
                                   : nlohmann::json(additive_defect_max);
    j["pairs_checked"] = pairs_checked;
    j["seed"] = seed;
    j["hard"] = hard;
    j["status"] = passed ? "pass" : "fail";
    j["note"] = note;
    return j;
}

int ComparisonReport::hard_failures() const {
    int n = 0;
    for (const auto& r : records)
        if (r.hard && !r.passed) ++n;
    return n;
}

const LemmaRecord* ComparisonReport::find(const std::string& lemma_id,
                                          const std::string& regime,
                                          double epsilon) const {
    for (const auto& r : records) {
        if (r.lemma_id != lemma_id) continue;
        if (!regime.empty() && r.regime != regime) continue;
        if (!std::isnan(epsilon) && std::abs(r.epsilon - epsilon) > 1e-12) continue;
        return &r;
    }
    return nullptr;
}

nlohmann::json ComparisonReport::to_json() const {
    nlohmann::json j;
    j["meta"] = {{"tool", "hypfill"},
                 {"format_version", 1},
                 {"timing_ms", timing_ms}};
    j["config"] = config_echo;
    j["summary"] = {{"hard_failures", hard_failures()},
                    {"suites", records.size()},
                    {"warnings", warnings}};
    j["suites"] = nlohmann::json::array();
    for (const auto& r : records) j["suites"].push_back(r.to_json());
    return j;
}

std::string ComparisonReport::body_bytes() const {
    nlohmann::json j = to_json();
    j["meta"].erase("timing_ms");
    return j.dump(2);
}

// ======================================================================
// shared sweep helpers
// ======================================================================

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Range {
    double lo = kInf, hi = -kInf;
    std::uint64_t n = 0;
    void add(double x) {
        lo = std::min(lo, x);
        hi = std::max(hi, x);
        ++n;
    }
    bool empty() const { return n == 0; }
};

void fill_range(LemmaRecord& r, const Range& rg) {
    if (!rg.empty()) {
        r.ratio_min = rg.lo;
        r.ratio_max = rg.hi;
    }
    r.pairs_checked = rg.n;
}

// Descending-closure bitmasks; level-major ids mean every down-neighbor of
// v has a smaller id, so one ascending pass suffices.
struct ClosureTable {
    int words = 0;
    std::vector<std::vector<std::uint64_t>> mask;
    std::vector<int> level_first;  // first id per level index, plus end
};

ClosureTable closure_table(const FillingGraph& G) {
    ClosureTable T;
    const int n = G.size();
    T.words = (n + 63) / 64;
    T.mask.assign(n, std::vector<std::uint64_t>(T.words, 0));
    for (int v = 0; v < n; ++v) {
        T.mask[v][v / 64] |= 1ULL << (v % 64);
        for (int w : G.adjacency[v])
            if (G.level_of(w) == G.level_of(v) - 1)
                for (int k = 0; k < T.words; ++k) T.mask[v][k] |= T.mask[w][k];
    }
    int next = 0;
    for (int li = 0; li <= G.params.n_max - G.params.n_min; ++li) {
        T.level_first.push_back(next);
        next += static_cast<int>(G.level_vertices(G.params.n_min + li).size());
    }
    T.level_first.push_back(next);
    return T;
}

bool mask_bit(const std::vector<std::uint64_t>& m, int i) {
    return (m[i / 64] >> (i % 64)) & 1ULL;
}

// Highest-level common cone vertex, ties by smallest id; -1 if disjoint.
int branch_from_masks(const FillingGraph& G, const ClosureTable& T, int v, int w) {
    const auto& A = T.mask[v];
    const auto& B = T.mask[w];
    for (int wi = T.words - 1; wi >= 0; --wi) {
        const std::uint64_t x = A[wi] & B[wi];
        if (!x) continue;
        const int hi = wi * 64 + 63 - std::countl_zero(x);
        const int li = G.level_of(hi) - G.params.n_min;
        for (int id = T.level_first[li]; id <= hi; ++id)
            if (mask_bit(A, id) && mask_bit(B, id)) return id;
    }
    return -1;
}

// Vertex at arclength s from x on the canonical geodesic x..y, fetched by
// walking the predecessor chain from y (no allocation).
int vertex_at_arclength(const ShortestPaths& sp, int x, int y, int s) {
    int v = y;
    for (int steps = sp(x, y) - s; steps > 0; --steps) v = sp.pred(x, v);
    return v;
}

double wall_ms(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - t0)
        .count();
}

}  // namespace

// ======================================================================
// the pipeline
// ======================================================================

VerificationOutput run_verification(const FiniteMetricSpace& Z,
                                    const RunConfig& cfg) {
    VerificationOutput out;
    ComparisonReport& rep = out.report;
    rep.config_echo = cfg.to_json();
    const auto clock0 = std::chrono::steady_clock::now();

    // ---- window resolution -------------------------------------------
    out.stats = scale_stats(Z, cfg.a, 64);
    const int auto_margin = cfg.boundary_margin_levels >= 0
                                ? cfg.boundary_margin_levels
                                : static_cast<int>(std::ceil(std::log(1e-3) /
                                                             std::log(cfg.a)));
    int n_min = cfg.n_min.value_or(out.stats.suggested_n_min -
                                   (out.stats.degenerate ? 0 : cfg.bottom_margin_levels));
    int n_max = cfg.n_max.value_or(out.stats.suggested_n_max +
                                   (out.stats.degenerate ? 0 : auto_margin));
    if (n_max - n_min + 1 > cfg.max_levels) {
        n_max = n_min + cfg.max_levels - 1;
        rep.warnings.push_back("window clamped to max_levels");
    }
    out.n_min = n_min;
    out.n_max = n_max;

    FillingParams params;
    params.a = cfg.a;
    params.tau = cfg.tau;
    params.n_min = n_min;
    params.n_max = n_max;
    params.mode = cfg.mode();
    params.order_seed = cfg.order_seed;

    out.graph = build_filling(Z, params);
    const FillingGraph& G = out.graph;
    const int V = G.size();
    rep.timing_ms["build"] = wall_ms(clock0);

    const auto clock_bfs = std::chrono::steady_clock::now();
    const ShortestPaths sp = compute_shortest_paths(G);
    rep.timing_ms["bfs_all_pairs"] = wall_ms(clock_bfs);

    const bool witness_mode = params.mode == IntersectionMode::WitnessScan;
    const double tol9 = 1e-9;

    auto add = [&](LemmaRecord r) {
        r.n_window[0] = n_min;
        r.n_window[1] = n_max;
        rep.records.push_back(std::move(r));
    };
    // Exact suites record failures; a CheckError inside one is caught and
    // recorded so the remaining suites still run.
    auto run_exact = [&](const std::string& id, auto body) {
        LemmaRecord r;
        r.lemma_id = id;
        r.kind = "exact";
        r.hard = true;
        try {
            body(r);
        } catch (const CheckError& e) {
            r.passed = false;
            r.note = e.what();
        }
        add(std::move(r));
    };

    // ---- exact structural invariants ---------------------------------

    run_exact("edge_rule", [&](LemmaRecord& r) {
        // Both directions: every stored edge satisfies the rule, and every
        // same/adjacent-level non-edge fails the ball test.
        for (int v = 0; v < V; ++v)
            for (int w = v + 1; w < V; ++w) {
                const int dh = std::abs(G.level_of(v) - G.level_of(w));
                if (dh > 1) {
                    check(!G.has_edge(v, w), "edge spans more than one level");
                    continue;
                }
                ++r.pairs_checked;
                check(G.has_edge(v, w) == balls_intersect(G, v, w),
                      "edge set disagrees with the ball-intersection rule");
            }
    });

    run_exact("height_lipschitz", [&](LemmaRecord& r) {
        for (int v = 0; v < V; ++v)
            for (int w = v + 1; w < V; ++w) {
                if (sp(v, w) >= ShortestPaths::kInf) continue;
                ++r.pairs_checked;
                check(std::abs(G.level_of(v) - G.level_of(w)) <= sp(v, w),
                      "height is not 1-Lipschitz against hop distance");
            }
    });

    run_exact("product_height_bound", [&](LemmaRecord& r) {
        for (int v = 0; v < V; ++v)
            for (int w = v + 1; w < V; ++w) {
                if (sp(v, w) >= ShortestPaths::kInf) continue;
                ++r.pairs_checked;
                check(gromov_product_height(G, sp, v, w) <=
                          std::min(G.level_of(v), G.level_of(w)) + 1e-12,
                      "height product exceeded min height");
            }
    });

    run_exact("connectivity", [&](LemmaRecord& r) {
        r.pairs_checked = static_cast<std::uint64_t>(V) * V;
        // Guaranteed once the bottom net is a single ball; advisory above.
        r.hard = n_min <= out.stats.suggested_n_min;
        if (!sp.connected()) {
            r.passed = false;
            r.note = "graph is disconnected";
        }
    });

    run_exact("vertical_connection", [&](LemmaRecord& r) {
        if (!witness_mode) {
            r.hard = false;
            r.note = "skipped: needs witness mode";
            return;
        }
        // For every ball-intersecting pair at different heights, the
        // witness's nearest centers give a level-by-level vertical path.
        for (int v = 0; v < V; ++v)
            for (int w = 0; w < V; ++w) {
                if (G.level_of(v) >= G.level_of(w)) continue;
                int z = -1;
                if (!balls_intersect(G, v, w, &z)) continue;
                ++r.pairs_checked;
                int prev = v;
                for (int lvl = G.level_of(v) + 1; lvl < G.level_of(w); ++lvl) {
                    int best = -1;
                    double bd = 0.0;
                    for (int u : G.level_vertices(lvl)) {
                        const double d = Z.dist(z, G.center_of(u));
                        if (best < 0 || d < bd || (d == bd && u < best)) {
                            best = u;
                            bd = d;
                        }
                    }
                    check(G.has_edge(prev, best),
                          "witness chain broke between levels");
                    prev = best;
                }
                check(G.has_edge(prev, w), "witness chain missed the top vertex");
            }
    });

    run_exact("geometric_series", [&](LemmaRecord& r) {
        // Centers along any descending path stay within the geometric tail
        // 2*tau*a^{h(low)} / (1-a) of each other.
        for (int v = 0; v < V; ++v)
            for (int u : descending_closure(G, v)) {
                ++r.pairs_checked;
                const double bound = 2.0 * params.tau *
                                     std::pow(params.a, G.level_of(u)) /
                                     (1.0 - params.a);
                check(Z.dist(G.center_of(u), G.center_of(v)) <= bound + 1e-12,
                      "descending path left the geometric-series ball");
            }
    });

    run_exact("adjacent_branch_level", [&](LemmaRecord& r) {
        if (!witness_mode) {
            r.hard = false;
            r.note = "skipped: needs witness mode";
            return;
        }
        std::uint64_t skipped_bottom = 0;
        for (int v = 0; v < V; ++v)
            for (int w : G.adjacency[v]) {
                if (w <= v || !G.is_horizontal(v, w)) continue;
                if (G.level_of(v) == n_min) {
                    ++skipped_bottom;
                    continue;
                }
                ++r.pairs_checked;
                bool found = false;
                for (int u : G.adjacency[v]) {
                    if (G.level_of(u) != G.level_of(v) - 1) continue;
                    if (G.has_edge(u, w)) {
                        found = true;
                        break;
                    }
                }
                check(found, "adjacent same-level pair lacks a common "
                             "down-neighbor");
                check(G.level_of(branch_point(G, v, w).vertex) ==
                          G.level_of(v) - 1,
                      "branch point of an adjacent pair is not one level down");
            }
        if (skipped_bottom)
            r.note = std::to_string(skipped_bottom) + " bottom-level pairs skipped";
    });

    // Anchored rays, reused by several suites.
    std::vector<std::vector<int>> rays(Z.size());
    for (int z = 0; z < Z.size(); ++z)
        rays[z] = anchored_descending_ray(G, z, n_max);

    run_exact("ray_adjacency", [&](LemmaRecord& r) {
        const double third = params.tau / 3.0;
        for (int y = 0; y < Z.size(); ++y)
            for (int z = y + 1; z < Z.size(); ++z)
                for (int k = n_min; k <= n_max; ++k) {
                    if (!(third * std::pow(params.a, k) > Z.dist(y, z))) continue;
                    ++r.pairs_checked;
                    const int vy = rays[y][n_max - k], vz = rays[z][n_max - k];
                    check(vy == vz || G.has_edge(vy, vz),
                          "anchored rays not adjacent at a qualifying level");
                }
    });

    run_exact("starlike", [&](LemmaRecord& r) {
        // Every vertex lies on the anchored ray of its own center.
        for (int v = 0; v < V; ++v) {
            ++r.pairs_checked;
            check(rays[G.center_of(v)][n_max - G.level_of(v)] == v,
                  "vertex is not on its own center's anchored ray");
        }
    });

    run_exact("tetrahedron_pair_sums", [&](LemmaRecord& r) {
        // Pure arithmetic: whenever the four face triples are delta-triples
        // the pair sums form a 2*delta-triple.  Fuzzed at the tight delta.
        r.seed = sub_seed(cfg.seed, 101);
        std::mt19937_64 rng(r.seed);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int i = 0; i < 100000; ++i) {
            std::array<double, 6> d;
            for (auto& x : d) x = u(rng);
            // minimal delta making all four face hypotheses true
            double tight = 0.0;
            auto need = [&](double p, double q, double s) {
                std::array<double, 3> t{p, q, s};
                std::sort(t.begin(), t.end());
                tight = std::max(tight, t[1] - t[0]);
            };
            need(d[3], d[4], d[5]);
            need(d[1], d[2], d[5]);
            need(d[0], d[2], d[4]);
            need(d[0], d[1], d[3]);
            const TetrahedronCheck t = tetrahedron_check(d, tight);
            ++r.pairs_checked;
            check(t.hypotheses, "tight delta failed its own hypotheses");
            check(t.conclusion, "pair sums broke the doubled-delta triple");
        }
    });

    rep.timing_ms["structural_suites"] = wall_ms(clock0);

    // ---- Busemann suites ---------------------------------------------

    const int base_start = std::clamp(0, n_min, n_max);
    const std::vector<int> base_ray =
        anchored_descending_ray(G, 0, base_start);
    std::optional<BusemannField> bfield;
    run_exact("busemann_monotone", [&](LemmaRecord& r) {
        // The field constructor asserts d(ray_t, x) - t nonincreasing.
        bfield = busemann_field(G, sp, base_ray);
        r.pairs_checked = static_cast<std::uint64_t>(V) * base_ray.size();
        r.note = "anchor " + Z.id(0) + ", start level " +
                 std::to_string(base_start);
    });

    if (bfield) {
        run_exact("busemann_height_gap", [&](LemmaRecord& r) {
            // Stabilized estimates sit within 3 of h(x) - h(ray start).
            double worst = 0.0;
            std::uint64_t unstable = 0;
            for (int x = 0; x < V; ++x) {
                if (!bfield->stabilized(x)) {
                    ++unstable;
                    continue;
                }
                ++r.pairs_checked;
                const double gap = std::abs(
                    bfield->value[x] - (G.level_of(x) - base_start));
                worst = std::max(worst, gap);
                check(gap <= 3.0, "stabilized Busemann estimate strayed "
                                  "beyond 3 of the height");
            }
            r.additive_defect_max = worst;
            if (unstable)
                r.note = std::to_string(unstable) + " vertices not stabilized";
        });

        run_exact("busemann_increment", [&](LemmaRecord& r) {
            // Along every anchored ray, stabilized values step by exactly 1
            // per level; 6 is the asserted ceiling, 0 the expectation.
            double worst = 0.0;
            for (int z = 0; z < Z.size(); ++z)
                for (size_t i = 0; i + 1 < rays[z].size(); ++i) {
                    const int hi = rays[z][i], lo = rays[z][i + 1];
                    if (!bfield->stabilized(hi) || !bfield->stabilized(lo))
                        continue;
                    ++r.pairs_checked;
                    const double gap =
                        std::abs(bfield->value[hi] - bfield->value[lo] - 1.0);
                    worst = std::max(worst, gap);
                    check(gap <= 6.0, "Busemann increment along a ray "
                                      "escaped the additive ceiling");
                }
            r.additive_defect_max = worst;
        });
    }

    // ---- hyperbolicity: delta, branch points, triangles --------------

    {
        LemmaRecord r;
        r.lemma_id = "four_point_delta";
        r.kind = "additive";
        const bool exact = static_cast<std::uint64_t>(V) * V * V * V <=
                           3'000'000'000ULL;
        DeltaOptions opt;
        opt.exact = exact;
        if (!exact) {
            opt.seed = r.seed = sub_seed(cfg.seed, 202);
            opt.count = cfg.quadruple_budget;
        }
        const DeltaResult d = delta_four_point(sp, opt);
        r.additive_defect_max = d.delta;
        r.pairs_checked = d.quadruples;
        r.regime = exact ? "exact" : "sampled";
        add(std::move(r));
    }

    {
        LemmaRecord r;
        r.lemma_id = "height_product_defect";
        r.kind = "additive";
        r.additive_defect_max = height_product_defect(G, sp);
        r.pairs_checked = static_cast<std::uint64_t>(V) * V * V;
        add(std::move(r));
    }

    const ClosureTable closures = closure_table(G);
    {
        LemmaRecord gap, ratio;
        gap.lemma_id = "branch_height_gap";
        gap.kind = "additive";
        ratio.lemma_id = "branch_scale_ratio";
        ratio.kind = "multiplicative";
        double worst = 0.0;
        Range rg;
        for (int v = 0; v < V; ++v)
            for (int w = v + 1; w < V; ++w) {
                const int u = branch_from_masks(G, closures, v, w);
                check(u >= 0, "no branch point inside the window");
                ++gap.pairs_checked;
                worst = std::max(worst, std::abs(G.level_of(u) -
                                                 gromov_product_height(G, sp, v, w)));
                const int m = std::min(G.level_of(v), G.level_of(w));
                rg.add(std::pow(params.a, G.level_of(u)) /
                       (Z.dist(G.center_of(v), G.center_of(w)) +
                        std::pow(params.a, m)));
            }
        gap.additive_defect_max = worst;
        fill_range(ratio, rg);
        add(std::move(gap));
        add(std::move(ratio));
    }

    {
        // Equiradial triples: exhaustive on small graphs, seeded sample
        // otherwise.  Rounding adds at most 1 per point on top of the
        // 4-delta bound, tracked as a plain measurement here.
        LemmaRecord r;
        r.lemma_id = "equiradial_diameter";
        r.kind = "additive";
        double worst = 0.0;
        const bool exhaustive = V <= 240;
        std::mt19937_64 rng(sub_seed(cfg.seed, 303));
        if (!exhaustive) r.seed = sub_seed(cfg.seed, 303);
        std::uniform_int_distribution<int> pick(0, V - 1);
        auto one = [&](int x, int y, int z) {
            const double rx = gromov_product_base(sp, y, z, x);
            const double ry = gromov_product_base(sp, x, z, y);
            const int sx = static_cast<int>(std::floor(rx));
            const int sy = static_cast<int>(std::floor(ry));
            const int on_xy = vertex_at_arclength(sp, x, y, sx);
            const int on_xz = vertex_at_arclength(sp, x, z, sx);
            const int on_yz = vertex_at_arclength(sp, y, z, sy);
            const int diam = std::max({sp(on_xy, on_xz), sp(on_xy, on_yz),
                                       sp(on_xz, on_yz)});
            worst = std::max(worst, static_cast<double>(diam));
            ++r.pairs_checked;
        };
        if (exhaustive) {
            for (int x = 0; x < V; ++x)
                for (int y = x + 1; y < V; ++y)
                    for (int z = y + 1; z < V; ++z) one(x, y, z);
        } else {
            for (std::uint64_t i = 0; i < 200000; ++i) {
                const int x = pick(rng), y = pick(rng), z = pick(rng);
                if (x != y && y != z && x != z) one(x, y, z);
            }
        }
        r.additive_defect_max = worst;
        r.regime = exhaustive ? "exact" : "sampled";
        add(std::move(r));
    }

    {
        LemmaRecord r;
        r.lemma_id = "tripod_defect";
        r.kind = "additive";
        r.seed = sub_seed(cfg.seed, 404);
        std::mt19937_64 rng(r.seed);
        std::uniform_int_distribution<int> pick(0, V - 1);
        double worst = 0.0;
        std::uint64_t done = 0;
        for (std::uint64_t i = 0; i < cfg.triangle_budget * 4 &&
                                  done < cfg.triangle_budget; ++i) {
            const int x = pick(rng), y = pick(rng), z = pick(rng);
            if (x == y || y == z || x == z) continue;
            const TripodDefect td =
                tripod_defect(sp, geodesic_path(sp, x, y), geodesic_path(sp, x, z),
                              geodesic_path(sp, y, z));
            worst = std::max(worst, td.defect);
            r.pairs_checked += td.pairs;
            ++done;
        }
        r.additive_defect_max = worst;
        add(std::move(r));
    }

    {
        LemmaRecord rh, rb;
        rh.lemma_id = "adapted_height_defect";
        rb.lemma_id = "adapted_busemann_defect";
        rh.kind = rb.kind = "additive";
        rh.seed = rb.seed = sub_seed(cfg.seed, 505);
        std::mt19937_64 rng(rh.seed);
        std::uniform_int_distribution<int> pick(0, V - 1);
        std::vector<double> hvals(V);
        for (int v = 0; v < V; ++v) hvals[v] = G.level_of(v);
        double worst_h = 0.0, worst_b = 0.0;
        for (std::uint64_t i = 0; i < cfg.pair_budget; ++i) {
            const int u = pick(rng), v = pick(rng);
            if (u == v) continue;
            const GeodesicPath path = geodesic_path(sp, u, v);
            worst_h = std::max(worst_h, adapted_defect(path, hvals));
            ++rh.pairs_checked;
            if (bfield) {
                bool ok = true;
                for (int w : path)
                    if (!bfield->stabilized(w)) { ok = false; break; }
                if (ok) {
                    worst_b = std::max(worst_b, adapted_defect(path, bfield->value));
                    ++rb.pairs_checked;
                }
            }
        }
        rh.additive_defect_max = worst_h;
        rb.additive_defect_max = worst_b;
        add(std::move(rh));
        add(std::move(rb));
    }

    rep.timing_ms["hyperbolicity_suites"] = wall_ms(clock0);

    // ---- uniformization, per epsilon ---------------------------------

    const std::vector<double> eps_list = cfg.effective_epsilons();
    const double eps_star = -std::log(params.a);
    bool first_eps = true;
    for (double eps : eps_list) {
        EpsilonWeighting w{eps, params.a};
        w.validate();
        if (w.beyond_bilip())
            rep.warnings.push_back("epsilon beyond the boundary-identification "
                                   "point; beta > 1");
        const auto clock_eps = std::chrono::steady_clock::now();
        const WeightedPaths wp = compute_weighted_paths(G, w);
        rep.timing_ms["dijkstra_eps_" + std::to_string(eps)] = wall_ms(clock_eps);

        auto eps_exact = [&](const std::string& id, auto body) {
            LemmaRecord r;
            r.lemma_id = id;
            r.kind = "exact";
            r.hard = true;
            r.epsilon = eps;
            try {
                body(r);
            } catch (const CheckError& e) {
                r.passed = false;
                r.note = e.what();
            }
            add(std::move(r));
        };

        eps_exact("metric_axioms", [&](LemmaRecord& r) {
            double scale = 0.0;
            for (int u = 0; u < V; ++u)
                for (int v = 0; v < V; ++v)
                    if (std::isfinite(wp.dist(u, v)))
                        scale = std::max(scale, wp.dist(u, v));
            const double tol = tol9 * std::max(scale, 1.0);
            for (int u = 0; u < V; ++u) {
                check(wp(u, u) == 0.0, "nonzero self-distance");
                for (int v = u + 1; v < V; ++v) {
                    if (!std::isfinite(wp(u, v))) continue;
                    ++r.pairs_checked;
                    check(std::abs(wp(u, v) - wp(v, u)) <= tol,
                          "weighted distance asymmetry");
                    check(wp(u, v) > 0.0, "vanishing distance between distinct "
                                          "vertices");
                }
            }
            for (int u = 0; u < V; ++u)
                for (int v = 0; v < V; ++v)
                    for (int x = 0; x < V; ++x)
                        check(wp(u, x) <= wp(u, v) + wp(v, x) + tol,
                              "weighted triangle inequality failed");
        });

        eps_exact("harnack_edge", [&](LemmaRecord& r) {
            const double up = std::exp(eps) + 1e-12;
            for (int u = 0; u < V; ++u)
                for (int v : G.adjacency[u]) {
                    if (v <= u) continue;
                    ++r.pairs_checked;
                    const double ratio = w.density(G.level_of(u)) /
                                         w.density(G.level_of(v));
                    check(ratio <= up && ratio >= 1.0 / up,
                          "edgewise density ratio escaped e^{eps}");
                }
        });

        eps_exact("tail_telescoping", [&](LemmaRecord& r) {
            for (int n = n_min; n <= n_max; ++n)
                for (int k = n; k <= n_max; ++k)
                    for (int m = k; m <= n_max; ++m) {
                        ++r.pairs_checked;
                        const double lhs =
                            w.truncated_tail(n, k) + w.truncated_tail(k, m);
                        const double rhs = w.truncated_tail(n, m);
                        check(std::abs(lhs - rhs) <=
                                  tol9 * std::max(1.0, std::abs(rhs)),
                              "truncated tails failed to telescope");
                    }
            // and the real thing: vertical weights along every anchored ray
            for (int z = 0; z < Z.size(); ++z) {
                double sum = 0.0;
                for (size_t i = 0; i + 1 < rays[z].size(); ++i)
                    sum += w.edge_length(G.level_of(rays[z][i]),
                                         G.level_of(rays[z][i + 1]));
                ++r.pairs_checked;
                check(std::abs(sum - w.truncated_tail(n_min, n_max)) <=
                          tol9 * std::max(1.0, sum),
                      "ray length disagrees with the closed-form tail");
            }
        });

        eps_exact("arc_upper_bound", [&](LemmaRecord& r) {
            // d_eps(x, y) <= rho(x) (e^{eps |xy|} - 1)/eps, both endpoints.
            for (int u = 0; u < V; ++u)
                for (int v = u + 1; v < V; ++v) {
                    if (sp(u, v) >= ShortestPaths::kInf) continue;
                    ++r.pairs_checked;
                    const double grow = std::expm1(eps * sp(u, v)) / eps;
                    const double cap =
                        std::min(w.density(G.level_of(u)),
                                 w.density(G.level_of(v))) * grow;
                    check(wp(u, v) <= cap * (1.0 + tol9),
                          "weighted distance exceeded the arc upper bound");
                }
        });

        const BoundaryGauge gauge = boundary_gauge(G, wp, w);
        eps_exact("boundary_proxy_bound", [&](LemmaRecord& r) {
            // Starlikeness puts every vertex on a ray, so the empirical
            // distance to the boundary never exceeds the closed-form proxy.
            Range band;
            for (int x = 0; x < V; ++x) {
                ++r.pairs_checked;
                check(gauge.empirical[x] <= gauge.proxy[x] * (1.0 + tol9),
                      "empirical boundary distance exceeded the proxy");
                band.add(gauge.empirical[x] / gauge.proxy[x]);
            }
            r.ratio_min = band.lo;
            r.ratio_max = band.hi;
        });

        // -- measured bands -------------------------------------------
        Range large, small, eb_large, eb_small, arc_low, proxy_band, cigar;
        double Mlen = 1.0;
        std::uint64_t curves = 0;
        for (int u = 0; u < V; ++u)
            for (int v = u + 1; v < V; ++v) {
                const int hops = sp(u, v);
                if (hops >= ShortestPaths::kInf) continue;
                const double ph = gromov_product_height(G, sp, u, v);
                const double de = wp(u, v);
                if (hops >= 2) large.add(de / std::exp(-eps * ph));
                if (hops >= 1 && hops <= 2)
                    small.add(de / (std::exp(-eps * ph) * hops));
                if (hops >= 1) {
                    arc_low.add(std::min(w.density(G.level_of(u)),
                                         w.density(G.level_of(v))) *
                                (-std::expm1(-eps * hops)) / eps / de);
                    if (bfield && bfield->stabilized(u) && bfield->stabilized(v)) {
                        const double pb = gromov_product_busemann(*bfield, sp, u, v);
                        if (eps * hops >= 1.0)
                            eb_large.add(de / (std::exp(-eps * pb) / eps));
                        else
                            eb_small.add(de / (std::exp(-eps * pb) * hops));
                    }
                }
            }
        for (int x = 0; x < V; ++x)
            proxy_band.add(gauge.empirical[x] / gauge.proxy[x]);

        const AdmissibilityResult adm = measure_admissibility(G, w, sp, wp);
        for (int u = 0; u < V; ++u)
            for (int v = u + 1; v < V; ++v) {
                const UniformCurveStats s = check_uniform_curve(
                    G, w, wp, gauge, geodesic_path(sp, u, v));
                Mlen = std::max(Mlen, s.length_ratio);
                if (s.cigar_ratio > 0.0) cigar.add(s.cigar_ratio);
                ++curves;
            }

        auto band_record = [&](const std::string& id, const std::string& regime,
                               const Range& rg) {
            LemmaRecord r;
            r.lemma_id = id;
            r.kind = "multiplicative";
            r.regime = regime;
            r.epsilon = eps;
            fill_range(r, rg);
            add(std::move(r));
        };
        band_record("regime_large", "hops>=2", large);
        band_record("regime_small", "1<=hops<=2", small);
        band_record("regime_busemann_large", "eps*hops>=1", eb_large);
        band_record("regime_busemann_small", "eps*hops<=1", eb_small);
        band_record("arc_lower_admissibility", "hops>=1", arc_low);
        band_record("boundary_proxy_ratio", "vertices", proxy_band);

        {
            LemmaRecord r;
            r.lemma_id = "admissibility";
            r.kind = "multiplicative";
            r.epsilon = eps;
            r.ratio_min = 1.0;
            r.ratio_max = adm.M;
            r.pairs_checked = adm.pairs;
            if (adm.worst_u >= 0)
                r.note = "worst pair " + std::to_string(adm.worst_u) + "," +
                         std::to_string(adm.worst_v);
            add(std::move(r));
        }
        {
            LemmaRecord r;
            r.lemma_id = "uniform_curves";
            r.kind = "multiplicative";
            r.regime = "length";
            r.epsilon = eps;
            r.ratio_min = 1.0;
            r.ratio_max = Mlen;
            r.pairs_checked = curves;
            add(std::move(r));
            LemmaRecord c;
            c.lemma_id = "uniform_curves";
            c.kind = "multiplicative";
            c.regime = "cigar";
            c.epsilon = eps;
            fill_range(c, cigar);
            add(std::move(c));
        }

        if (std::abs(eps - eps_star) < 1e-12 && Z.size() >= 2) {
            LemmaRecord r;
            r.lemma_id = "boundary_bilip";
            r.kind = "multiplicative";
            r.epsilon = eps;
            Range band;
            double width_frac = 0.0;
            for (int z1 = 0; z1 < Z.size(); ++z1)
                for (int z2 = z1 + 1; z2 < Z.size(); ++z2) {
                    const BoundaryDistanceInterval iv =
                        boundary_distance(G, wp, w, z1, z2);
                    band.add(iv.center / Z.dist(z1, z2));
                    width_frac = std::max(
                        width_frac, (iv.upper - iv.lower) / iv.center);
                }
            fill_range(r, band);
            r.additive_defect_max = width_frac;  // interval width / center
            r.note = "additive_defect_max holds max interval width over center";
            add(std::move(r));
        }

        // -- spot-check dump ------------------------------------------
        if (first_eps) {
            std::ostringstream csv;
            csv << "u,v,hops,gromov_h,d_eps,predicted,ratio,regime,epsilon\n";
            std::uint64_t rows = 0;
            for (int u = 0; u < V && rows < cfg.csv_rows; ++u)
                for (int v = u + 1; v < V && rows < cfg.csv_rows; ++v) {
                    const int hops = sp(u, v);
                    if (hops < 1 || hops >= ShortestPaths::kInf) continue;
                    const double ph = gromov_product_height(G, sp, u, v);
                    const double pred = hops >= 2
                                            ? std::exp(-eps * ph)
                                            : std::exp(-eps * ph) * hops;
                    csv << u << ',' << v << ',' << hops << ',' << ph << ','
                        << wp(u, v) << ',' << pred << ',' << wp(u, v) / pred
                        << ',' << (hops >= 2 ? "large" : "small") << ',' << eps
                        << '\n';
                    ++rows;
                }
            out.pairs_csv = csv.str();
            first_eps = false;
        }
    }

    rep.timing_ms["total"] = wall_ms(clock0);
    return out;
}

}  // namespace hypfill
