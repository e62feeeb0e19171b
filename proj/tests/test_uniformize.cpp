#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "hypfill/uniformize.hpp"

using namespace hypfill;

namespace {

const double kLn2 = std::log(2.0);

FiniteMetricSpace one_point() {
    Eigen::MatrixXd d(1, 1);
    d << 0.0;
    return FiniteMetricSpace::from_matrix({"z"}, d);
}

FiniteMetricSpace two_point() {
    Eigen::MatrixXd d(2, 2);
    d << 0.0, 1.0, 1.0, 0.0;
    return FiniteMetricSpace::from_matrix({"z0", "z1"}, d);
}

FillingGraph chain7() {
    FillingParams p;
    p.a = 0.5;
    p.tau = 4.0;
    p.n_min = -3;
    p.n_max = 3;
    return build_filling(one_point(), p);
}

FillingGraph two_point_filling() {
    FillingParams p;
    p.a = 0.5;
    p.tau = 4.0;
    p.n_min = -2;
    p.n_max = 2;
    return build_filling(two_point(), p);
}

EpsilonWeighting wln2() { return {kLn2, 0.5}; }

}  // namespace

TEST_CASE("weighting closed forms at eps = log 2") {
    const EpsilonWeighting w = wln2();
    CHECK(w.density(0.0) == doctest::Approx(1.0));
    CHECK(w.density(1.0) == doctest::Approx(0.5));
    CHECK(w.edge_length(1, 1) == doctest::Approx(0.5));
    CHECK(w.edge_length(0, 1) == doctest::Approx(0.5 / kLn2));
    CHECK(w.edge_length(1, 0) == w.edge_length(0, 1));
    CHECK(w.tail(0) == doctest::Approx(1.0 / kLn2));
    CHECK(w.tail(3) == doctest::Approx(0.125 / kLn2));
    CHECK(w.truncated_tail(0, 3) == doctest::Approx(0.875 / kLn2));
    CHECK(w.truncated_tail(2, 2) == doctest::Approx(0.0));

    CHECK(w.beta() == doctest::Approx(1.0));  // identification point for a = 1/2
    CHECK_FALSE(w.beyond_bilip());
    const EpsilonWeighting beyond{kLn2 + 0.01, 0.5};
    CHECK(beyond.beyond_bilip());
    CHECK(beyond.beta() > 1.0);

    EpsilonWeighting bad{-1.0, 0.5};
    CHECK_THROWS_AS(bad.validate(), InputError);
}

TEST_CASE("dijkstra agrees with a floyd-warshall oracle") {
    const auto G = two_point_filling();
    const EpsilonWeighting w = wln2();
    const WeightedPaths wp = compute_weighted_paths(G, w);

    const int V = G.size();
    Eigen::MatrixXd fw =
        Eigen::MatrixXd::Constant(V, V, std::numeric_limits<double>::infinity());
    for (int u = 0; u < V; ++u) {
        fw(u, u) = 0.0;
        for (int v : G.adjacency[u])
            fw(u, v) = w.edge_length(G.level_of(u), G.level_of(v));
    }
    for (int k = 0; k < V; ++k)
        for (int i = 0; i < V; ++i)
            for (int j = 0; j < V; ++j)
                fw(i, j) = std::min(fw(i, j), fw(i, k) + fw(k, j));

    for (int u = 0; u < V; ++u)
        for (int v = 0; v < V; ++v)
            CHECK(wp(u, v) == doctest::Approx(fw(u, v)).epsilon(1e-12));
}

TEST_CASE("weighted paths are consistent and realize their length") {
    const auto G = two_point_filling();
    const EpsilonWeighting w = wln2();
    const WeightedPaths wp = compute_weighted_paths(G, w);
    for (int u = 0; u < G.size(); ++u)
        for (int v = 0; v < G.size(); ++v) {
            const GeodesicPath p = weighted_path(wp, u, v);
            REQUIRE(p.front() == u);
            REQUIRE(p.back() == v);
            CHECK(path_length_eps(G, w, p) ==
                  doctest::Approx(wp(u, v)).epsilon(1e-12));
        }
    // the all-vertical path is a weighted geodesic
    CHECK(wp(0, 6) ==
          doctest::Approx(path_length_eps(G, w, {0, 1, 2, 4, 6})).epsilon(1e-12));
}

TEST_CASE("vertical distances telescope to the closed-form tail") {
    const auto G = chain7();
    const EpsilonWeighting w = wln2();
    const WeightedPaths wp = compute_weighted_paths(G, w);
    for (int u = 0; u < G.size(); ++u)
        for (int v = u; v < G.size(); ++v)
            CHECK(wp(u, v) == doctest::Approx(w.truncated_tail(
                                  G.level_of(u), G.level_of(v)))
                                  .epsilon(1e-12));
}

TEST_CASE("refusal above the materialization cap") {
    FillingParams p;
    p.n_min = 0;
    p.n_max = 0;
    std::vector<std::pair<int, int>> many;
    for (int i = 0; i < 5001; ++i) many.emplace_back(0, i);
    const auto big = graph_from_parts(p, many, {});
    CHECK_THROWS_AS(compute_weighted_paths(big, wln2()), InputError);
}

TEST_CASE("boundary distance interval: frozen two-point value") {
    const auto G = two_point_filling();
    const EpsilonWeighting w = wln2();
    const WeightedPaths wp = compute_weighted_paths(G, w);

    const BoundaryDistanceInterval iv = boundary_distance(G, wp, w, 0, 1);
    CHECK(iv.via_u == 6);
    CHECK(iv.via_v == 7);
    CHECK(iv.level_used == 2);
    // two hops through level 1: 2 * (1/eps)(1 - e^{-eps}) e^{-eps}
    CHECK(iv.center == doctest::Approx(0.5 / kLn2));
    CHECK(iv.tail_bound == doctest::Approx(2.0 * w.tail(2)));
    CHECK(iv.upper - iv.center == doctest::Approx(iv.tail_bound));
    CHECK(iv.center - iv.lower == doctest::Approx(iv.tail_bound));

    const BoundaryDistanceInterval same = boundary_distance(G, wp, w, 1, 1);
    CHECK(same.center == 0.0);
    CHECK(same.lower == 0.0);
    CHECK(same.upper == 0.0);
}

TEST_CASE("boundary intervals nest and shrink as the window deepens") {
    const auto Z = two_point();
    const EpsilonWeighting w = wln2();
    FillingParams p;
    p.a = 0.5;
    p.tau = 4.0;
    p.n_min = -2;
    p.n_max = 2;
    const auto G = build_filling(Z, p);
    p.n_max = 4;  // per-level nets are independent, so this is an extension
    const auto H = build_filling(Z, p);

    const auto iv = boundary_distance(G, compute_weighted_paths(G, w), w, 0, 1);
    const auto jv = boundary_distance(H, compute_weighted_paths(H, w), w, 0, 1);
    CHECK(jv.level_used == 4);
    CHECK(iv.lower <= jv.lower + 1e-12);
    CHECK(jv.upper <= iv.upper + 1e-12);
    CHECK(jv.upper - jv.lower < iv.upper - iv.lower);
}

TEST_CASE("boundary gauge: chain proxy is exact, general is an upper bound") {
    const auto C = chain7();
    const EpsilonWeighting w = wln2();
    {
        const WeightedPaths wp = compute_weighted_paths(C, w);
        const BoundaryGauge g = boundary_gauge(C, wp, w);
        REQUIRE(g.top_vertex == std::vector<int>{6});
        for (int x = 0; x < C.size(); ++x)
            CHECK(g.empirical[x] ==
                  doctest::Approx(g.proxy[x]).epsilon(1e-12));
    }
    {
        const auto G = two_point_filling();
        const WeightedPaths wp = compute_weighted_paths(G, w);
        const BoundaryGauge g = boundary_gauge(G, wp, w);
        for (int x = 0; x < G.size(); ++x) {
            CHECK(g.proxy[x] ==
                  doctest::Approx(w.tail(G.level_of(x))).epsilon(1e-12));
            CHECK(g.empirical[x] <= g.proxy[x] * (1.0 + 1e-9));
        }
    }
}

TEST_CASE("uniform curve stats on the chain") {
    const auto C = chain7();
    const EpsilonWeighting w = wln2();
    const WeightedPaths wp = compute_weighted_paths(C, w);
    const BoundaryGauge g = boundary_gauge(C, wp, w);
    const UniformCurveStats s =
        check_uniform_curve(C, w, wp, g, {0, 1, 2, 3, 4, 5, 6});
    CHECK(s.length_ratio == doctest::Approx(1.0));
    CHECK(s.cigar_ratio > 0.0);
    CHECK(s.cigar_ratio <= 1.0 + 1e-12);
    CHECK(s.A() == doctest::Approx(std::max(s.length_ratio, s.cigar_ratio)));
}

TEST_CASE("admissibility is exactly 1 on the chain, finite in general") {
    const EpsilonWeighting w = wln2();
    {
        const auto C = chain7();
        const auto sp = compute_shortest_paths(C);
        const WeightedPaths wp = compute_weighted_paths(C, w);
        const AdmissibilityResult a = measure_admissibility(C, w, sp, wp);
        CHECK(a.M == doctest::Approx(1.0));
        CHECK(a.pairs == 21);
    }
    {
        const auto G = two_point_filling();
        const auto sp = compute_shortest_paths(G);
        const WeightedPaths wp = compute_weighted_paths(G, w);
        const AdmissibilityResult a = measure_admissibility(G, w, sp, wp);
        CHECK(a.M >= 1.0);
        CHECK(std::isfinite(a.M));
        if (a.M > 1.0) {
            CHECK(a.worst_u >= 0);
            CHECK(a.worst_v >= 0);
        }
    }
}

TEST_CASE("detour gadget: when is the horizontal edge beaten?") {
    // u, v adjacent at level 0, a common neighbor above (level 1) and one
    // below (level -1).  The only simple u-v paths are the edge itself and
    // the two two-step detours.
    FillingParams p;
    p.n_min = -1;
    p.n_max = 1;
    const auto G = graph_from_parts(
        p, {{-1, 3}, {0, 0}, {0, 1}, {1, 2}},
        {{1, 2}, {1, 3}, {2, 3}, {0, 1}, {0, 2}});

    for (double eps : {1.0, 2.0}) {
        const EpsilonWeighting w{eps, 0.5};
        const WeightedPaths wp = compute_weighted_paths(G, w);
        const double direct = path_length_eps(G, w, {1, 2});
        const double via_up = path_length_eps(G, w, {1, 3, 2});
        const double via_down = path_length_eps(G, w, {1, 0, 2});
        CHECK(direct == doctest::Approx(1.0));
        CHECK(via_up == doctest::Approx(2.0 * (1.0 - std::exp(-eps)) / eps));
        // dropping a level always costs a factor 2(e^eps - 1)/eps >= 2
        CHECK(via_down > direct);
        CHECK(wp(1, 2) ==
              doctest::Approx(std::min(direct, via_up)).epsilon(1e-12));
    }
    // the upward detour wins exactly when 2(1 - e^{-eps}) < eps
    CHECK(2.0 * (1.0 - std::exp(-1.0)) > 1.0);   // eps = 1: edge stays
    CHECK(2.0 * (1.0 - std::exp(-2.0)) < 2.0);   // eps = 2: detour wins
}
