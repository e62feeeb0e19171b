#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "hypfill/metric_space.hpp"

using namespace hypfill;
namespace fs = std::filesystem;

namespace {

Eigen::MatrixXd line_matrix(const std::vector<double>& xs) {
    const int n = static_cast<int>(xs.size());
    Eigen::MatrixXd d(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) d(i, j) = std::abs(xs[i] - xs[j]);
    return d;
}

std::vector<std::string> default_ids(int n) {
    std::vector<std::string> ids;
    for (int i = 0; i < n; ++i) ids.push_back("p" + std::to_string(i));
    return ids;
}

FiniteMetricSpace line_space(const std::vector<double>& xs) {
    return FiniteMetricSpace::from_matrix(default_ids(static_cast<int>(xs.size())),
                                          line_matrix(xs));
}

FiniteMetricSpace random_cloud(std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Eigen::MatrixXd pts(n, 2);
    for (int i = 0; i < n; ++i) {
        pts(i, 0) = u(rng);
        pts(i, 1) = u(rng);
    }
    return FiniteMetricSpace::from_points(default_ids(n), pts);
}

fs::path tmp_file(const std::string& name, const std::string& body) {
    const fs::path p = fs::temp_directory_path() / name;
    std::ofstream f(p, std::ios::binary);
    f << body;
    return p;
}

}  // namespace

TEST_CASE("matrix constructor symmetrizes noise and rejects real asymmetry") {
    Eigen::MatrixXd d(2, 2);
    d << 0.0, 1.0, 1.0 + 1e-12, 0.0;
    const auto M = FiniteMetricSpace::from_matrix({"a", "b"}, d);
    CHECK(M.dist(0, 1) == M.dist(1, 0));
    CHECK(M.dist(0, 1) == doctest::Approx(1.0));

    d(1, 0) = 0.5;
    CHECK_THROWS_AS(FiniteMetricSpace::from_matrix({"a", "b"}, d), InputError);
}

TEST_CASE("validation catalogues violations by kind") {
    Eigen::MatrixXd d(3, 3);
    d << 0.0, 1.0, 5.0,
         1.0, 0.2, 1.0,   // dirty diagonal
         5.0, 1.0, 0.0;   // 5 > 1 + 1 breaks the triangle through p1
    const ValidationReport r = validate_metric(d);
    CHECK_FALSE(r.ok());
    bool diag = false, tri = false;
    for (const auto& v : r.errors) {
        diag |= v.kind == MetricViolation::Kind::Diagonal;
        tri |= v.kind == MetricViolation::Kind::Triangle;
    }
    CHECK(diag);
    CHECK(tri);

    // within-tolerance slack is a warning, not an error
    Eigen::MatrixXd e(3, 3);
    e << 0.0, 1.0, 2.0, 1.0, 0.0, 1.0, 2.0, 1.0, 0.0;
    e(0, 2) = e(2, 0) = 2.0 + 1e-12;
    const ValidationReport w = validate_metric(e);
    CHECK(w.ok());
    CHECK(!w.warnings.empty());
}

TEST_CASE("point clouds: euclidean vs chebyshev, duplicates rejected") {
    Eigen::MatrixXd pts(3, 2);
    pts << 0.0, 0.0,
           3.0, 4.0,
           0.0, 1.0;
    const auto E = FiniteMetricSpace::from_points(default_ids(3), pts);
    CHECK(E.dist(0, 1) == doctest::Approx(5.0));
    CHECK(E.coords().has_value());

    const auto C = FiniteMetricSpace::from_points(
        default_ids(3), pts, FiniteMetricSpace::PointMetric::Chebyshev);
    CHECK(C.dist(0, 1) == doctest::Approx(4.0));
    CHECK(C.dist(0, 2) == doctest::Approx(1.0));

    Eigen::MatrixXd dup(2, 2);
    dup << 1.0, 2.0, 1.0, 2.0;
    CHECK_THROWS_AS(FiniteMetricSpace::from_points(default_ids(2), dup),
                    InputError);
}

TEST_CASE("snowflake keeps the triangle inequality, scaling scales") {
    const auto M = line_space({0.0, 1.0, 2.0, 3.5});
    const auto S = M.snowflaked(0.5);
    CHECK(S.dist(0, 3) == doctest::Approx(std::sqrt(3.5)));
    CHECK(validate_metric(S.matrix()).ok());
    CHECK_THROWS_AS(M.snowflaked(1.5), InputError);

    const auto T = M.scaled(2.0);
    CHECK(T.diameter() == doctest::Approx(7.0));
    CHECK_FALSE(T.coords().has_value());
}

TEST_CASE("greedy net: frozen line example") {
    const auto M = line_space({0.0, 1.0, 2.0, 3.0});
    CHECK(maximal_separated_net(M, 1.5) == std::vector<int>{0, 2});
    // walk order changes the net but not its validity
    CHECK(maximal_separated_net(M, 1.5, {3, 2, 1, 0}) ==
          std::vector<int>{3, 1});
}

TEST_CASE("greedy net: separation and coverage under random clouds") {
    std::mt19937_64 rng(2024);
    for (int rep = 0; rep < 40; ++rep) {
        const int n = 3 + static_cast<int>(rng() % 28);
        const auto M = random_cloud(rng, n);
        for (double r : {0.3, 0.7}) {
            const auto net = maximal_separated_net(M, r, net_order(n, rng()));
            REQUIRE(!net.empty());
            for (size_t i = 0; i < net.size(); ++i)
                for (size_t j = i + 1; j < net.size(); ++j)
                    CHECK(M.dist(net[i], net[j]) >= r);
            for (int p = 0; p < n; ++p) {
                double best = 1e300;
                for (int q : net) best = std::min(best, M.dist(p, q));
                CHECK(best < r);  // maximality = coverage
            }
        }
    }
}

TEST_CASE("net order: seed 0 is the input order, other seeds permute") {
    const auto id = net_order(10, 0);
    for (int i = 0; i < 10; ++i) CHECK(id[i] == i);
    const auto s7 = net_order(10, 7);
    CHECK(s7 == net_order(10, 7));
    auto sorted = s7;
    std::sort(sorted.begin(), sorted.end());
    CHECK(sorted == id);
}

TEST_CASE("scale stats: frozen windows") {
    const auto M = line_space({0.0, 0.1, 2.0});  // diameter 2, min gap 0.1
    const ScaleStats s = scale_stats(M, 0.5);
    CHECK(s.diameter == doctest::Approx(2.0));
    CHECK(s.min_positive == doctest::Approx(0.1));
    CHECK(s.suggested_n_min == -2);
    CHECK(s.suggested_n_max == 4);
    CHECK_FALSE(s.degenerate);

    // exact powers of a stay strict on both sides
    const auto P = line_space({0.0, 0.25});
    const ScaleStats t = scale_stats(P, 0.5);
    CHECK(t.suggested_n_min == 1);
    CHECK(t.suggested_n_max == 3);

    const auto one = line_space({0.0});
    CHECK(std::isinf(one.min_positive_distance()));
    const ScaleStats u = scale_stats(one, 0.5);
    CHECK(u.degenerate);
    CHECK(u.suggested_n_min == 0);

    const ScaleStats c = scale_stats(M, 0.5, 3);
    CHECK(c.clamped);
    CHECK(c.suggested_n_max - c.suggested_n_min + 1 == 3);
}

TEST_CASE("csv round trip, labeled and bare") {
    const auto bare = tmp_file("hypfill_bare.csv",
                               "a,b,c\n0,1,2\n1,0,1\n2,1,0\n");
    const auto M = load_metric_csv(bare.string());
    REQUIRE(M.size() == 3);
    CHECK(M.id(1) == "b");
    CHECK(M.dist(0, 2) == doctest::Approx(2.0));

    const auto labeled = tmp_file(
        "hypfill_labeled.csv", ",a,b\na, 0, 0.5\nb, 0.5, 0\n");
    const auto L = load_metric_csv(labeled.string());
    CHECK(L.dist(0, 1) == doctest::Approx(0.5));

    const auto ragged = tmp_file("hypfill_ragged.csv", "a,b\n0,1\n1\n");
    CHECK_THROWS_AS(load_metric_csv(ragged.string()), InputError);

    const auto asym = tmp_file("hypfill_asym.csv", "a,b\n0,1\n2,0\n");
    CHECK_THROWS_AS(load_metric_csv(asym.string()), InputError);

    CHECK_THROWS_AS(load_metric_csv("/nonexistent/nope.csv"), InputError);
}

TEST_CASE("point cloud json load with snowflake") {
    const auto p = tmp_file("hypfill_pts.json",
                            R"([{"id":"x","coords":[0,0]},
                                {"id":"y","coords":[4,0]},
                                {"id":"z","coords":[4,3]}])");
    const auto M = load_metric_points(p.string());
    REQUIRE(M.size() == 3);
    CHECK(M.dist(0, 2) == doctest::Approx(5.0));

    const auto S = load_metric_points(
        p.string(), FiniteMetricSpace::PointMetric::Euclidean, 0.5);
    CHECK(S.dist(0, 2) == doctest::Approx(std::sqrt(5.0)));

    const auto bad = tmp_file("hypfill_bad.json", R"({"not":"an array"})");
    CHECK_THROWS_AS(load_metric_points(bad.string()), InputError);
}

TEST_CASE("index_of resolves ids") {
    const auto M = line_space({0.0, 1.0});
    CHECK(M.index_of("p1") == 1);
    CHECK(M.index_of("nope") == -1);
}
