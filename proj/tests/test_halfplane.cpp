#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "hypfill/halfplane.hpp"

using namespace hypfill;

TEST_CASE("distance closed form") {
    CHECK(hyp_distance({0, 1}, {0, 1}) == doctest::Approx(0.0));
    // vertical geodesic: log ratio of heights
    CHECK(hyp_distance({0, 1}, {0, std::exp(1.0)}) == doctest::Approx(1.0));
    CHECK(hyp_distance({2, 0.5}, {2, 2}) ==
          doctest::Approx(std::log(4.0)));
    CHECK_THROWS_AS(hyp_distance({0, 0}, {0, 1}), InputError);
}

TEST_CASE("distance invariances and triangle inequality, fuzzed") {
    std::mt19937_64 rng(1234);
    std::uniform_real_distribution<double> ux(-5.0, 5.0);
    std::uniform_real_distribution<double> uy(0.05, 20.0);
    auto pt = [&] { return HalfPlanePoint{ux(rng), uy(rng)}; };
    for (int i = 0; i < 10000; ++i) {
        const auto p = pt(), q = pt(), r = pt();
        const double d = hyp_distance(p, q);
        CHECK(d == doctest::Approx(hyp_distance(q, p)).epsilon(1e-12));
        // horizontal translation and dilation are isometries
        CHECK(hyp_distance({p.x + 3, p.y}, {q.x + 3, q.y}) ==
              doctest::Approx(d).epsilon(1e-9));
        CHECK(hyp_distance({2 * p.x, 2 * p.y}, {2 * q.x, 2 * q.y}) ==
              doctest::Approx(d).epsilon(1e-9));
        CHECK(hyp_distance(p, r) <= d + hyp_distance(q, r) + 1e-9);
    }
}

TEST_CASE("busemann truncation: exact on the ray axis, converges off it") {
    // points on the vertical axis below the start: the maximand is constant
    CHECK(busemann_numeric({0, std::exp(-1.0)}, 5.0) == doctest::Approx(1.0));
    CHECK(busemann_numeric({0, 1}, 7.0) == doctest::Approx(0.0));
    // off-axis: truncation at t = 30 reaches the -log y limit
    CHECK(busemann_numeric({3, 2}, 30.0) ==
          doctest::Approx(-std::log(2.0)).epsilon(1e-6));

    // nonincreasing in t, so every truncation is an upper bound
    const HalfPlanePoint p{1.5, 0.3};
    double prev = busemann_numeric(p, 0.0);
    for (double t = 0.5; t <= 12.0; t += 0.5) {
        const double b = busemann_numeric(p, t);
        CHECK(b <= prev + 1e-12);
        prev = b;
    }
    CHECK(prev >= -std::log(p.y) - 1e-9);
}

TEST_CASE("busemann grid certificate") {
    for (int e = -3; e <= 3; ++e)
        for (double x : {-10.0, -5.0, 0.0, 3.0, 10.0}) {
            const HalfPlanePoint p{x, std::pow(10.0, e)};
            CHECK(std::abs(busemann_numeric(p, 30.0) + std::log(p.y)) <= 1e-6);
        }
}

TEST_CASE("uniformized length: vertical segments are exact") {
    CHECK(uniformized_polyline_length({{0, 1}, {0, 2}}) ==
          doctest::Approx(1.0).epsilon(1e-8));
    CHECK(uniformized_polyline_length({{3, 0.25}, {3, 4}}) ==
          doctest::Approx(3.75).epsilon(1e-8));
    // a polyline sums its segments
    CHECK(uniformized_polyline_length({{0, 1}, {0, 2}, {0, 3}}) ==
          doctest::Approx(2.0).epsilon(1e-8));
    CHECK_THROWS_AS(uniformized_polyline_length({{0, 1}}), InputError);
}

TEST_CASE("uniformized length of a geodesic arc is its euclidean arc length") {
    // with density y, ds_uniform = y * ds_hyp = ds_euclid, so a circular
    // geodesic arc has uniformized length R * (theta1 - theta2)
    const HalfPlanePoint p{0, 1}, q{1, 1};
    const double c = 0.5;  // circle center on the real axis
    const double R = std::hypot(p.x - c, p.y);
    const double th_p = std::atan2(p.y, p.x - c);
    const double th_q = std::atan2(q.y, q.x - c);
    CHECK(uniformized_polyline_length({p, q}) ==
          doctest::Approx(R * (th_p - th_q)).epsilon(1e-8));
}

TEST_CASE("refining a straight segment converges to its euclidean length") {
    auto refined = [](int pieces) {
        std::vector<HalfPlanePoint> pts;
        for (int i = 0; i <= pieces; ++i) {
            const double t = static_cast<double>(i) / pieces;
            pts.push_back({t, 1.0});
        }
        return uniformized_polyline_length(pts);
    };
    const double l1 = refined(1), l4 = refined(4), l16 = refined(16),
                 l64 = refined(64);
    CHECK(l1 > l4);
    CHECK(l4 > l16);
    CHECK(l16 > l64);
    CHECK(l64 >= 1.0);            // arcs never undercut the chord
    CHECK(l64 - 1.0 < 1e-3);
    CHECK(refined(1024) - 1.0 < 1e-4);  // the pinned refinement certificate
}
