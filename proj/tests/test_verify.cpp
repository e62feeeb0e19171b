#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "hypfill/verify.hpp"

using namespace hypfill;

namespace {

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

FiniteMetricSpace square4() {
    Eigen::MatrixXd pts(4, 2);
    pts << 0.0, 0.0, 1.0, 0.0, 0.0, 1.0, 1.0, 1.0;
    return FiniteMetricSpace::from_points({"a", "b", "c", "d"}, pts);
}

RunConfig small_cfg() {
    RunConfig cfg;
    cfg.quadruple_budget = 5000;
    cfg.triangle_budget = 200;
    cfg.pair_budget = 500;
    cfg.csv_rows = 500;
    return cfg;
}

}  // namespace

TEST_CASE("config serialization round trip") {
    RunConfig c;
    c.input_path = "somewhere.csv";
    c.a = 0.4;
    c.tau = 5.0;
    c.n_min = -3;
    c.epsilons = {0.5, 0.9};
    c.order_seed = 17;
    c.intersection_mode = "center_sum";
    const RunConfig d = RunConfig::from_json(c.to_json());
    CHECK(d.input_path == c.input_path);
    CHECK(d.a == c.a);
    CHECK(d.tau == c.tau);
    REQUIRE(d.n_min.has_value());
    CHECK(*d.n_min == -3);
    CHECK_FALSE(d.n_max.has_value());
    CHECK(d.epsilons == c.epsilons);
    CHECK(d.order_seed == 17);
    CHECK(d.mode() == IntersectionMode::CenterSum);

    RunConfig bad;
    bad.intersection_mode = "nope";
    CHECK_THROWS_AS(bad.mode(), InputError);
}

TEST_CASE("default epsilon list brackets the identification point") {
    RunConfig c;
    c.a = 0.5;
    const auto eps = c.effective_epsilons();
    REQUIRE(eps.size() == 2);
    CHECK(eps[0] == doctest::Approx(std::log(2.0)));
    CHECK(eps[1] == doctest::Approx(std::log(2.0) / 2));
    c.epsilons = {0.3};
    CHECK(c.effective_epsilons() == std::vector<double>{0.3});
}

TEST_CASE("sub_seed decorrelates and stays deterministic") {
    CHECK(sub_seed(1, 2) == sub_seed(1, 2));
    CHECK(sub_seed(1, 2) != sub_seed(1, 3));
    CHECK(sub_seed(1, 2) != sub_seed(2, 2));
}

TEST_CASE("two-point run: all hard suites pass, report is complete") {
    const VerificationOutput out = run_verification(two_point(), small_cfg());
    const ComparisonReport& rep = out.report;
    CHECK(rep.hard_failures() == 0);

    for (const char* id :
         {"edge_rule", "height_lipschitz", "product_height_bound",
          "connectivity", "vertical_connection", "geometric_series",
          "adjacent_branch_level", "ray_adjacency", "starlike",
          "busemann_monotone", "busemann_height_gap", "busemann_increment",
          "four_point_delta", "height_product_defect", "branch_height_gap",
          "branch_scale_ratio", "equiradial_diameter", "tripod_defect"}) {
        const LemmaRecord* r = rep.find(id);
        REQUIRE_MESSAGE(r != nullptr, id);
        CHECK_MESSAGE(r->passed, id);
    }
    // per-epsilon suites appear once per epsilon
    int harnack = 0;
    for (const auto& r : rep.records)
        if (r.lemma_id == "harnack_edge") ++harnack;
    CHECK(harnack == 2);

    // the identification-point suite exists for the default list
    const LemmaRecord* bilip = rep.find("boundary_bilip");
    REQUIRE(bilip != nullptr);
    CHECK(std::isfinite(bilip->ratio_min));
    CHECK(bilip->ratio_min > 0.0);
    CHECK(bilip->ratio_max >= bilip->ratio_min);

    CHECK(out.pairs_csv.rfind("u,v,hops", 0) == 0);
    CHECK(out.n_max > out.stats.suggested_n_max);  // boundary margin applied
    CHECK(out.n_min < out.stats.suggested_n_min);  // busemann depth applied
}

TEST_CASE("report body is byte-deterministic, timing is stripped") {
    const auto Z = square4();
    const RunConfig cfg = small_cfg();
    const VerificationOutput a = run_verification(Z, cfg);
    const VerificationOutput b = run_verification(Z, cfg);
    CHECK(a.report.body_bytes() == b.report.body_bytes());
    CHECK(a.report.body_bytes().find("timing") == std::string::npos);
    CHECK(a.report.to_json()["meta"].contains("timing_ms"));
    CHECK(a.pairs_csv == b.pairs_csv);

    // every record carries the resolved window
    for (const auto& r : a.report.records) {
        CHECK(r.n_window[0] == a.n_min);
        CHECK(r.n_window[1] == a.n_max);
    }
}

TEST_CASE("one-point space degenerates to a chain with unit constants") {
    RunConfig cfg = small_cfg();
    const VerificationOutput out = run_verification(one_point(), cfg);
    CHECK(out.report.hard_failures() == 0);
    CHECK(out.graph.size() == out.n_max - out.n_min + 1);

    const LemmaRecord* delta = out.report.find("four_point_delta");
    REQUIRE(delta != nullptr);
    CHECK(delta->additive_defect_max == doctest::Approx(0.0));

    const LemmaRecord* branch = out.report.find("branch_scale_ratio");
    REQUIRE(branch != nullptr);
    CHECK(branch->ratio_min == doctest::Approx(1.0));
    CHECK(branch->ratio_max == doctest::Approx(1.0));

    for (double eps : cfg.effective_epsilons()) {
        const LemmaRecord* adm = out.report.find("admissibility", "", eps);
        REQUIRE(adm != nullptr);
        CHECK(adm->ratio_max == doctest::Approx(1.0));
    }
}

TEST_CASE("explicit window override and max_levels clamp") {
    RunConfig cfg = small_cfg();
    cfg.n_min = -1;
    cfg.n_max = 2;
    const VerificationOutput out = run_verification(square4(), cfg);
    CHECK(out.n_min == -1);
    CHECK(out.n_max == 2);

    RunConfig clamp = small_cfg();
    clamp.max_levels = 5;
    const VerificationOutput c = run_verification(square4(), clamp);
    CHECK(c.n_max - c.n_min + 1 == 5);
    bool warned = false;
    for (const auto& w : c.report.warnings)
        warned |= w.find("clamp") != std::string::npos;
    CHECK(warned);
}

TEST_CASE("center-sum mode skips witness-only suites without failing") {
    RunConfig cfg = small_cfg();
    cfg.intersection_mode = "center_sum";
    const VerificationOutput out = run_verification(two_point(), cfg);
    CHECK(out.report.hard_failures() == 0);
    const LemmaRecord* vc = out.report.find("vertical_connection");
    REQUIRE(vc != nullptr);
    CHECK_FALSE(vc->hard);
    CHECK(vc->note.find("skip") != std::string::npos);
}

TEST_CASE("beyond the identification point only warns") {
    RunConfig cfg = small_cfg();
    cfg.epsilons = {1.5};  // > log 2
    const VerificationOutput out = run_verification(two_point(), cfg);
    CHECK(out.report.hard_failures() == 0);
    bool warned = false;
    for (const auto& w : out.report.warnings)
        warned |= w.find("beyond") != std::string::npos;
    CHECK(warned);
    CHECK(out.report.find("boundary_bilip") == nullptr);
}

TEST_CASE("lemma record json carries the contract fields") {
    LemmaRecord r;
    r.lemma_id = "x";
    r.kind = "multiplicative";
    r.ratio_min = 0.5;
    r.ratio_max = 2.0;
    r.pairs_checked = 7;
    const auto j = r.to_json();
    for (const char* k :
         {"lemma_id", "regime", "epsilon", "n_window", "ratio_min",
          "ratio_max", "additive_defect_max", "pairs_checked", "seed"})
        CHECK_MESSAGE(j.contains(k), k);
    CHECK(j["epsilon"].is_null());
    CHECK(j["additive_defect_max"].is_null());
    CHECK(j["ratio_max"] == 2.0);
}
