// Command-line front end: validate inputs, build filling graphs, run the
// comparison suites, and self-check the half-plane oracle.
//
// Exit codes: 0 ok, 2 bad input or constraint violation, 3 tolerance /
// verification failure, 4 internal assertion.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "hypfill/errors.hpp"
#include "hypfill/filling.hpp"
#include "hypfill/halfplane.hpp"
#include "hypfill/metric_space.hpp"
#include "hypfill/verify.hpp"

namespace fs = std::filesystem;
using namespace hypfill;

namespace {

FiniteMetricSpace load_space(const RunConfig& cfg) {
    if (cfg.input_path.empty()) throw InputError("no input file given");
    FiniteMetricSpace Z = [&] {
        if (cfg.format == "matrix")
            return load_metric_csv(cfg.input_path, cfg.rel_tol);
        if (cfg.format == "points") {
            const auto m = cfg.metric == "chebyshev"
                               ? FiniteMetricSpace::PointMetric::Chebyshev
                               : FiniteMetricSpace::PointMetric::Euclidean;
            return load_metric_points(cfg.input_path, m, cfg.theta);
        }
        throw InputError("unknown input format '" + cfg.format + "'");
    }();
    if (cfg.format == "matrix" && cfg.theta != 1.0) Z = Z.snowflaked(cfg.theta);
    return Z;
}

void write_file(const fs::path& p, const std::string& body) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw InputError("cannot write " + p.string());
    f << body;
}

int cmd_validate(const RunConfig& cfg) {
    const FiniteMetricSpace Z = load_space(cfg);
    const ValidationReport vr = validate_metric(Z.matrix(), cfg.rel_tol);
    const ScaleStats st = scale_stats(Z, cfg.a);
    nlohmann::json j;
    j["points"] = Z.size();
    j["diameter"] = st.diameter;
    j["min_positive"] = std::isfinite(st.min_positive)
                            ? nlohmann::json(st.min_positive)
                            : nlohmann::json();
    j["suggested_window"] = {st.suggested_n_min, st.suggested_n_max};
    j["degenerate"] = st.degenerate;
    j["errors"] = nlohmann::json::array();
    for (const auto& v : vr.errors) j["errors"].push_back(v.describe(Z));
    j["warnings"] = nlohmann::json::array();
    for (const auto& v : vr.warnings) j["warnings"].push_back(v.describe(Z));
    std::cout << j.dump(2) << "\n";
    return vr.ok() ? 0 : 2;
}

void write_dot_if_small(const fs::path& dir, const FillingGraph& G) {
    if (G.size() < 2000)
        write_file(dir / "graph.dot", graph_to_dot(G));
    else
        std::cerr << "graph.dot skipped: " << G.size() << " vertices\n";
}

int cmd_build(const RunConfig& cfg) {
    const FiniteMetricSpace Z = load_space(cfg);
    const ScaleStats st = scale_stats(Z, cfg.a);
    FillingParams p;
    p.a = cfg.a;
    p.tau = cfg.tau;
    p.n_min = cfg.n_min.value_or(st.suggested_n_min);
    p.n_max = cfg.n_max.value_or(st.suggested_n_max);
    p.mode = cfg.mode();
    p.order_seed = cfg.order_seed;
    const FillingGraph G = build_filling(Z, p);

    const fs::path dir = cfg.output_dir.empty() ? "." : cfg.output_dir;
    fs::create_directories(dir);
    write_file(dir / "graph.json", graph_to_json(G).dump(2) + "\n");
    write_dot_if_small(dir, G);
    std::cout << "vertices " << G.size() << " edges " << G.edge_count()
              << " window [" << p.n_min << ", " << p.n_max << "]\n";
    return 0;
}

int cmd_verify(const RunConfig& cfg) {
    const FiniteMetricSpace Z = load_space(cfg);
    const VerificationOutput out = run_verification(Z, cfg);

    const fs::path dir = cfg.output_dir.empty() ? "." : cfg.output_dir;
    fs::create_directories(dir);
    write_file(dir / "report.json", out.report.to_json().dump(2) + "\n");
    write_file(dir / "graph.json", graph_to_json(out.graph).dump(2) + "\n");
    write_dot_if_small(dir, out.graph);
    write_file(dir / "pairs.csv", out.pairs_csv);

    const int bad = out.report.hard_failures();
    for (const auto& r : out.report.records) {
        std::printf("%-28s %-14s %s", r.lemma_id.c_str(),
                    r.regime.empty() ? "-" : r.regime.c_str(),
                    r.passed ? "pass" : "FAIL");
        if (!std::isnan(r.epsilon)) std::printf("  eps=%.6g", r.epsilon);
        if (!std::isnan(r.ratio_max))
            std::printf("  ratio=[%.4g, %.4g]", r.ratio_min, r.ratio_max);
        if (!std::isnan(r.additive_defect_max))
            std::printf("  defect<=%.4g", r.additive_defect_max);
        std::printf("\n");
    }
    for (const auto& w : out.report.warnings)
        std::cout << "warning: " << w << "\n";
    std::cout << "window [" << out.n_min << ", " << out.n_max << "], "
              << out.graph.size() << " vertices, hard failures: " << bad
              << "\n";
    return bad == 0 ? 0 : 4;
}

int cmd_oracle(double tol) {
    // Busemann truncation on the pinned grid: t = 30 must land within tol
    // of the closed form -log y.
    int checked = 0;
    double worst = 0.0;
    for (int e = -3; e <= 3; ++e)
        for (double x : {-10.0, -5.0, 0.0, 3.0, 10.0}) {
            const HalfPlanePoint p{x, std::pow(10.0, e)};
            const double gap = std::abs(busemann_numeric(p, 30.0) + std::log(p.y));
            worst = std::max(worst, gap);
            ++checked;
            if (gap > tol) {
                std::cerr << "oracle miss at (" << p.x << ", " << p.y
                          << "): gap " << gap << "\n";
                return 3;
            }
        }
    // distance sanity: symmetry and a known closed form d(i, e i) = 1
    const double d1 = hyp_distance({0.0, 1.0}, {0.0, std::exp(1.0)});
    if (std::abs(d1 - 1.0) > 1e-12) return 3;
    // uniformized length of a vertical segment equals the height gap
    const double len =
        uniformized_polyline_length({{0.0, 1.0}, {0.0, 2.0}}, 1e-10);
    if (std::abs(len - 1.0) > 1e-8) return 3;
    std::cout << "oracle grid ok: " << checked << " points, worst gap "
              << worst << "\n";
    return 0;
}

RunConfig preload_config(int argc, char** argv) {
    for (int i = 1; i + 1 < argc; ++i)
        if (std::string(argv[i]) == "--config") {
            std::ifstream f(argv[i + 1]);
            if (!f) throw InputError(std::string("cannot read config ") +
                                     argv[i + 1]);
            return RunConfig::from_json(nlohmann::json::parse(f));
        }
    return RunConfig{};
}

}  // namespace

int main(int argc, char** argv) {
    try {
        RunConfig cfg = preload_config(argc, argv);

        CLI::App app{"hyperbolic filling graphs and their uniformization"};
        app.require_subcommand(1);
        std::string config_path;  // consumed by preload_config
        app.add_option("--config", config_path, "JSON config; flags override");

        auto add_common = [&](CLI::App* c) {
            c->add_option("--config", config_path, "JSON config; flags override");
            c->add_option("input", cfg.input_path, "metric input file");
            c->add_option("--format", cfg.format, "matrix | points");
            c->add_option("--metric", cfg.metric, "euclidean | chebyshev");
            c->add_option("--theta", cfg.theta, "snowflake exponent");
            c->add_option("--rel-tol", cfg.rel_tol, "metric validation tolerance");
            c->add_option("--a", cfg.a, "level scale in (0,1)");
        };
        auto add_graph = [&](CLI::App* c) {
            c->add_option("--tau", cfg.tau, "ball dilation, > max{3, 1/(1-a)}");
            c->add_option("--n-min", [&cfg](const CLI::results_t& v) {
                cfg.n_min = std::stoi(v[0]);
                return true;
            }, "deepest level");
            c->add_option("--n-max", [&cfg](const CLI::results_t& v) {
                cfg.n_max = std::stoi(v[0]);
                return true;
            }, "finest level");
            c->add_option("--mode", cfg.intersection_mode,
                          "witness_scan | center_sum");
            c->add_option("--order-seed", cfg.order_seed,
                          "net greediness order; 0 keeps input order");
            c->add_option("--out", cfg.output_dir, "output directory");
        };

        CLI::App* validate = app.add_subcommand("validate",
                                                "check a metric input");
        add_common(validate);

        CLI::App* build = app.add_subcommand("build", "emit the filling graph");
        add_common(build);
        add_graph(build);

        CLI::App* verify = app.add_subcommand("verify",
                                              "run every comparison suite");
        add_common(verify);
        add_graph(verify);
        verify->add_option("--epsilon", cfg.epsilons,
                           "uniformization densities e^{-eps h}; repeatable");
        verify->add_option("--seed", cfg.seed, "master sampling seed");
        verify->add_option("--max-levels", cfg.max_levels, "window size cap");
        verify->add_option("--quadruples", cfg.quadruple_budget,
                           "sampled four-point budget");
        verify->add_option("--csv-rows", cfg.csv_rows, "pairs.csv row cap");

        CLI::App* oracle = app.add_subcommand(
            "oracle-halfplane", "self-check the continuous model");
        double oracle_tol = 1e-6;
        oracle->add_option("--tol", oracle_tol, "grid tolerance");

        CLI11_PARSE(app, argc, argv);

        if (app.got_subcommand(validate)) return cmd_validate(cfg);
        if (app.got_subcommand(build)) return cmd_build(cfg);
        if (app.got_subcommand(verify)) return cmd_verify(cfg);
        if (app.got_subcommand(oracle)) return cmd_oracle(oracle_tol);
        return 2;
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const OracleError& e) {
        std::cerr << "oracle error: " << e.what() << "\n";
        return 3;
    } catch (const CheckError& e) {
        std::cerr << "internal check failed: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
}
