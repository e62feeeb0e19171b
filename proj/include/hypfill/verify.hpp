#ifndef HYPFILL_VERIFY_HPP
#define HYPFILL_VERIFY_HPP

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hypfill/filling.hpp"
#include "hypfill/hyperbolic.hpp"
#include "hypfill/uniformize.hpp"

namespace hypfill {

/// Everything a verification run needs; JSON config file first, CLI flag
/// overrides second.  Window fields left unset resolve from scale_stats:
/// n_min gets `bottom_margin_levels` extra singleton levels (depth for
/// Busemann stabilization), n_max gets `boundary_margin_levels` extra fine
/// levels (shrinks the boundary-interval truncation tail; auto picks
/// ceil(log_a 1e-3)).
struct RunConfig {
    std::string input_path;
    std::string format = "matrix";     // "matrix" | "points"
    std::string metric = "euclidean";  // points only: "euclidean"|"chebyshev"
    double theta = 1.0;                // points only: snowflake exponent
    double rel_tol = 1e-9;

    double a = 0.5;
    double tau = 4.0;
    std::optional<int> n_min;
    std::optional<int> n_max;
    int max_levels = 40;
    int bottom_margin_levels = 4;
    int boundary_margin_levels = -1;  // -1 = auto
    std::string intersection_mode = "witness_scan";
    std::uint64_t order_seed = 0;

    std::vector<double> epsilons;  // empty = {-log a, -(log a)/2}
    std::uint64_t seed = 12345;
    std::uint64_t quadruple_budget = 200000;   // sampled delta fallback
    std::uint64_t triangle_budget = 2000;      // tripod sweep
    std::uint64_t pair_budget = 5000;          // adapted-defect sweep
    std::uint64_t csv_rows = 20000;
    std::string output_dir;

    IntersectionMode mode() const;
    std::vector<double> effective_epsilons() const;
    nlohmann::json to_json() const;
    static RunConfig from_json(const nlohmann::json& j);
};

/// One verified statement.  `kind` is "exact" (asserted, drives exit
/// codes), "additive" (measured defect), or "multiplicative" (measured
/// ratio band).  Measured suites never fail a run.
struct LemmaRecord {
    std::string lemma_id;
    std::string kind;
    std::string regime;
    double epsilon = std::numeric_limits<double>::quiet_NaN();
    int n_window[2] = {0, 0};
    double ratio_min = std::numeric_limits<double>::quiet_NaN();
    double ratio_max = std::numeric_limits<double>::quiet_NaN();
    double additive_defect_max = std::numeric_limits<double>::quiet_NaN();
    std::uint64_t pairs_checked = 0;
    std::uint64_t seed = 0;
    bool hard = false;
    bool passed = true;
    std::string note;

    nlohmann::json to_json() const;
};

struct ComparisonReport {
    nlohmann::json config_echo;
    std::vector<LemmaRecord> records;
    std::vector<std::string> warnings;
    std::map<std::string, double> timing_ms;

    int hard_failures() const;
    const LemmaRecord* find(const std::string& lemma_id,
                            const std::string& regime = "",
                            double epsilon =
                                std::numeric_limits<double>::quiet_NaN()) const;
    nlohmann::json to_json() const;
    /// Deterministic serialization: same config + seed give the same bytes
    /// (wall-clock timing stripped).
    std::string body_bytes() const;
};

struct VerificationOutput {
    ComparisonReport report;
    FillingGraph graph;
    std::string pairs_csv;
    ScaleStats stats;
    int n_min = 0, n_max = 0;
};

/// The full pipeline: resolve the window, build the filling, run every
/// comparison suite at every requested epsilon.  Exact suites record
/// failures instead of throwing (a CheckError inside a suite is caught and
/// recorded); input errors still throw.
VerificationOutput run_verification(const FiniteMetricSpace& Z,
                                    const RunConfig& cfg);

/// Derived per-suite seed so one run seed drives all sampling.
std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t salt);

}  // namespace hypfill

#endif
